//! Experiment driver: configuration, run orchestration, manifests and reports.

pub mod commands;
pub mod config;
pub mod manifest;
pub mod svg;

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use chafee_core::Error as CoreError;

pub use config::ExperimentConfig;
pub use manifest::RunManifest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;
pub const EXIT_CERTIFICATION: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    NonConvergence(String),
    Certification(String),
    /// Missing or modified artifacts behind a manifest.
    Integrity(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::NonConvergence(_) => EXIT_NONCONVERGENCE,
            CliError::Certification(_) | CliError::Integrity(_) => EXIT_CERTIFICATION,
            CliError::Io(_) => 1,
        }
    }

    pub fn config(e: CoreError) -> Self {
        CliError::Config(e.to_string())
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::NonConvergence(_) => "non_convergence",
            CliError::Certification(_) => "certification",
            CliError::Integrity(_) => "integrity",
            CliError::Io(_) => "io",
        }
    }
}

/// Exit code for a failure reported by the numerics.
pub fn core_exit_code(e: &CoreError) -> i32 {
    match e {
        CoreError::InvalidArgument(_) | CoreError::NoSuchEquilibrium { .. } | CoreError::BifurcationValue { .. } => {
            EXIT_CONFIG
        }
        CoreError::NonConvergence { .. } | CoreError::BlowUp { .. } => EXIT_NONCONVERGENCE,
        CoreError::SeedTooLarge { .. } => EXIT_CERTIFICATION,
        _ => 1,
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match core_exit_code(&e) {
            EXIT_CONFIG => CliError::Config(msg),
            EXIT_NONCONVERGENCE => CliError::NonConvergence(msg),
            EXIT_CERTIFICATION => CliError::Certification(msg),
            _ => CliError::Io(msg),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::NonConvergence(m) => write!(f, "numerical non-convergence: {m}"),
            CliError::Certification(m) => write!(f, "certification failure: {m}"),
            CliError::Integrity(m) => write!(f, "artifact integrity failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Equilibria,
    Evolve,
    Pullback,
    Connect,
    Omega,
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Equilibria => "equilibria",
            Command::Evolve => "evolve",
            Command::Pullback => "pullback",
            Command::Connect => "connect",
            Command::Omega => "omega",
            Command::Report => "report",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub command: Command,
    pub config: ExperimentConfig,
    pub out: PathBuf,
    pub threads: usize,
    /// Manifests consumed by `report`.
    pub manifests: Vec<PathBuf>,
}

/// Runs one command, writes `manifest.json` into the output directory and
/// returns it together with the process exit code.
pub fn run(opts: &RunOptions) -> Result<(RunManifest, i32), CliError> {
    if opts.threads == 0 {
        return Err(CliError::Config("--threads must be at least 1".into()));
    }
    std::fs::create_dir_all(&opts.out).map_err(|e| CliError::io(&opts.out, e))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let start = Instant::now();
    let output = pool.install(|| commands::dispatch(opts))?;
    let manifest = RunManifest {
        command: opts.command.name().to_string(),
        config: opts.config.clone(),
        seed: opts.config.seed,
        threads: opts.threads,
        artifacts: output.artifacts,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        versions: manifest::Versions::default(),
        certifications: output.certifications,
        errors: output.errors,
        summary: output.summary,
    };
    let path = opts.out.join("manifest.json");
    chafee_core::io::write_json(&path, &manifest)?;
    let code = if manifest.errors.iter().any(|e| e.exit_code == EXIT_NONCONVERGENCE) {
        EXIT_NONCONVERGENCE
    } else if !manifest.all_certified() || manifest.errors.iter().any(|e| e.exit_code == EXIT_CERTIFICATION) {
        EXIT_CERTIFICATION
    } else {
        EXIT_OK
    };
    Ok((manifest, code))
}
