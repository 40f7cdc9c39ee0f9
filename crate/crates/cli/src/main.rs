use std::path::PathBuf;
use std::process::ExitCode;

use chafee_cli::commands::write_error_report;
use chafee_cli::{run, CliError, Command, ExperimentConfig, RunOptions};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "chafee", version, about = "Non-autonomous Chafee-Infante experiments")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args, Clone)]
struct Common {
    /// TOML experiment configuration; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Overrides the seed in the configuration.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Sub {
    /// Steady states for each configured lambda.
    Equilibria(Common),
    /// One forward trajectory.
    Evolve(Common),
    /// Non-autonomous equilibria by pullback.
    Pullback(Common),
    /// Connecting orbits out of zero, plus the homoclinic probe.
    Connect(Common),
    /// Omega-limit census over a seeded random corpus.
    Omega(Common),
    /// Verify manifests and render a consolidated report.
    Report {
        #[command(flatten)]
        common: Common,
        #[arg(required = true)]
        manifests: Vec<PathBuf>,
    },
}

fn options(sub: Sub) -> Result<RunOptions, (Command, PathBuf, CliError)> {
    let (command, common, manifests) = match sub {
        Sub::Equilibria(c) => (Command::Equilibria, c, Vec::new()),
        Sub::Evolve(c) => (Command::Evolve, c, Vec::new()),
        Sub::Pullback(c) => (Command::Pullback, c, Vec::new()),
        Sub::Connect(c) => (Command::Connect, c, Vec::new()),
        Sub::Omega(c) => (Command::Omega, c, Vec::new()),
        Sub::Report { common, manifests } => (Command::Report, common, manifests),
    };
    let mut config = match &common.config {
        Some(path) => ExperimentConfig::load(path).map_err(|e| (command, common.out.clone(), e))?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    Ok(RunOptions {
        command,
        config,
        out: common.out,
        threads: common.threads,
        manifests,
    })
}

fn fail(command: Command, out: &std::path::Path, err: &CliError) -> ExitCode {
    eprintln!("chafee {}: {err}", command.name());
    if let Err(e) = write_error_report(out, command, err) {
        eprintln!("chafee {}: could not write error report: {e}", command.name());
    }
    ExitCode::from(err.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = match options(cli.command) {
        Ok(o) => o,
        Err((command, out, err)) => return fail(command, &out, &err),
    };
    match run(&opts) {
        Ok((manifest, code)) => {
            for e in &manifest.errors {
                eprintln!("chafee {}: {}: {}", opts.command.name(), e.what, e.message);
            }
            for c in manifest.certifications.iter().filter(|c| !c.passed) {
                eprintln!("chafee {}: certification failed: {} ({})", opts.command.name(), c.name, c.detail);
            }
            println!("{}", opts.out.join("manifest.json").display());
            ExitCode::from(code as u8)
        }
        Err(err) => fail(opts.command, &opts.out, &err),
    }
}
