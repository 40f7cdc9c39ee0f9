use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    /// Relative to the manifest's directory, with `/` separators.
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certification {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunError {
    pub what: String,
    pub message: String,
    pub exit_code: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Versions {
    pub chafee_cli: String,
    pub chafee_core: String,
}

impl Default for Versions {
    fn default() -> Self {
        Self {
            chafee_cli: env!("CARGO_PKG_VERSION").to_string(),
            chafee_core: chafee_core::VERSION.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: ExperimentConfig,
    pub seed: u64,
    pub threads: usize,
    pub artifacts: Vec<Artifact>,
    pub wall_clock_seconds: f64,
    pub versions: Versions,
    pub certifications: Vec<Certification>,
    pub errors: Vec<RunError>,
    pub summary: serde_json::Value,
}

impl RunManifest {
    pub fn all_certified(&self) -> bool {
        self.certifications.iter().all(|c| c.passed)
    }
}

pub fn sha256_file(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Collects artifacts under one output directory.
pub struct ArtifactLog {
    root: PathBuf,
    entries: Vec<Artifact>,
}

impl ArtifactLog {
    pub fn new(root: &Path) -> Self {
        Self {
            root: root.to_path_buf(),
            entries: Vec::new(),
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn record(&mut self, path: &Path) -> Result<(), CliError> {
        let rel = path.strip_prefix(&self.root).unwrap_or(path);
        let rel = rel
            .components()
            .map(|c| c.as_os_str().to_string_lossy().into_owned())
            .collect::<Vec<_>>()
            .join("/");
        let sha256 = sha256_file(path)?;
        self.entries.push(Artifact { path: rel, sha256 });
        Ok(())
    }

    pub fn record_all(&mut self, paths: &[PathBuf]) -> Result<(), CliError> {
        paths.iter().try_for_each(|p| self.record(p))
    }

    pub fn into_entries(mut self) -> Vec<Artifact> {
        self.entries.sort_by(|a, b| a.path.cmp(&b.path));
        self.entries
    }
}

/// Checks every listed artifact exists next to the manifest with the recorded hash.
pub fn verify(manifest: &RunManifest, base: &Path) -> Result<(), CliError> {
    for a in &manifest.artifacts {
        let path = base.join(&a.path);
        if !path.is_file() {
            return Err(CliError::Integrity(format!("missing artifact {}", path.display())));
        }
        let actual = sha256_file(&path)?;
        if actual != a.sha256 {
            return Err(CliError::Integrity(format!(
                "hash mismatch for {}: recorded {}, found {actual}",
                path.display(),
                a.sha256
            )));
        }
    }
    Ok(())
}

pub fn load(path: &Path) -> Result<RunManifest, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}
