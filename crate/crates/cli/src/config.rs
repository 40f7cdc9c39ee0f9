use std::path::Path;

use chafee_core::{Forcing64, Scheme, SolverConfig64};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Everything a run needs; every section has defaults so a config file only
/// lists what it changes.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub forcing: ForcingConfig,
    pub solver: SolverSection,
    pub equilibria: EquilibriaSection,
    pub evolve: EvolveSection,
    pub pullback: PullbackSection,
    pub connect: ConnectSection,
    pub omega: OmegaSection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForcingName {
    Constant,
    Sinusoidal,
    #[serde(alias = "tanh")]
    AsymptoticallyAutonomous,
    Quasiperiodic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ForcingConfig {
    pub kind: ForcingName,
    pub beta0: f64,
    pub amplitude: f64,
    pub omega: f64,
    pub amplitude2: f64,
    pub omega2: f64,
    /// Optional wider certified bounds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta2: Option<f64>,
}

impl Default for ForcingConfig {
    fn default() -> Self {
        Self {
            kind: ForcingName::Sinusoidal,
            beta0: 2.0,
            amplitude: 0.5,
            omega: 1.0,
            amplitude2: 0.0,
            omega2: 0.0,
            beta1: None,
            beta2: None,
        }
    }
}

impl ForcingConfig {
    pub fn build(&self) -> Result<Forcing64, CliError> {
        let f = match self.kind {
            ForcingName::Constant => Forcing64::constant(self.beta0),
            ForcingName::Sinusoidal => Forcing64::sinusoidal(self.beta0, self.amplitude, self.omega),
            ForcingName::AsymptoticallyAutonomous => Forcing64::tanh(self.beta0, self.amplitude),
            ForcingName::Quasiperiodic => {
                Forcing64::quasiperiodic(self.beta0, self.amplitude, self.omega, self.amplitude2, self.omega2)
            }
        }
        .map_err(CliError::config)?;
        match (self.beta1, self.beta2) {
            (None, None) => Ok(f),
            (lo, hi) => {
                let (b1, b2) = f.bounds();
                f.with_bounds(lo.unwrap_or(b1), hi.unwrap_or(b2)).map_err(CliError::config)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub n_modes: usize,
    pub dt: f64,
    pub scheme: Scheme,
    pub snapshot_stride: usize,
    pub dealias: bool,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            n_modes: chafee_core::field::DEFAULT_N_MODES,
            dt: 0.01,
            scheme: Scheme::Etdrk4,
            snapshot_stride: 10,
            dealias: true,
        }
    }
}

impl SolverSection {
    pub fn build(&self, lambda: f64) -> Result<SolverConfig64, CliError> {
        let cfg = SolverConfig64::new(lambda)
            .with_dt(self.dt)
            .with_scheme(self.scheme)
            .with_stride(self.snapshot_stride)
            .with_dealias(self.dealias);
        cfg.validate().map_err(CliError::config)?;
        Ok(cfg)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EquilibriaSection {
    pub lambdas: Vec<f64>,
    pub beta: f64,
}

impl Default for EquilibriaSection {
    fn default() -> Self {
        Self {
            lambdas: vec![0.5, 2.0, 5.0, 10.0],
            beta: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvolveSection {
    pub lambda: f64,
    pub t0: f64,
    pub t1: f64,
    /// Sine coefficients of the initial datum.
    pub coefficients: Vec<f64>,
    /// Field CSV overriding `coefficients`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_csv: Option<String>,
}

impl Default for EvolveSection {
    fn default() -> Self {
        Self {
            lambda: 2.0,
            t0: 0.0,
            t1: 20.0,
            coefficients: vec![1.0, 0.5],
            initial_csv: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PullbackSection {
    pub lambda: f64,
    /// Modes to construct; all `j` with `j² < λ` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modes: Option<Vec<usize>>,
    pub t_a: f64,
    pub t_b: f64,
    pub tol: f64,
    pub stride: f64,
    pub k_max: usize,
}

impl Default for PullbackSection {
    fn default() -> Self {
        Self {
            lambda: 2.0,
            modes: None,
            t_a: 0.0,
            t_b: 10.0,
            tol: 1e-7,
            stride: 5.0,
            k_max: 40,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConnectSection {
    pub lambda: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modes: Option<Vec<usize>>,
    pub epsilon: f64,
    pub s0: f64,
    pub horizon: f64,
    pub probe_trials: usize,
    pub probe_horizon: f64,
}

impl Default for ConnectSection {
    fn default() -> Self {
        Self {
            lambda: 2.0,
            modes: None,
            epsilon: 1e-4,
            s0: -20.0,
            horizon: 60.0,
            probe_trials: 4,
            probe_horizon: 100.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OmegaSection {
    pub lambda: f64,
    pub runs: usize,
    pub horizon: f64,
    pub sample_count: usize,
    pub snapshot_stride: usize,
    pub antisymmetric: bool,
}

impl Default for OmegaSection {
    fn default() -> Self {
        Self {
            lambda: 2.0,
            runs: 50,
            horizon: 50.0,
            sample_count: 12,
            snapshot_stride: 50,
            antisymmetric: false,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }
}
