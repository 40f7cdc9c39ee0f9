use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("solution blew up at t = {time}: sup-norm {sup_norm:e} exceeds guard {guard:e}")]
    BlowUp { time: f64, sup_norm: f64, guard: f64 },

    #[error("no equilibrium with mode {j} at lambda = {lambda} (requires lambda > {j}^2)")]
    NoSuchEquilibrium { lambda: f64, j: usize },

    #[error("lambda = {lambda} is a bifurcation value (perfect square); the equilibrium count is undefined there")]
    BifurcationValue { lambda: f64 },

    #[error("no convergence: {what} after {iterations} iterations (last residual {last:e})")]
    NonConvergence {
        what: String,
        iterations: usize,
        last: f64,
        history: Vec<(f64, f64)>,
    },

    #[error("seed amplitude too large: relaunch discrepancy {discrepancy:e} exceeds {tolerance:e}")]
    SeedTooLarge { discrepancy: f64, tolerance: f64 },

    #[error("malformed data in {path}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
