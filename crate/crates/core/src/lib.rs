//! Numerical laboratory for the non-autonomous Chafee-Infante equation
//! `u_t = u_xx + λu - β(t)u³` on (0, π) with Dirichlet boundary conditions.

pub mod census;
pub mod connections;
pub mod equilibria;
pub mod error;
pub mod evolution;
pub mod field;
pub mod forcing;
pub mod io;
pub mod pullback;
pub mod scalar;
pub mod structure;

pub use error::{Error, Result};
pub use evolution::{evolve, evolve_to, evolve_window, Scheme, SolverConfig, Trajectory};
pub use field::{dst_forward, dst_inverse, norms, Field, Grid, Norms, SpectralField};
pub use forcing::{Direction, Forcing, ForcingKind, HullSample};
pub use scalar::Real;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type Grid64 = Grid<f64>;
pub type Field64 = Field<f64>;
pub type SpectralField64 = SpectralField<f64>;
pub type Forcing64 = Forcing<f64>;
pub type SolverConfig64 = SolverConfig<f64>;
pub type Trajectory64 = Trajectory<f64>;

pub type Grid32 = Grid<f32>;
pub type Field32 = Field<f32>;
pub type Forcing32 = Forcing<f32>;
pub type SolverConfig32 = SolverConfig<f32>;
pub type Trajectory32 = Trajectory<f32>;
