//! Time-dependent cubic coefficient β(t), its translates and hull samples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Closed family of forcing profiles. Each kind has analytic bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ForcingKind<S> {
    /// `β(t) = beta0`.
    Constant { beta0: S },
    /// `β(t) = beta0 + amplitude · sin(omega t)`.
    Sinusoidal { beta0: S, amplitude: S, omega: S },
    /// `β(t) = beta0 + amplitude · tanh(t)`; limits `beta0 ± amplitude`.
    AsymptoticallyAutonomous { beta0: S, amplitude: S },
    /// `β(t) = beta0 + amplitude sin(omega t) + amplitude2 sin(omega2 t)`.
    Quasiperiodic {
        beta0: S,
        amplitude: S,
        omega: S,
        amplitude2: S,
        omega2: S,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Plus,
    Minus,
}

/// `β(t) = profile(shift + time_scale · t)` with certified bounds `beta1 ≤ β ≤ beta2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Forcing<S> {
    pub kind: ForcingKind<S>,
    pub shift: S,
    pub time_scale: S,
    pub beta1: S,
    pub beta2: S,
}

/// Finite stand-in for the asymptotic hull in one time direction.
#[derive(Clone, Debug, PartialEq)]
pub struct HullSample<S> {
    pub direction: Direction,
    pub shifts: Vec<S>,
    pub translates: Vec<Forcing<S>>,
    pub limit: Option<Forcing<S>>,
}

impl<S: Real> ForcingKind<S> {
    fn profile(&self, t: S) -> S {
        match *self {
            ForcingKind::Constant { beta0 } => beta0,
            ForcingKind::Sinusoidal {
                beta0,
                amplitude,
                omega,
            } => beta0 + amplitude * (omega * t).sin(),
            ForcingKind::AsymptoticallyAutonomous { beta0, amplitude } => {
                beta0 + amplitude * t.tanh()
            }
            ForcingKind::Quasiperiodic {
                beta0,
                amplitude,
                omega,
                amplitude2,
                omega2,
            } => beta0 + amplitude * (omega * t).sin() + amplitude2 * (omega2 * t).sin(),
        }
    }

    /// Analytic range of the profile.
    fn range(&self) -> (S, S) {
        match *self {
            ForcingKind::Constant { beta0 } => (beta0, beta0),
            ForcingKind::Sinusoidal {
                beta0, amplitude, ..
            }
            | ForcingKind::AsymptoticallyAutonomous { beta0, amplitude } => {
                (beta0 - amplitude.abs(), beta0 + amplitude.abs())
            }
            ForcingKind::Quasiperiodic {
                beta0,
                amplitude,
                amplitude2,
                ..
            } => {
                let a = amplitude.abs() + amplitude2.abs();
                (beta0 - a, beta0 + a)
            }
        }
    }

    fn params(&self) -> Vec<S> {
        match *self {
            ForcingKind::Constant { beta0 } => vec![beta0],
            ForcingKind::Sinusoidal {
                beta0,
                amplitude,
                omega,
            } => vec![beta0, amplitude, omega],
            ForcingKind::AsymptoticallyAutonomous { beta0, amplitude } => vec![beta0, amplitude],
            ForcingKind::Quasiperiodic {
                beta0,
                amplitude,
                omega,
                amplitude2,
                omega2,
            } => vec![beta0, amplitude, omega, amplitude2, omega2],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ForcingKind::Constant { .. } => "constant",
            ForcingKind::Sinusoidal { .. } => "sinusoidal",
            ForcingKind::AsymptoticallyAutonomous { .. } => "asymptotically_autonomous",
            ForcingKind::Quasiperiodic { .. } => "quasiperiodic",
        }
    }
}

impl<S: Real> Forcing<S> {
    /// Builds a forcing with its analytic bounds; the lower bound must be positive.
    pub fn new(kind: ForcingKind<S>) -> Result<Self> {
        if kind.params().iter().any(|p| !p.is_finite()) {
            return Err(Error::invalid("forcing parameters must be finite"));
        }
        let (lo, hi) = kind.range();
        if lo <= S::zero() {
            return Err(Error::invalid(format!(
                "{} forcing has lower bound {lo} <= 0",
                kind.name()
            )));
        }
        Ok(Self {
            kind,
            shift: S::zero(),
            time_scale: S::one(),
            beta1: lo,
            beta2: hi,
        })
    }

    pub fn constant(beta0: S) -> Result<Self> {
        Self::new(ForcingKind::Constant { beta0 })
    }

    pub fn sinusoidal(beta0: S, amplitude: S, omega: S) -> Result<Self> {
        Self::new(ForcingKind::Sinusoidal {
            beta0,
            amplitude,
            omega,
        })
    }

    pub fn tanh(beta0: S, amplitude: S) -> Result<Self> {
        Self::new(ForcingKind::AsymptoticallyAutonomous { beta0, amplitude })
    }

    pub fn quasiperiodic(beta0: S, amplitude: S, omega: S, amplitude2: S, omega2: S) -> Result<Self> {
        Self::new(ForcingKind::Quasiperiodic {
            beta0,
            amplitude,
            omega,
            amplitude2,
            omega2,
        })
    }

    /// Replaces the certified bounds by a wider pair.
    pub fn with_bounds(mut self, beta1: S, beta2: S) -> Result<Self> {
        let (lo, hi) = self.kind.range();
        if !(beta1 > S::zero() && beta1 <= lo && beta2 >= hi) {
            return Err(Error::invalid(format!(
                "bounds [{beta1}, {beta2}] do not contain the analytic range [{lo}, {hi}] with a positive lower end"
            )));
        }
        self.beta1 = beta1;
        self.beta2 = beta2;
        Ok(self)
    }

    pub fn eval(&self, t: S) -> S {
        self.kind.profile(self.shift + self.time_scale * t)
    }

    /// `t ↦ β(t + s)`.
    pub fn translate(&self, s: S) -> Self {
        Self {
            shift: self.shift + self.time_scale * s,
            ..*self
        }
    }

    /// `t ↦ β(c t)`. Used for the rescaled interval problems.
    pub fn dilate(&self, c: S) -> Self {
        Self {
            time_scale: self.time_scale * c,
            ..*self
        }
    }

    pub fn bounds(&self) -> (S, S) {
        (self.beta1, self.beta2)
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.kind, ForcingKind::Constant { .. })
    }

    /// Closed-form limit of `β(· + t)` as `t → ±∞`, when one exists.
    pub fn limit(&self, direction: Direction) -> Option<Self> {
        match self.kind {
            ForcingKind::Constant { .. } => Some(*self),
            ForcingKind::AsymptoticallyAutonomous { beta0, amplitude } => {
                let forward = (direction == Direction::Plus) == (self.time_scale > S::zero());
                let value = if forward {
                    beta0 + amplitude
                } else {
                    beta0 - amplitude
                };
                let mut lim = Self::constant(value).ok()?;
                lim.beta1 = self.beta1;
                lim.beta2 = self.beta2;
                Some(lim)
            }
            _ => None,
        }
    }

    /// Translates along the escape sequence `±10·2^i` (or one period for the
    /// sinusoidal kind, whose hull is its phase circle).
    pub fn hull_sample(&self, direction: Direction, k: usize) -> Result<HullSample<S>> {
        if k == 0 {
            return Err(Error::invalid("hull sample needs at least one translate"));
        }
        let sign = match direction {
            Direction::Plus => S::one(),
            Direction::Minus => -S::one(),
        };
        let shifts: Vec<S> = match self.kind {
            ForcingKind::Sinusoidal { omega, .. } => {
                let period = S::lit(2.0) * S::PI() / (omega * self.time_scale).abs();
                (0..k)
                    .map(|i| sign * period * S::from_count(i) / S::from_count(k))
                    .collect()
            }
            _ => (0..k)
                .map(|i| sign * S::lit(10.0) * S::lit(2.0).powi(i as i32))
                .collect(),
        };
        let translates = shifts.iter().map(|&s| self.translate(s)).collect();
        Ok(HullSample {
            direction,
            shifts,
            translates,
            limit: self.limit(direction),
        })
    }

    /// Human-readable description used in reports.
    pub fn describe(&self) -> String {
        let p: Vec<String> = self.kind.params().iter().map(|v| v.to_string()).collect();
        format!(
            "{}({}) shift={} scale={}",
            self.kind.name(),
            p.join(", "),
            self.shift,
            self.time_scale
        )
    }
}
