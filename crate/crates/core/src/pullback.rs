//! Non-autonomous equilibria `ξ_j^±` as pullback limits, their certification,
//! and the Morse decomposition of attractor sections.

use std::fmt;

use serde::Serialize;

use crate::equilibria::{is_bifurcation_value, mode_count, rescale, solve_equilibrium, ShootingConfig, Sign};
use crate::error::{Error, Result};
use crate::evolution::{evolve, evolve_window, SolverConfig, Trajectory};
use crate::field::{Field, Grid};
use crate::forcing::Forcing;
use crate::structure::{envelope_check, pinned_zero_error, STRIP_SLACK};

type Field64 = Field<f64>;
type Trajectory64 = Trajectory<f64>;

/// Pinned zeros must sit within this distance of `kπ/j`.
pub const ZERO_PIN_TOL: f64 = 1e-5;

#[derive(Clone, Debug)]
pub struct PullbackConfig {
    /// Stop once successive windows agree to this sup distance.
    pub tol: f64,
    /// Δ in `s_k = t_a - kΔ`.
    pub stride: f64,
    pub k_max: usize,
    /// `lambda` and `mode_stride` are overridden per call.
    pub solver: SolverConfig<f64>,
    pub shooting: ShootingConfig,
    /// Replaces the default seed `φ_{j,β₁}^±`.
    pub seed: Option<Field64>,
}

impl Default for PullbackConfig {
    fn default() -> Self {
        Self {
            tol: 1e-7,
            stride: 5.0,
            k_max: 40,
            solver: SolverConfig::new(1.0),
            shooting: ShootingConfig::default(),
            seed: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PullbackCertificate {
    pub converged: bool,
    pub final_delta: f64,
    /// `δ_k` strictly decreases from the second extension on.
    pub monotone: bool,
    /// `μ` in a least-squares fit `δ_k ≈ C e^{μ s_k}`.
    pub contraction_rate: Option<f64>,
    pub strip_inside: bool,
    pub strip_violation: f64,
    /// Largest distance of interior zeros from `kπ/j` over the window.
    pub zero_error: f64,
    /// Sup distance between `ξ(t_b)` and `ξ(t_a)` re-evolved at half the step.
    pub invariance_error: f64,
    pub certified: bool,
}

/// `ξ_j^±` sampled on a window `[t_a, t_b]`.
#[derive(Clone, Debug)]
pub struct NonAutEquilibrium {
    pub j: usize,
    pub sign: Sign,
    pub lambda: f64,
    pub times: Vec<f64>,
    pub states: Vec<Field64>,
    pub forcing: Forcing<f64>,
    pub solver: SolverConfig<f64>,
    /// `(s_k, δ_k)` for every extension.
    pub convergence_history: Vec<(f64, f64)>,
    pub certificate: PullbackCertificate,
}

impl NonAutEquilibrium {
    pub fn label(&self) -> MorseLabel {
        MorseLabel::Xi {
            j: self.j,
            sign: self.sign,
        }
    }

    /// Snapshot at `t`, which must be one of the sample times.
    pub fn at(&self, t: f64) -> Result<&Field64> {
        self.times
            .iter()
            .position(|&s| (s - t).abs() <= 1e-9)
            .map(|i| &self.states[i])
            .ok_or_else(|| Error::invalid(format!("{t} is not a sample time of {}", self.label())))
    }

    pub fn as_trajectory(&self) -> Trajectory64 {
        Trajectory {
            t0: self.times[0],
            times: self.times.clone(),
            states: self.states.clone(),
            forcing: self.forcing,
            config: self.solver,
        }
    }
}

fn solver_for(cfg: &SolverConfig<f64>, lambda: f64, j: usize) -> SolverConfig<f64> {
    let mut s = *cfg;
    s.lambda = lambda;
    s.mode_stride = if j >= 2 { j } else { 1 };
    s
}

/// Pulls back from `s_k = t_a - kΔ` until consecutive windows agree.
///
/// For `j ≥ 2` the runs are restricted to the invariant subspace of functions
/// vanishing at `kπ/j`. Exhausting `k_max` returns
/// [`Error::NonConvergence`] carrying the full `(s_k, δ_k)` history.
pub fn pullback_equilibrium(
    grid: &Grid<f64>,
    j: usize,
    sign: Sign,
    lambda: f64,
    forcing: &Forcing<f64>,
    window: (f64, f64),
    cfg: &PullbackConfig,
) -> Result<NonAutEquilibrium> {
    if !(cfg.tol > 0.0 && cfg.stride > 0.0 && cfg.k_max >= 2) {
        return Err(Error::invalid("pullback needs tol > 0, stride > 0 and k_max >= 2"));
    }
    if window.1 < window.0 {
        return Err(Error::invalid("pullback window is reversed"));
    }
    let (beta1, beta2) = forcing.bounds();
    let upper = solve_equilibrium(grid, lambda, beta1, j, sign, &cfg.shooting)?;
    let lower = rescale(&upper, beta2)?;
    let seed = match &cfg.seed {
        Some(s) if s.grid() != grid => {
            return Err(Error::invalid("pullback seed lives on a different grid"));
        }
        Some(s) => s.clone(),
        None => upper.profile.clone(),
    };
    let solver = solver_for(&cfg.solver, lambda, j);
    solver.validate()?;

    let mut history = Vec::new();
    let mut previous: Option<Trajectory64> = None;
    let mut result = None;
    for k in 1..=cfg.k_max {
        let s_k = window.0 - k as f64 * cfg.stride;
        let traj = evolve_window(&seed, s_k, window, forcing, &solver)?;
        if let Some(prev) = &previous {
            let delta = traj
                .states
                .iter()
                .zip(&prev.states)
                .map(|(a, b)| a.sup_distance(b))
                .fold(0.0, f64::max);
            history.push((s_k, delta));
            if delta < cfg.tol {
                result = Some(traj);
                break;
            }
        }
        previous = Some(traj);
    }
    let Some(traj) = result else {
        let last = history.last().map_or(f64::NAN, |h| h.1);
        return Err(Error::NonConvergence {
            what: format!("pullback of xi_{j}_{}", sign.label()),
            iterations: cfg.k_max,
            last,
            history,
        });
    };

    let strip_violation = traj
        .states
        .iter()
        .map(|s| envelope_check(s, &lower.profile, &upper.profile, STRIP_SLACK).violation)
        .fold(0.0, f64::max);
    let zero_error = traj
        .states
        .iter()
        .map(|s| pinned_zero_error(s, j))
        .fold(0.0, f64::max);
    let half = solver.with_dt(solver.dt / 2.0).with_stride(usize::MAX / 4);
    let reevolved = evolve(&traj.states[0], window.0, window.1, forcing, &half)?;
    let invariance_error = reevolved.final_state().sup_distance(traj.final_state());
    let monotone = history.iter().skip(1).collect::<Vec<_>>().windows(2).all(|w| w[1].1 < w[0].1);
    let final_delta = history.last().map_or(0.0, |h| h.1);
    let strip_inside = strip_violation <= STRIP_SLACK;
    let certificate = PullbackCertificate {
        converged: true,
        final_delta,
        monotone,
        contraction_rate: fit_rate(&history),
        strip_inside,
        strip_violation,
        zero_error,
        invariance_error,
        certified: strip_inside && zero_error <= ZERO_PIN_TOL && invariance_error <= 2.0 * cfg.tol,
    };
    Ok(NonAutEquilibrium {
        j,
        sign,
        lambda,
        times: traj.times,
        states: traj.states,
        forcing: *forcing,
        solver,
        convergence_history: history,
        certificate,
    })
}

/// Least-squares slope of `ln y` against `x`; `None` with fewer than two usable points.
pub fn fit_rate(points: &[(f64, f64)]) -> Option<f64> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.1 > 0.0 && p.1.is_finite())
        .map(|&(x, y)| (x, y.ln()))
        .collect();
    if usable.len() < 2 {
        return None;
    }
    let n = usable.len() as f64;
    let mx = usable.iter().map(|p| p.0).sum::<f64>() / n;
    let my = usable.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = usable.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Largest amount by which `candidate` exceeds `ξ` (or undercuts it, for `ξ^-`)
/// at the shared sample times.
pub fn maximality_excess(xi: &NonAutEquilibrium, candidate: &Trajectory64) -> Result<f64> {
    let sign = xi.sign.factor::<f64>();
    let mut shared = 0;
    let mut excess: f64 = 0.0;
    for (t, c) in candidate.times.iter().zip(&candidate.states) {
        let Ok(x) = xi.at(*t) else { continue };
        shared += 1;
        for (&a, &b) in c.values().iter().zip(x.values()) {
            excess = excess.max(sign * (a - b));
        }
    }
    if shared == 0 {
        return Err(Error::invalid("candidate shares no sample time with the equilibrium"));
    }
    Ok(excess)
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayCurve {
    pub times: Vec<f64>,
    /// `‖u(t) - ξ₁^+(t)‖_{H¹₀}`.
    pub h1_distance: Vec<f64>,
    /// Fitted exponent of the decay (negative when attracting).
    pub rate: Option<f64>,
}

/// Forward attraction of `ξ₁^+` from positive data `u0` at time `s0`.
pub fn forward_attraction(
    u0: &Field64,
    s0: f64,
    horizon: f64,
    lambda: f64,
    forcing: &Forcing<f64>,
    cfg: &PullbackConfig,
) -> Result<DecayCurve> {
    if u0.values().iter().any(|&v| v < 0.0) || u0.sup_norm() == 0.0 {
        return Err(Error::invalid("forward attraction needs nonnegative, nonzero data"));
    }
    if !(horizon > 0.0) {
        return Err(Error::invalid("horizon must be positive"));
    }
    let xi = pullback_equilibrium(u0.grid(), 1, Sign::Plus, lambda, forcing, (s0, s0 + horizon), cfg)?;
    let traj = evolve(u0, s0, s0 + horizon, forcing, &xi.solver)?;
    let h1_distance: Vec<f64> = traj
        .states
        .iter()
        .zip(&xi.states)
        .map(|(a, b)| a.h1_distance(b))
        .collect();
    let pairs: Vec<(f64, f64)> = traj.times.iter().copied().zip(h1_distance.iter().copied()).collect();
    Ok(DecayCurve {
        times: traj.times,
        rate: fit_rate(&pairs),
        h1_distance,
    })
}

/// A member of the Morse decomposition `{0} ∪ {ξ_j^±}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MorseLabel {
    Zero,
    Xi { j: usize, sign: Sign },
}

impl fmt::Display for MorseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorseLabel::Zero => write!(f, "zero"),
            MorseLabel::Xi { j, sign } => write!(f, "xi_{j}_{}", sign.label()),
        }
    }
}

/// `[0, ξ₁^+, ξ₁^-, …, ξ_N^+, ξ_N^-]` for `λ ∈ (N², (N+1)²)`.
pub fn morse_inventory(lambda: f64) -> Result<Vec<MorseLabel>> {
    if is_bifurcation_value(lambda) {
        return Err(Error::BifurcationValue { lambda });
    }
    let mut out = vec![MorseLabel::Zero];
    for j in 1..=mode_count(lambda) {
        out.push(MorseLabel::Xi { j, sign: Sign::Plus });
        out.push(MorseLabel::Xi { j, sign: Sign::Minus });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SectionMember {
    Equilibrium { label: MorseLabel },
    /// A point on the unstable manifold of zero, from connection orbit `index`.
    UnstableManifold { index: usize },
}

/// Labelled snapshot of the attractor at one time.
#[derive(Clone, Debug)]
pub struct AttractorSection {
    pub time: f64,
    pub lambda: f64,
    pub members: Vec<(SectionMember, Field64)>,
}

impl AttractorSection {
    pub fn labels(&self) -> Vec<SectionMember> {
        self.members.iter().map(|m| m.0.clone()).collect()
    }
}

/// Assembles `𝒜(t)` from the pullback equilibria and, for `λ ∈ (1, 4)`,
/// samples of the connecting orbits. The equilibria must cover the Morse
/// inventory exactly.
pub fn attractor_section(
    grid: &Grid<f64>,
    time: f64,
    lambda: f64,
    equilibria: &[NonAutEquilibrium],
    connections: &[Trajectory64],
) -> Result<AttractorSection> {
    let inventory = morse_inventory(lambda)?;
    let mut provided: Vec<MorseLabel> = equilibria.iter().map(|e| e.label()).collect();
    provided.push(MorseLabel::Zero);
    provided.sort();
    let mut expected = inventory.clone();
    expected.sort();
    if provided != expected {
        return Err(Error::invalid(format!(
            "equilibria {:?} do not match the inventory {:?}",
            provided.iter().map(ToString::to_string).collect::<Vec<_>>(),
            expected.iter().map(ToString::to_string).collect::<Vec<_>>()
        )));
    }
    if !connections.is_empty() && mode_count(lambda) != 1 {
        return Err(Error::invalid("connection samples are only listed for 1 < lambda < 4"));
    }
    let mut members = Vec::new();
    for label in inventory {
        let field = match label {
            MorseLabel::Zero => Field::zeros(grid),
            _ => equilibria
                .iter()
                .find(|e| e.label() == label)
                .expect("inventory checked")
                .at(time)?
                .clone(),
        };
        members.push((SectionMember::Equilibrium { label }, field));
    }
    for (index, c) in connections.iter().enumerate() {
        let (t, f) = c.state_near(time);
        if (t - time).abs() > 1e-9 {
            return Err(Error::invalid(format!("connection {index} has no sample at {time}")));
        }
        members.push((SectionMember::UnstableManifold { index }, f.clone()));
    }
    Ok(AttractorSection {
        time,
        lambda,
        members,
    })
}
