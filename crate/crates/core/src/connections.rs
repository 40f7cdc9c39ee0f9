//! Heteroclinic connections `ζ_j^±` from zero to `ξ_j^±`.
//!
//! The unstable manifold of zero is shadowed by its leading eigenmode: the
//! seed `±ε sin(jx)` is launched at a time `s₀` in the far past. Two re-runs
//! make the approximation falsifiable: launching twice as early with the seed
//! shrunk by the linear growth factor, and halving `ε` while extending the run
//! by `ln 2/(λ - j²)`. Both must reproduce the trajectory.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::equilibria::{mode_count, Sign};
use crate::error::{Error, Result};
use crate::evolution::{evolve, evolve_window, SolverConfig, Trajectory, MAX_DT};
use crate::field::{Field, Grid};
use crate::forcing::Forcing;
use crate::pullback::{pullback_equilibrium, PullbackConfig};
use crate::structure::{lap_number, pinned_zero_error};

type Field64 = Field<f64>;
type Trajectory64 = Trajectory<f64>;

#[derive(Clone, Debug)]
pub struct ConnectionConfig {
    pub epsilon: f64,
    /// Launch time `s₀ < 0`.
    pub s0: f64,
    /// The trajectory covers `[s₀, s₀ + horizon]`.
    pub horizon: f64,
    /// Tolerance of the launch-recession and ε-halving re-runs.
    pub recession_tol: f64,
    /// Required final H¹ distance to `ξ_j^±`.
    pub forward_tol: f64,
    /// `lambda` and `mode_stride` are overridden per call.
    pub solver: SolverConfig<f64>,
    pub pullback: PullbackConfig,
}

impl Default for ConnectionConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-4,
            s0: -20.0,
            horizon: 60.0,
            recession_tol: 1e-6,
            forward_tol: 1e-4,
            solver: SolverConfig::new(1.0),
            pullback: PullbackConfig::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConnectionCertificate {
    /// Largest `-(±ζ)` on the first hump `(0, π/j)`.
    pub sign_violation: f64,
    /// Largest distance of interior zeros from `kπ/j`; zero for `j = 1`.
    pub zero_error: f64,
    /// Interval construction against full-domain seeding, for `j ≥ 2`.
    pub gluing_error: Option<f64>,
    pub recession_discrepancy: f64,
    pub halving_discrepancy: f64,
    pub forward_final: f64,
    /// Lap number stays `2j + 1` once the solution has escaped the seed ball.
    pub lap_constant: bool,
    pub certified: bool,
}

/// `ζ_j^±` on `[s₀, s₀ + horizon]`.
#[derive(Clone, Debug)]
pub struct Connection {
    pub j: usize,
    pub sign: Sign,
    pub lambda: f64,
    pub epsilon: f64,
    pub launch_time: f64,
    pub trajectory: Trajectory64,
    /// Sup norms from the escape time back to the launch, which must decrease.
    pub backward_norms: Vec<f64>,
    /// `‖ζ(t) - ξ_j^±(t)‖_{H¹₀}` at every sample time.
    pub forward_distance: Vec<f64>,
    /// Closed lap numbers after escape.
    pub lap_sequence: Vec<usize>,
    pub certificate: ConnectionCertificate,
}

fn seeded_solver(cfg: &SolverConfig<f64>, lambda: f64, mode: usize) -> SolverConfig<f64> {
    let mut s = *cfg;
    s.lambda = lambda;
    s.mode_stride = mode.max(1);
    s
}

/// `±ε sin(jx)` launched at `launch`, recorded on `window`.
fn seeded_run(
    grid: &Grid<f64>,
    j: usize,
    sign: Sign,
    epsilon: f64,
    launch: f64,
    window: (f64, f64),
    forcing: &Forcing<f64>,
    solver: &SolverConfig<f64>,
) -> Result<Trajectory64> {
    let amp = sign.factor::<f64>() * epsilon;
    let seed = Field::from_fn(grid, |x| amp * (j as f64 * x).sin());
    evolve_window(&seed, launch, window, forcing, solver)
}

fn max_distance(a: &Trajectory64, b: &Trajectory64) -> f64 {
    a.states
        .iter()
        .zip(&b.states)
        .map(|(x, y)| x.sup_distance(y))
        .fold(0.0, f64::max)
}

fn check_inputs(j: usize, lambda: f64, cfg: &ConnectionConfig) -> Result<()> {
    if !(lambda > (j * j) as f64) {
        return Err(Error::NoSuchEquilibrium { lambda, j });
    }
    if !(cfg.epsilon > 0.0 && cfg.s0 < 0.0 && cfg.horizon > 0.0) {
        return Err(Error::invalid("connections need epsilon > 0, s0 < 0 and horizon > 0"));
    }
    Ok(())
}

/// Mode-one run with its two stability re-runs; returns the trajectory and
/// the two discrepancies.
fn mode_one_runs(
    grid: &Grid<f64>,
    sign: Sign,
    lambda: f64,
    forcing: &Forcing<f64>,
    cfg: &ConnectionConfig,
    solver: &SolverConfig<f64>,
) -> Result<(Trajectory64, f64, f64)> {
    let growth = lambda - 1.0;
    let (eps, s0) = (cfg.epsilon, cfg.s0);
    let window = (s0, s0 + cfg.horizon);
    let main = seeded_run(grid, 1, sign, eps, s0, window, forcing, solver)?;
    let early = 2.0 * s0;
    let recession = seeded_run(grid, 1, sign, eps * (growth * (early - s0)).exp(), early, window, forcing, solver)?;
    let halved_launch = s0 - std::f64::consts::LN_2 / growth;
    let halved = seeded_run(grid, 1, sign, eps / 2.0, halved_launch, window, forcing, solver)?;
    let (rec, half) = (max_distance(&main, &recession), max_distance(&main, &halved));
    Ok((main, rec, half))
}

fn finish(
    j: usize,
    sign: Sign,
    lambda: f64,
    forcing: &Forcing<f64>,
    cfg: &ConnectionConfig,
    trajectory: Trajectory64,
    discrepancies: (f64, f64),
    gluing_error: Option<f64>,
) -> Result<Connection> {
    let (recession, halving) = discrepancies;
    let worst = recession.max(halving);
    if worst > cfg.recession_tol {
        return Err(Error::SeedTooLarge {
            discrepancy: worst,
            tolerance: cfg.recession_tol,
        });
    }
    let grid = trajectory.grid().clone();
    let window = (trajectory.times[0], trajectory.final_time());
    let mut pb = cfg.pullback.clone();
    pb.solver = trajectory.config;
    let xi = pullback_equilibrium(&grid, j, sign, lambda, forcing, window, &pb)?;
    let mut forward_distance = Vec::with_capacity(trajectory.len());
    for (t, u) in trajectory.times.iter().zip(&trajectory.states) {
        forward_distance.push(u.h1_distance(xi.at(*t)?));
    }

    let s = sign.factor::<f64>();
    let hump_end = std::f64::consts::PI / j as f64;
    let points = grid.points();
    let sign_violation = trajectory
        .states
        .iter()
        .flat_map(|u| {
            u.values()
                .iter()
                .zip(points)
                .filter(|(_, &x)| x < hump_end - 1e-12)
                .map(|(&v, _)| -s * v)
        })
        .fold(0.0f64, f64::max);
    let zero_error = if j >= 2 {
        trajectory
            .states
            .iter()
            .map(|u| pinned_zero_error(u, j))
            .fold(0.0, f64::max)
    } else {
        0.0
    };
    let escape_radius = 10.0 * cfg.epsilon;
    let escape = trajectory
        .states
        .iter()
        .position(|u| u.sup_norm() > escape_radius)
        .unwrap_or(trajectory.len());
    let backward_norms: Vec<f64> = trajectory.states[..escape.min(trajectory.len())]
        .iter()
        .rev()
        .map(|u| u.sup_norm())
        .collect();
    let lap_sequence: Vec<usize> = trajectory.states[escape..]
        .iter()
        .map(|u| lap_number(u).count)
        .collect();
    let lap_constant = !lap_sequence.is_empty() && lap_sequence.iter().all(|&l| l == 2 * j + 1);
    let backward_decreasing = backward_norms.windows(2).all(|w| w[1] <= w[0]);
    let forward_final = *forward_distance.last().expect("nonempty trajectory");
    let certified = sign_violation <= 1e-10
        && zero_error <= crate::pullback::ZERO_PIN_TOL
        && gluing_error.map_or(true, |g| g <= 1e-8)
        && forward_final < cfg.forward_tol
        && lap_constant
        && backward_decreasing;
    Ok(Connection {
        j,
        sign,
        lambda,
        epsilon: cfg.epsilon,
        launch_time: cfg.s0,
        trajectory,
        backward_norms,
        forward_distance,
        lap_sequence,
        certificate: ConnectionCertificate {
            sign_violation,
            zero_error,
            gluing_error,
            recession_discrepancy: recession,
            halving_discrepancy: halving,
            forward_final,
            lap_constant,
            certified,
        },
    })
}

/// `ζ_1^±`: seeds `±ε sin(x)` at `s₀` and follows it to `ξ_1^±`.
pub fn connect_mode1(
    grid: &Grid<f64>,
    sign: Sign,
    lambda: f64,
    forcing: &Forcing<f64>,
    cfg: &ConnectionConfig,
) -> Result<Connection> {
    check_inputs(1, lambda, cfg)?;
    let solver = seeded_solver(&cfg.solver, lambda, 1);
    solver.validate()?;
    let (traj, rec, half) = mode_one_runs(grid, sign, lambda, forcing, cfg, &solver)?;
    finish(1, sign, lambda, forcing, cfg, traj, (rec, half), None)
}

/// `ζ_j^±` for `j ≥ 2` by gluing: the mode-one connection of the interval
/// problem, mapped through `u(t, x) = j v(j²t, jx)` and extended by odd
/// reflection. The result is compared with full-domain seeding of `ε sin(jx)`.
pub fn connect_mode_j(
    grid: &Grid<f64>,
    j: usize,
    sign: Sign,
    lambda: f64,
    forcing: &Forcing<f64>,
    cfg: &ConnectionConfig,
) -> Result<Connection> {
    if j < 2 {
        return connect_mode1(grid, sign, lambda, forcing, cfg);
    }
    check_inputs(j, lambda, cfg)?;
    let full_solver = seeded_solver(&cfg.solver, lambda, j);
    full_solver.validate()?;
    let n_small = (grid.n_modes() + 1) / j;
    if n_small < 2 {
        return Err(Error::invalid(format!("{} modes cannot resolve mode {j}", grid.n_modes())));
    }
    let small = Grid::new(n_small - 1)?;
    let jj = (j * j) as f64;
    // Keep sample times aligned while respecting the step bound.
    let refine = (jj * full_solver.dt / MAX_DT).ceil().max(1.0) as usize;
    let small_solver = seeded_solver(&cfg.solver, lambda / jj, 1)
        .with_dt(jj * full_solver.dt / refine as f64)
        .with_stride(full_solver.snapshot_stride * refine);
    let small_forcing = forcing.dilate(1.0 / jj);
    let small_cfg = ConnectionConfig {
        epsilon: cfg.epsilon / j as f64,
        s0: cfg.s0 * jj,
        horizon: cfg.horizon * jj,
        ..cfg.clone()
    };
    let (v, rec, half) = mode_one_runs(&small, sign, lambda / jj, &small_forcing, &small_cfg, &small_solver)?;

    let jf = j as f64;
    let glued_states: Vec<Field64> = v
        .states
        .iter()
        .map(|w| {
            let spec = w.to_spectral();
            Field::from_fn(grid, |x| jf * spec.eval(jf * x))
        })
        .collect();
    let glued = Trajectory {
        t0: cfg.s0,
        times: v.times.iter().map(|t| t / jj).collect(),
        states: glued_states,
        forcing: *forcing,
        config: full_solver,
    };
    let window = (cfg.s0, cfg.s0 + cfg.horizon);
    let direct = seeded_run(grid, j, sign, cfg.epsilon, cfg.s0, window, forcing, &full_solver)?;
    if direct.len() != glued.len() {
        return Err(Error::invalid("glued and direct runs sample different times"));
    }
    let gluing_error = max_distance(&direct, &glued);
    finish(j, sign, lambda, forcing, cfg, glued, (jf * rec, jf * half), Some(gluing_error))
}

#[derive(Clone, Debug)]
pub struct ProbeConfig {
    pub epsilon: f64,
    pub horizon: f64,
    /// Escape radius as a multiple of ε.
    pub escape_factor: f64,
    /// Return radius as a multiple of ε.
    pub return_factor: f64,
    /// Random unstable-mode combinations on top of the pure modes.
    pub random_trials: usize,
    pub seed: u64,
    pub solver: SolverConfig<f64>,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-4,
            horizon: 100.0,
            escape_factor: 10.0,
            return_factor: 0.1,
            random_trials: 0,
            seed: 0,
            solver: SolverConfig::new(1.0),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeTrial {
    /// Unstable-mode coefficients of the seed, before scaling to sup-norm ε.
    pub coefficients: Vec<f64>,
    pub escaped: bool,
    pub escape_time: Option<f64>,
    pub returned: bool,
    /// Smallest sup-norm after escape.
    pub min_sup_after_escape: Option<f64>,
    pub lap_at_escape: Option<usize>,
    pub lap_final: usize,
    pub lap_increased: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomoclinicReport {
    pub lambda: f64,
    pub epsilon: f64,
    pub escape_radius: f64,
    pub return_radius: f64,
    pub horizon: f64,
    pub trials: Vec<ProbeTrial>,
}

impl HomoclinicReport {
    /// Every seed escaped, none came back, no lap number grew.
    pub fn all_clear(&self) -> bool {
        self.trials
            .iter()
            .all(|t| t.escaped && !t.returned && !t.lap_increased)
    }
}

/// Launches `±ε sin(kx)` for every unstable mode `k` (plus random combinations)
/// and checks the solutions leave zero for good.
pub fn no_homoclinic_probe(
    grid: &Grid<f64>,
    lambda: f64,
    forcing: &Forcing<f64>,
    cfg: &ProbeConfig,
) -> Result<HomoclinicReport> {
    let n = mode_count(lambda);
    if crate::equilibria::is_bifurcation_value(lambda) {
        return Err(Error::BifurcationValue { lambda });
    }
    if !(cfg.epsilon > 0.0 && cfg.horizon > 0.0 && cfg.return_factor < 1.0 && cfg.escape_factor > 1.0) {
        return Err(Error::invalid("probe needs epsilon, horizon > 0 and return < 1 < escape"));
    }
    let mut solver = cfg.solver;
    solver.lambda = lambda;
    solver.mode_stride = 1;
    solver.validate()?;

    let mut seeds: Vec<Vec<f64>> = Vec::new();
    for k in 1..=n {
        for s in [1.0, -1.0] {
            let mut c = vec![0.0; n];
            c[k - 1] = s;
            seeds.push(c);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.random_trials {
        seeds.push((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect());
    }

    let escape_radius = cfg.escape_factor * cfg.epsilon;
    let return_radius = cfg.return_factor * cfg.epsilon;
    let mut trials = Vec::with_capacity(seeds.len());
    for coefficients in seeds {
        let base = Field::from_sine_series(grid, &coefficients);
        let sup = base.sup_norm();
        if sup == 0.0 {
            continue;
        }
        let u0 = base.scale(cfg.epsilon / sup);
        let traj = evolve(&u0, 0.0, cfg.horizon, forcing, &solver)?;
        let escape = traj.states.iter().position(|u| u.sup_norm() > escape_radius);
        let (returned, min_after, lap_at_escape) = match escape {
            Some(i) => {
                let min = traj.states[i..]
                    .iter()
                    .map(|u| u.sup_norm())
                    .fold(f64::INFINITY, f64::min);
                (min < return_radius, Some(min), Some(lap_number(&traj.states[i]).count))
            }
            None => (false, None, None),
        };
        let lap_final = lap_number(traj.final_state()).count;
        trials.push(ProbeTrial {
            coefficients,
            escaped: escape.is_some(),
            escape_time: escape.map(|i| traj.times[i]),
            returned,
            min_sup_after_escape: min_after,
            lap_at_escape,
            lap_final,
            lap_increased: lap_at_escape.is_some_and(|l| lap_final > l),
        });
    }
    Ok(HomoclinicReport {
        lambda,
        epsilon: cfg.epsilon,
        escape_radius,
        return_radius,
        horizon: cfg.horizon,
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_inputs() {
        let g = Grid::new(63).unwrap();
        let f = Forcing::constant(1.0).unwrap();
        let cfg = ConnectionConfig::default();
        assert!(matches!(
            connect_mode1(&g, Sign::Plus, 0.5, &f, &cfg),
            Err(Error::NoSuchEquilibrium { .. })
        ));
        let bad = ConnectionConfig { s0: 1.0, ..cfg };
        assert!(connect_mode1(&g, Sign::Plus, 2.0, &f, &bad).is_err());
        assert!(no_homoclinic_probe(&g, 4.0, &f, &ProbeConfig::default()).is_err());
    }

    #[test]
    fn large_seed_fails_recession() {
        let g = Grid::new(63).unwrap();
        let f = Forcing::constant(1.0).unwrap();
        let cfg = ConnectionConfig {
            epsilon: 0.5,
            s0: -2.0,
            horizon: 10.0,
            ..ConnectionConfig::default()
        };
        assert!(matches!(
            connect_mode1(&g, Sign::Plus, 2.0, &f, &cfg),
            Err(Error::SeedTooLarge { .. })
        ));
    }
}
