//! Evolution process `T_β(t, s)` for `u_t = u_xx + λu - β(t)u³` on (0, π),
//! Dirichlet boundary conditions.
//!
//! The state is advanced in sine space, where the linear operator is the
//! diagonal `λ - n²`. Its exponential is applied exactly; only the cubic term
//! is approximated, evaluated pseudospectrally (optionally on a 3/2-padded grid)
//! with β sampled at every stage time.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Grid, SpectralField};
use crate::forcing::Forcing;
use crate::scalar::Real;

/// Largest admissible base step.
pub const MAX_DT: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Fourth-order exponential time differencing Runge-Kutta (Cox-Matthews).
    Etdrk4,
    /// Second-order implicit-explicit BDF, linear part implicit.
    ImexBdf2,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig<S> {
    pub dt: S,
    pub lambda: S,
    pub scheme: Scheme,
    pub dealias: bool,
    pub snapshot_stride: usize,
    /// Restricts the flow to `span{sin(k x) : mode_stride | k}`, the invariant
    /// subspace of functions vanishing at `iπ/mode_stride`. `1` means no restriction.
    pub mode_stride: usize,
    /// Worker threads available to the orchestration layer. The step kernel itself
    /// runs on one thread, so results do not depend on this value.
    pub threads: usize,
    /// Sup-norm guard; defaults to `10³ · max(1, sqrt(λ/β₁))`.
    pub blowup_guard: Option<S>,
}

impl<S: Real> SolverConfig<S> {
    /// ETDRK4 with dealiasing, `dt = 0.01`, a snapshot every 10 steps.
    pub fn new(lambda: S) -> Self {
        Self {
            dt: S::lit(0.01),
            lambda,
            scheme: Scheme::Etdrk4,
            dealias: true,
            snapshot_stride: 10,
            mode_stride: 1,
            threads: 1,
            blowup_guard: None,
        }
    }

    pub fn with_dt(mut self, dt: S) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.snapshot_stride = stride;
        self
    }

    pub fn with_mode_stride(mut self, mode_stride: usize) -> Self {
        self.mode_stride = mode_stride;
        self
    }

    pub fn with_dealias(mut self, dealias: bool) -> Self {
        self.dealias = dealias;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > S::zero() && self.dt <= S::lit(MAX_DT)) {
            return Err(Error::invalid(format!("dt = {} outside (0, {MAX_DT}]", self.dt)));
        }
        if !(self.lambda > S::zero()) || !self.lambda.is_finite() {
            return Err(Error::invalid(format!("lambda = {} must be positive", self.lambda)));
        }
        if self.snapshot_stride == 0 || self.mode_stride == 0 || self.threads == 0 {
            return Err(Error::invalid("strides and thread count must be positive"));
        }
        Ok(())
    }

    fn guard(&self, beta1: S) -> S {
        self.blowup_guard
            .unwrap_or_else(|| S::lit(1e3) * S::one().max((self.lambda / beta1).sqrt()))
    }
}

/// Time-stamped snapshots of one solution.
#[derive(Clone, Debug)]
pub struct Trajectory<S: Real> {
    pub t0: S,
    pub times: Vec<S>,
    pub states: Vec<Field<S>>,
    pub forcing: Forcing<S>,
    pub config: SolverConfig<S>,
}

impl<S: Real> Trajectory<S> {
    pub fn final_state(&self) -> &Field<S> {
        self.states.last().expect("trajectory has at least one state")
    }

    pub fn final_time(&self) -> S {
        *self.times.last().expect("trajectory has at least one time")
    }

    pub fn grid(&self) -> &Grid<S> {
        self.states[0].grid()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Snapshot whose time is closest to `t`.
    pub fn state_near(&self, t: S) -> (S, &Field<S>) {
        let i = self
            .times
            .iter()
            .enumerate()
            .min_by(|a, b| {
                (*a.1 - t)
                    .abs()
                    .partial_cmp(&(*b.1 - t).abs())
                    .expect("finite times")
            })
            .map(|(i, _)| i)
            .expect("nonempty trajectory");
        (self.times[i], &self.states[i])
    }

    /// Largest sup-norm over all snapshots.
    pub fn max_sup_norm(&self) -> S {
        self.states
            .iter()
            .fold(S::zero(), |acc, f| acc.max(f.sup_norm()))
    }
}

/// φ₀..φ₃ of the exponential integrators, `φ_k(z) = Σ z^m/(m+k)!`.
fn phi_functions(z: f64) -> [f64; 4] {
    let e = z.exp();
    if z.abs() < 1.0 {
        let mut out = [e, 0.0, 0.0, 0.0];
        for (k, slot) in out.iter_mut().enumerate().skip(1) {
            let mut term = 1.0 / (1..=k).map(|i| i as f64).product::<f64>();
            let mut sum = term;
            for m in 1..30 {
                term *= z / (m + k) as f64;
                sum += term;
            }
            *slot = sum;
        }
        out
    } else {
        let p1 = (e - 1.0) / z;
        let p2 = (e - 1.0 - z) / (z * z);
        let p3 = (e - 1.0 - z - 0.5 * z * z) / (z * z * z);
        [e, p1, p2, p3]
    }
}

struct EtdCoefficients<S> {
    h: S,
    e: Vec<S>,
    e2: Vec<S>,
    q: Vec<S>,
    f1: Vec<S>,
    f2: Vec<S>,
    f3: Vec<S>,
}

impl<S: Real> EtdCoefficients<S> {
    fn new(linear: &[f64], h: S) -> Self {
        let hf = h.as_f64();
        let n = linear.len();
        let mut c = Self {
            h,
            e: Vec::with_capacity(n),
            e2: Vec::with_capacity(n),
            q: Vec::with_capacity(n),
            f1: Vec::with_capacity(n),
            f2: Vec::with_capacity(n),
            f3: Vec::with_capacity(n),
        };
        for &l in linear {
            let z = l * hf;
            let [e, p1, p2, p3] = phi_functions(z);
            let [e2, q1, _, _] = phi_functions(0.5 * z);
            c.e.push(S::lit(e));
            c.e2.push(S::lit(e2));
            c.q.push(S::lit(0.5 * hf * q1));
            c.f1.push(S::lit(hf * (p1 - 3.0 * p2 + 4.0 * p3)));
            c.f2.push(S::lit(hf * (p2 - 2.0 * p3)));
            c.f3.push(S::lit(hf * (-p2 + 4.0 * p3)));
        }
        c
    }
}

/// Everything a run needs besides the state: spectra, padding and forcing.
struct Propagator<'a, S: Real> {
    grid: Grid<S>,
    padded: Option<Grid<S>>,
    linear: Vec<f64>,
    allowed: Vec<bool>,
    forcing: &'a Forcing<S>,
    guard: S,
}

impl<'a, S: Real> Propagator<'a, S> {
    fn new(grid: &Grid<S>, forcing: &'a Forcing<S>, cfg: &SolverConfig<S>) -> Result<Self> {
        cfg.validate()?;
        let n = grid.n_modes();
        let padded = if cfg.dealias {
            Some(Grid::new(3 * (n + 1) / 2 - 1)?)
        } else {
            None
        };
        let lambda = cfg.lambda.as_f64();
        Ok(Self {
            grid: grid.clone(),
            padded,
            linear: (1..=n).map(|k| lambda - (k * k) as f64).collect(),
            allowed: (1..=n).map(|k| k % cfg.mode_stride == 0).collect(),
            forcing,
            guard: cfg.guard(forcing.beta1),
        })
    }

    fn project(&self, coeffs: &mut [S]) {
        for (c, &ok) in coeffs.iter_mut().zip(&self.allowed) {
            if !ok {
                *c = S::zero();
            }
        }
    }

    /// `-β(t)·P[u³]` in sine space; also returns the sup-norm seen in physical space.
    fn nonlinear(&self, coeffs: &[S], t: S) -> Result<(Vec<S>, S)> {
        let beta = self.forcing.eval(t);
        let work = self.padded.as_ref().unwrap_or(&self.grid);
        let m = work.n_modes();
        let mut spec = vec![S::zero(); m];
        spec[..coeffs.len()].copy_from_slice(coeffs);
        let mut phys = SpectralField::from_coeffs(work, spec)?.to_field().into_values();
        let mut sup = S::zero();
        for v in phys.iter_mut() {
            sup = sup.max(v.abs());
            *v = *v * *v * *v;
        }
        if !(sup <= self.guard) {
            return Err(Error::BlowUp {
                time: t.as_f64(),
                sup_norm: sup.as_f64(),
                guard: self.guard.as_f64(),
            });
        }
        let cubed = Field::from_raw(work, phys).to_spectral();
        let mut out: Vec<S> = cubed.coeffs()[..coeffs.len()]
            .iter()
            .map(|&c| -beta * c)
            .collect();
        self.project(&mut out);
        Ok((out, sup))
    }

    fn etdrk4_step(&self, u: &[S], t: S, c: &EtdCoefficients<S>) -> Result<Vec<S>> {
        let h = c.h;
        let half = S::lit(0.5) * h;
        let two = S::lit(2.0);
        let (nu, _) = self.nonlinear(u, t)?;
        let a: Vec<S> = (0..u.len()).map(|i| c.e2[i] * u[i] + c.q[i] * nu[i]).collect();
        let (na, _) = self.nonlinear(&a, t + half)?;
        let b: Vec<S> = (0..u.len()).map(|i| c.e2[i] * u[i] + c.q[i] * na[i]).collect();
        let (nb, _) = self.nonlinear(&b, t + half)?;
        let cc: Vec<S> = (0..u.len())
            .map(|i| c.e2[i] * a[i] + c.q[i] * (two * nb[i] - nu[i]))
            .collect();
        let (nc, _) = self.nonlinear(&cc, t + h)?;
        Ok((0..u.len())
            .map(|i| {
                c.e[i] * u[i] + c.f1[i] * nu[i] + two * c.f2[i] * (na[i] + nb[i]) + c.f3[i] * nc[i]
            })
            .collect())
    }
}

/// Number of steps for `[s, t]` with base step `dt`.
fn step_count<S: Real>(s: S, t: S, dt: S) -> usize {
    let span = ((t - s) / dt).as_f64();
    if span <= 0.0 {
        0
    } else {
        (span - 1e-9).ceil().max(1.0) as usize
    }
}

/// Step boundaries `s, k·dt, ..., t`: steps sit on the absolute lattice `dt·ℤ`,
/// with partial steps only at the two ends.
fn lattice_boundaries<S: Real>(s: S, t: S, dt: S) -> Vec<S> {
    let slack = S::lit(1e-9) * dt;
    let mut out = vec![s];
    let mut k = (s / dt).ceil();
    if k * dt - s <= slack {
        k = k + S::one();
    }
    loop {
        let x = k * dt;
        if x >= t - slack {
            break;
        }
        out.push(x);
        k = k + S::one();
    }
    if t > s {
        out.push(t);
    }
    out
}

/// Runs the stepper, calling `record(k, time, coeffs)` after step `k` (1-based)
/// for every `k` that is a multiple of `stride` and for the last step.
fn integrate<S: Real>(
    u0: &Field<S>,
    s: S,
    t: S,
    forcing: &Forcing<S>,
    cfg: &SolverConfig<S>,
    stride: usize,
    mut record: impl FnMut(S, &[S]),
) -> Result<Vec<S>> {
    if !(t >= s) {
        return Err(Error::invalid(format!("final time {t} precedes start {s}")));
    }
    let prop = Propagator::new(u0.grid(), forcing, cfg)?;
    let mut u = u0.to_spectral().coeffs().to_vec();
    prop.project(&mut u);
    if !(t > s) {
        return Ok(u);
    }
    match cfg.scheme {
        Scheme::Etdrk4 => {
            let bounds = lattice_boundaries(s, t, cfg.dt);
            let mut cache: Vec<EtdCoefficients<S>> = vec![EtdCoefficients::new(&prop.linear, cfg.dt)];
            let tol = S::lit(1e-12) * cfg.dt;
            let last = bounds.len() - 1;
            for k in 1..=last {
                let (start, end) = (bounds[k - 1], bounds[k]);
                let h = end - start;
                let idx = match cache.iter().position(|c| (c.h - h).abs() <= tol) {
                    Some(i) => i,
                    None => {
                        cache.push(EtdCoefficients::new(&prop.linear, h));
                        cache.len() - 1
                    }
                };
                u = prop.etdrk4_step(&u, start, &cache[idx])?;
                if k % stride == 0 || k == last {
                    record(end, &u);
                }
            }
        }
        Scheme::ImexBdf2 => {
            let n = step_count(s, t, cfg.dt);
            let h = (t - s) / S::from_count(n);
            let three = S::lit(3.0);
            let two = S::lit(2.0);
            let four = S::lit(4.0);
            let denom: Vec<S> = prop
                .linear
                .iter()
                .map(|&l| three - two * h * S::lit(l))
                .collect();
            // Startup with one ETDRK4 step keeps the global order at two.
            let startup = EtdCoefficients::new(&prop.linear, h);
            let mut prev = u.clone();
            let (mut n_prev, _) = prop.nonlinear(&prev, s)?;
            u = prop.etdrk4_step(&prev, s, &startup)?;
            let time1 = if n == 1 { t } else { s + h };
            if 1 % stride == 0 || n == 1 {
                record(time1, &u);
            }
            for k in 2..=n {
                let start = s + S::from_count(k - 1) * h;
                let (n_cur, _) = prop.nonlinear(&u, start)?;
                let next: Vec<S> = (0..u.len())
                    .map(|i| {
                        (four * u[i] - prev[i] + two * h * (two * n_cur[i] - n_prev[i])) / denom[i]
                    })
                    .collect();
                prev = std::mem::replace(&mut u, next);
                n_prev = n_cur;
                let time = if k == n { t } else { s + S::from_count(k) * h };
                if k % stride == 0 || k == n {
                    record(time, &u);
                }
            }
        }
    }
    let sup = SpectralField::from_coeffs(u0.grid(), u.clone())?.to_field().sup_norm();
    if !(sup <= prop.guard) {
        return Err(Error::BlowUp {
            time: t.as_f64(),
            sup_norm: sup.as_f64(),
            guard: prop.guard.as_f64(),
        });
    }
    Ok(u)
}

/// `T_β(t, s) u0`, recorded every `snapshot_stride` steps; the last snapshot is at `t`.
pub fn evolve<S: Real>(
    u0: &Field<S>,
    s: S,
    t: S,
    forcing: &Forcing<S>,
    cfg: &SolverConfig<S>,
) -> Result<Trajectory<S>> {
    if u0.values().iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("initial datum is not finite"));
    }
    let grid = u0.grid().clone();
    let mut times = vec![s];
    let mut initial = u0.to_spectral();
    if cfg.mode_stride > 1 {
        let mut c = initial.coeffs().to_vec();
        for (i, v) in c.iter_mut().enumerate() {
            if (i + 1) % cfg.mode_stride != 0 {
                *v = S::zero();
            }
        }
        initial = SpectralField::from_coeffs(&grid, c)?;
    }
    let mut states = vec![if cfg.mode_stride > 1 {
        initial.to_field()
    } else {
        u0.clone()
    }];
    integrate(u0, s, t, forcing, cfg, cfg.snapshot_stride, |time, coeffs| {
        times.push(time);
        states.push(
            SpectralField::from_coeffs(&grid, coeffs.to_vec())
                .expect("coefficient length matches grid")
                .to_field(),
        );
    })?;
    Ok(Trajectory {
        t0: s,
        times,
        states,
        forcing: *forcing,
        config: *cfg,
    })
}

/// `T_β(t, s) u0` without intermediate snapshots.
pub fn evolve_to<S: Real>(
    u0: &Field<S>,
    s: S,
    t: S,
    forcing: &Forcing<S>,
    cfg: &SolverConfig<S>,
) -> Result<Field<S>> {
    let coeffs = integrate(u0, s, t, forcing, cfg, usize::MAX, |_, _| {})?;
    Ok(SpectralField::from_coeffs(u0.grid(), coeffs)?.to_field())
}

/// Evolves silently from `s` to `t_a`, then records the trajectory on `[t_a, t_b]`.
///
/// Runs sharing `t_a`, `dt` and the stride produce snapshots at identical times.
pub fn evolve_window<S: Real>(
    u0: &Field<S>,
    s: S,
    window: (S, S),
    forcing: &Forcing<S>,
    cfg: &SolverConfig<S>,
) -> Result<Trajectory<S>> {
    let (t_a, t_b) = window;
    if !(s <= t_a && t_a <= t_b) {
        return Err(Error::invalid(format!(
            "window [{t_a}, {t_b}] must follow the start time {s}"
        )));
    }
    let at_window = evolve_to(u0, s, t_a, forcing, cfg)?;
    evolve(&at_window, t_a, t_b, forcing, cfg)
}

/// Two solutions from ordered data, with the largest observed order violation.
#[derive(Clone, Debug)]
pub struct OrderedPair<S: Real> {
    pub upper: Trajectory<S>,
    pub lower: Trajectory<S>,
    /// `max_t max_x (lower - upper)⁺`.
    pub max_violation: S,
}

fn max_excess<S: Real>(below: &Field<S>, above: &Field<S>) -> S {
    below
        .values()
        .iter()
        .zip(above.values())
        .fold(S::zero(), |acc, (&b, &a)| acc.max(b - a))
}

/// Evolves `u1 ≥ u2` with the same step sequence and measures order violations.
pub fn evolve_pair_ordered<S: Real>(
    u1: &Field<S>,
    u2: &Field<S>,
    s: S,
    t: S,
    forcing: &Forcing<S>,
    cfg: &SolverConfig<S>,
) -> Result<OrderedPair<S>> {
    if max_excess(u2, u1) > S::zero() {
        return Err(Error::invalid("initial data are not ordered (u1 >= u2 required)"));
    }
    let upper = evolve(u1, s, t, forcing, cfg)?;
    let lower = evolve(u2, s, t, forcing, cfg)?;
    let max_violation = upper
        .states
        .iter()
        .zip(&lower.states)
        .fold(S::zero(), |acc, (a, b)| acc.max(max_excess(b, a)));
    Ok(OrderedPair {
        upper,
        lower,
        max_violation,
    })
}

/// Violations of `S_{β₂}(t-s)u0 ≤ T_β(t,s)u0 ≤ S_{β₁}(t-s)u0` for `u0 ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SandwichReport<S> {
    /// `max (S_{β₂} u0 - T_β u0)⁺` over snapshots.
    pub lower_violation: S,
    /// `max (T_β u0 - S_{β₁} u0)⁺` over snapshots.
    pub upper_violation: S,
}

pub fn sandwich_check<S: Real>(
    u0: &Field<S>,
    s: S,
    t: S,
    forcing: &Forcing<S>,
    cfg: &SolverConfig<S>,
) -> Result<SandwichReport<S>> {
    if u0.values().iter().any(|&v| v < S::zero()) {
        return Err(Error::invalid("sandwich bounds need a nonnegative initial datum"));
    }
    let (b1, b2) = forcing.bounds();
    let fast = Forcing::constant(b2)?.with_bounds(b1, b2)?;
    let slow = Forcing::constant(b1)?.with_bounds(b1, b2)?;
    let below = evolve(u0, s, t, &fast, cfg)?;
    let middle = evolve(u0, s, t, forcing, cfg)?;
    let above = evolve(u0, s, t, &slow, cfg)?;
    let mut report = SandwichReport {
        lower_violation: S::zero(),
        upper_violation: S::zero(),
    };
    for i in 0..middle.states.len() {
        report.lower_violation = report
            .lower_violation
            .max(max_excess(&below.states[i], &middle.states[i]));
        report.upper_violation = report
            .upper_violation
            .max(max_excess(&middle.states[i], &above.states[i]));
    }
    Ok(report)
}

/// Eigenvalues `λ - k²`, `k = 1..=n`, of the linearization at zero.
pub fn linearized_spectrum_at_zero<S: Real>(lambda: S, n: usize) -> Result<Vec<S>> {
    if n == 0 {
        return Err(Error::invalid("need at least one eigenvalue"));
    }
    Ok((1..=n)
        .map(|k| lambda - S::from_count(k * k))
        .collect())
}

/// Number of positive eigenvalues `λ - k²`.
pub fn unstable_dimension<S: Real>(lambda: S) -> usize {
    (1..)
        .take_while(|&k: &usize| S::from_count(k * k) < lambda)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid() -> Grid<f64> {
        Grid::new(63).unwrap()
    }

    #[test]
    fn phi_functions_agree_across_branch_point() {
        for &z in &[0.999_999, -0.999_999] {
            let series = phi_functions(z);
            let closed = {
                let e = z.exp();
                [
                    e,
                    (e - 1.0) / z,
                    (e - 1.0 - z) / (z * z),
                    (e - 1.0 - z - 0.5 * z * z) / (z * z * z),
                ]
            };
            for k in 0..4 {
                assert_relative_eq!(series[k], closed[k], max_relative = 1e-13);
            }
        }
        let p = phi_functions(0.0);
        assert_eq!(p, [1.0, 1.0, 0.5, 1.0 / 6.0]);
    }

    #[test]
    fn zero_stays_zero() {
        let g = grid();
        let f = Forcing::sinusoidal(2.0, 0.5, 1.0).unwrap();
        let traj = evolve(&Field::zeros(&g), -3.0, 2.0, &f, &SolverConfig::new(2.0)).unwrap();
        assert!(traj.states.iter().all(|s| s.sup_norm() == 0.0));
        assert_eq!(traj.times[0], -3.0);
        assert_eq!(traj.final_time(), 2.0);
    }

    #[test]
    fn final_time_is_exact_and_times_increase() {
        let g = grid();
        let f = Forcing::constant(1.0).unwrap();
        let cfg = SolverConfig::new(2.0).with_dt(0.03).with_stride(7);
        let u0 = Field::from_fn(&g, f64::sin);
        let traj = evolve(&u0, 0.0, 1.0, &f, &cfg).unwrap();
        assert_eq!(traj.final_time(), 1.0);
        for w in traj.times.windows(2) {
            assert!(w[1] > w[0]);
        }
        let same = evolve(&u0, 0.5, 0.5, &f, &cfg).unwrap();
        assert_eq!(same.len(), 1);
    }

    #[test]
    fn subcritical_lambda_decays() {
        let g = grid();
        let f = Forcing::constant(1.0).unwrap();
        let cfg = SolverConfig::new(0.5);
        let u = evolve_to(&Field::from_fn(&g, f64::sin), 0.0, 30.0, &f, &cfg).unwrap();
        assert!(u.sup_norm() < 1e-6);
    }

    #[test]
    fn config_validation() {
        let g = grid();
        let f = Forcing::constant(1.0).unwrap();
        let u = Field::from_fn(&g, f64::sin);
        for cfg in [
            SolverConfig::new(2.0).with_dt(0.2),
            SolverConfig::new(-1.0),
            SolverConfig::new(2.0).with_stride(0),
        ] {
            assert!(matches!(
                evolve(&u, 0.0, 1.0, &f, &cfg),
                Err(Error::InvalidArgument(_))
            ));
        }
        assert!(evolve(&u, 1.0, 0.0, &f, &SolverConfig::new(2.0)).is_err());
    }

    #[test]
    fn blowup_guard_trips() {
        let g = grid();
        let f = Forcing::constant(1.0).unwrap();
        let mut cfg = SolverConfig::new(2.0);
        cfg.blowup_guard = Some(0.5);
        let err = evolve(&Field::from_fn(&g, f64::sin), 0.0, 1.0, &f, &cfg).unwrap_err();
        assert!(matches!(err, Error::BlowUp { .. }));
    }

    #[test]
    fn linear_spectrum_examples() {
        assert_eq!(linearized_spectrum_at_zero(2.0, 3).unwrap(), vec![1.0, -2.0, -7.0]);
        assert_eq!(linearized_spectrum_at_zero(5.0, 3).unwrap(), vec![4.0, 1.0, -4.0]);
        assert_eq!(linearized_spectrum_at_zero(1.0, 2).unwrap(), vec![0.0, -3.0]);
        assert!(linearized_spectrum_at_zero(1.0, 0).is_err());
        assert_eq!(unstable_dimension(5.0), 2);
        assert_eq!(unstable_dimension(2.0), 1);
        assert_eq!(unstable_dimension(1.0), 0);
        assert_eq!(unstable_dimension(10.0), 3);
    }

    #[test]
    fn linear_regime_matches_exact_exponential() {
        // Tiny data: the cubic term is ~1e-24 relative, so the mode grows like e^{(λ-1)t}.
        let g = grid();
        let f = Forcing::sinusoidal(2.0, 0.5, 3.0).unwrap();
        let eps = 1e-12;
        let u = evolve_to(&Field::from_fn(&g, |x| eps * x.sin()), 0.0, 2.0, &f, &SolverConfig::new(2.0))
            .unwrap();
        let expected = eps * 2f64.exp();
        assert_relative_eq!(u.to_spectral().coeffs()[0], expected, max_relative = 1e-10);
    }

    #[test]
    fn imex_bdf2_tracks_etdrk4() {
        let g = grid();
        let f = Forcing::sinusoidal(2.0, 0.5, 1.0).unwrap();
        let u0 = Field::from_fn(&g, |x| 0.4 * x.sin() + 0.2 * (2.0 * x).sin());
        let a = evolve_to(&u0, 0.0, 3.0, &f, &SolverConfig::new(2.0)).unwrap();
        let b = evolve_to(
            &u0,
            0.0,
            3.0,
            &f,
            &SolverConfig::new(2.0).with_scheme(Scheme::ImexBdf2).with_dt(0.001),
        )
        .unwrap();
        assert!(a.sup_distance(&b) < 1e-5);
    }

    #[test]
    fn ordered_pair_identical_inputs() {
        let g = grid();
        let f = Forcing::sinusoidal(2.0, 0.5, 1.0).unwrap();
        let u = Field::from_fn(&g, |x| 0.5 * x.sin());
        let pair = evolve_pair_ordered(&u, &u, 0.0, 2.0, &f, &SolverConfig::new(2.0)).unwrap();
        assert_eq!(pair.max_violation, 0.0);
        let below = u.scale(2.0);
        assert!(evolve_pair_ordered(&u, &below, 0.0, 1.0, &f, &SolverConfig::new(2.0)).is_err());
    }

    #[test]
    fn single_precision_runs() {
        let g = Grid::<f32>::new(31).unwrap();
        let f = Forcing::constant(1.0f32).unwrap();
        let cfg = SolverConfig::new(2.0f32).with_dt(0.05);
        let u = evolve_to(&Field::from_fn(&g, |x| 0.3 * x.sin()), 0.0, 20.0, &f, &cfg).unwrap();
        // Positive hump of amplitude near the λ = 2 equilibrium (≈ 1.1).
        assert!(u.sup_norm() > 0.9 && u.sup_norm() < 1.3);
    }
}
