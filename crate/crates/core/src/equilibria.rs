//! Steady states `φ'' + λφ - βφ³ = 0`, `φ(0) = φ(π) = 0`.
//!
//! Nontrivial solutions are found by shooting on the slope `φ'(0)` with a
//! fixed-step RK4 integrator and bisecting between slopes whose trajectories
//! reach `j` sign changes before `π` and slopes that do not. The half period of
//! the oscillation grows monotonically with the slope, so the `j`-mode solution
//! is the unique slope where the `j`-th zero lands exactly on the endpoint.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Grid};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor<S: Real>(self) -> S {
        match self {
            Sign::Plus => S::one(),
            Sign::Minus => -S::one(),
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShootingConfig {
    /// Minimum number of RK4 steps across the interval.
    pub min_steps: usize,
    pub max_bracket: usize,
    pub max_bisect: usize,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        Self {
            min_steps: 10_000,
            max_bracket: 60,
            max_bisect: 200,
        }
    }
}

/// A steady state `φ_{j,β}^±`, or the trivial solution for `j = 0`.
#[derive(Clone, Debug)]
pub struct Equilibrium<S: Real> {
    pub j: usize,
    pub sign: Option<Sign>,
    pub lambda: S,
    pub beta: S,
    pub profile: Field<S>,
    pub slope_at_0: S,
    /// Interior zeros in (0, π).
    pub zeros: Vec<S>,
    /// `sup |φ'' + λφ - βφ³|` with the second derivative taken spectrally.
    pub residual: S,
}

/// A dense RK4 path of the shooting problem.
#[derive(Clone, Debug)]
pub struct ShotPath<S> {
    pub x: Vec<S>,
    pub phi: Vec<S>,
    pub dphi: Vec<S>,
}

impl<S: Real> ShotPath<S> {
    /// `½φ'² + ½λφ² - ¼βφ⁴` at every node.
    pub fn energy(&self, lambda: S, beta: S) -> Vec<S> {
        let half = S::lit(0.5);
        let quarter = S::lit(0.25);
        self.phi
            .iter()
            .zip(&self.dphi)
            .map(|(&p, &q)| half * q * q + half * lambda * p * p - quarter * beta * p * p * p * p)
            .collect()
    }
}

struct Shot<S> {
    values: Vec<S>,
    sign_changes: usize,
    end_value: S,
    path: Option<ShotPath<S>>,
}

fn rk4<S: Real>(lambda: S, beta: S, y: (S, S), h: S) -> (S, S) {
    let f = |p: S, q: S| (q, beta * p * p * p - lambda * p);
    let half = S::lit(0.5);
    let (k1p, k1q) = f(y.0, y.1);
    let (k2p, k2q) = f(y.0 + half * h * k1p, y.1 + half * h * k1q);
    let (k3p, k3q) = f(y.0 + half * h * k2p, y.1 + half * h * k2q);
    let (k4p, k4q) = f(y.0 + h * k3p, y.1 + h * k3q);
    let sixth = h / S::lit(6.0);
    let two = S::lit(2.0);
    (
        y.0 + sixth * (k1p + two * k2p + two * k3p + k4p),
        y.1 + sixth * (k1q + two * k2q + two * k3q + k4q),
    )
}

/// Integrates from `x = 0` with `φ(0) = 0`, `φ'(0) = slope`, landing exactly on
/// each of `targets` (increasing, positive). Stops early once `|φ|` passes twice
/// the saddle height `sqrt(λ/β)`, past which no further zero can occur.
fn shoot<S: Real>(lambda: S, beta: S, slope: S, targets: &[S], h_max: S, keep_path: bool) -> Shot<S> {
    let cap = S::lit(2.0) * (lambda / beta).sqrt();
    let mut y = (S::zero(), slope);
    let mut x = S::zero();
    let mut values = Vec::with_capacity(targets.len());
    let mut sign_changes = 0;
    let mut last_sign = 0i8;
    let mut path = keep_path.then(|| ShotPath {
        x: vec![x],
        phi: vec![y.0],
        dphi: vec![y.1],
    });
    let mut escaped = false;
    for &target in targets {
        if !escaped {
            let seg = target - x;
            let m = (seg / h_max).ceil().to_usize().unwrap_or(1).max(1);
            let h = seg / S::from_count(m);
            for i in 1..=m {
                y = rk4(lambda, beta, y, h);
                let s = if y.0 > S::zero() {
                    1
                } else if y.0 < S::zero() {
                    -1
                } else {
                    0
                };
                if s != 0 {
                    if last_sign != 0 && s != last_sign {
                        sign_changes += 1;
                    }
                    last_sign = s;
                }
                let xi = if i == m { target } else { x + S::from_count(i) * h };
                if let Some(p) = path.as_mut() {
                    p.x.push(xi);
                    p.phi.push(y.0);
                    p.dphi.push(y.1);
                }
                if !(y.0.abs() <= cap) {
                    escaped = true;
                    break;
                }
            }
            x = target;
        }
        values.push(if escaped { S::nan() } else { y.0 });
    }
    Shot {
        end_value: if escaped { S::nan() } else { y.0 },
        values,
        sign_changes,
        path,
    }
}

/// Slope, samples and zeros of the `humps`-mode solution on `[0, length]`.
struct ModeSolution<S> {
    slope: S,
    values: Vec<S>,
    zeros: Vec<S>,
}

fn solve_mode<S: Real>(
    lambda: S,
    beta: S,
    humps: usize,
    length: S,
    interior_targets: &[S],
    cfg: &ShootingConfig,
) -> Result<ModeSolution<S>> {
    let mut targets: Vec<S> = interior_targets.to_vec();
    targets.push(length);
    let h_max = length / S::from_count(cfg.min_steps);
    let enough = |p: S| shoot(lambda, beta, p, &targets, h_max, false).sign_changes >= humps;

    let k = S::from_count(humps) * S::PI() / length;
    let excess = (lambda - k * k).max(S::lit(1e-12));
    let mut p = k * (S::lit(4.0) * excess / (S::lit(3.0) * beta)).sqrt();
    let (mut lo, mut hi);
    if enough(p) {
        lo = p;
        let mut found = None;
        for _ in 0..cfg.max_bracket {
            p = p * S::lit(2.0);
            if !enough(p) {
                found = Some(p);
                break;
            }
            lo = p;
        }
        hi = found.ok_or_else(|| Error::NonConvergence {
            what: "slope bracket (upper end)".into(),
            iterations: cfg.max_bracket,
            last: lo.as_f64(),
            history: vec![],
        })?;
    } else {
        hi = p;
        let mut found = None;
        for _ in 0..cfg.max_bracket {
            p = p * S::lit(0.5);
            if enough(p) {
                found = Some(p);
                break;
            }
            hi = p;
        }
        lo = found.ok_or_else(|| Error::NonConvergence {
            what: "slope bracket (lower end)".into(),
            iterations: cfg.max_bracket,
            last: hi.as_f64(),
            history: vec![],
        })?;
    }

    for _ in 0..cfg.max_bisect {
        let mid = S::lit(0.5) * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if enough(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let shot_lo = shoot(lambda, beta, lo, &targets, h_max, true);
    let shot_hi = shoot(lambda, beta, hi, &targets, h_max, true);
    let (slope, shot) = if shot_hi.end_value.is_finite()
        && shot_hi.end_value.abs() < shot_lo.end_value.abs()
    {
        (hi, shot_hi)
    } else {
        (lo, shot_lo)
    };
    let tol = S::lit(1e-6) * (lambda / beta).sqrt();
    if !(shot.end_value.abs() <= tol) {
        return Err(Error::NonConvergence {
            what: format!("shooting for mode {humps}"),
            iterations: cfg.max_bisect,
            last: shot.end_value.as_f64(),
            history: vec![],
        });
    }

    let path = shot.path.expect("path requested");
    let cutoff = length * (S::one() - S::lit(1e-6));
    let mut zeros = Vec::new();
    for i in 1..path.x.len() {
        let (a, b) = (path.phi[i - 1], path.phi[i]);
        if a != S::zero() && (a > S::zero()) != (b > S::zero()) || (b == S::zero() && a != S::zero()) {
            // φ'' vanishes at a zero, so a Newton step from the nearer node is O(h³).
            let near = if a.abs() < b.abs() { i - 1 } else { i };
            let z = path.x[near] - path.phi[near] / path.dphi[near];
            if z < cutoff {
                zeros.push(z);
            }
        }
    }
    let mut values = shot.values;
    values.pop();
    Ok(ModeSolution {
        slope,
        values,
        zeros,
    })
}

fn residual<S: Real>(profile: &Field<S>, lambda: S, beta: S) -> S {
    let d2 = profile.to_spectral().second_derivative();
    d2.values()
        .iter()
        .zip(profile.values())
        .fold(S::zero(), |acc, (&a, &p)| {
            acc.max((a + lambda * p - beta * p * p * p).abs())
        })
}

/// Newton iterations on the collocation equations `D²φ + λφ - βφ³ = 0`.
///
/// The shot profile carries the far-boundary mismatch of the bisected slope,
/// which the spectral second derivative amplifies; a few Newton steps with the
/// dense spectral `D²` remove it. Iterates are kept only while the residual drops.
fn polish<S: Real>(profile: &Field<S>, lambda: S, beta: S) -> Field<S> {
    let grid = profile.grid();
    let n = grid.n_modes();
    let mut d2 = DMatrix::<f64>::zeros(n, n);
    let mut unit = vec![S::zero(); n];
    for k in 0..n {
        unit[k] = S::one();
        let col = Field::from_raw(grid, unit.clone()).to_spectral().second_derivative();
        for (i, v) in col.values().iter().enumerate() {
            d2[(i, k)] = v.as_f64();
        }
        unit[k] = S::zero();
    }
    let (l, b) = (lambda.as_f64(), beta.as_f64());
    let mut best = profile.clone();
    let mut best_res = residual(profile, lambda, beta);
    let mut phi = DVector::from_iterator(n, profile.values().iter().map(|v| v.as_f64()));
    for _ in 0..4 {
        let f = &d2 * &phi + phi.map(|p| l * p - b * p * p * p);
        let mut jac = d2.clone();
        for i in 0..n {
            jac[(i, i)] += l - 3.0 * b * phi[i] * phi[i];
        }
        let Some(step) = jac.lu().solve(&f) else { break };
        phi -= step;
        let candidate = Field::from_raw(grid, phi.iter().map(|&v| S::lit(v)).collect());
        let res = residual(&candidate, lambda, beta);
        if !(res < best_res) {
            break;
        }
        best = candidate;
        best_res = res;
    }
    best
}

/// True when `λ` is (numerically) one of the bifurcation values `1, 4, 9, ...`.
pub fn is_bifurcation_value<S: Real>(lambda: S) -> bool {
    let r = lambda.sqrt().round();
    r >= S::one() && (lambda - r * r).abs() <= S::lit(1e-12) * lambda.max(S::one())
}

/// Number of nontrivial mode families at `λ`: `#{j ≥ 1 : j² < λ}`.
pub fn mode_count<S: Real>(lambda: S) -> usize {
    crate::evolution::unstable_dimension(lambda)
}

impl<S: Real> Equilibrium<S> {
    pub fn trivial(grid: &Grid<S>, lambda: S, beta: S) -> Self {
        Self {
            j: 0,
            sign: None,
            lambda,
            beta,
            profile: Field::zeros(grid),
            slope_at_0: S::zero(),
            zeros: vec![],
            residual: S::zero(),
        }
    }

    pub fn label(&self) -> String {
        match self.sign {
            None => "phi_0".to_string(),
            Some(s) => format!("phi_{}_{}", self.j, s.label()),
        }
    }

    /// `φ → -φ`.
    pub fn negate(&self) -> Self {
        Self {
            sign: self.sign.map(Sign::flip),
            profile: self.profile.neg(),
            slope_at_0: -self.slope_at_0,
            ..self.clone()
        }
    }
}

/// Solves for `φ_{j,β}^±` on the grid.
pub fn solve_equilibrium<S: Real>(
    grid: &Grid<S>,
    lambda: S,
    beta: S,
    j: usize,
    sign: Sign,
    cfg: &ShootingConfig,
) -> Result<Equilibrium<S>> {
    if !(beta > S::zero()) {
        return Err(Error::invalid(format!("beta = {beta} must be positive")));
    }
    if j == 0 {
        return Err(Error::invalid("mode index must be at least 1; use Equilibrium::trivial"));
    }
    if !(lambda > S::from_count(j * j)) {
        return Err(Error::NoSuchEquilibrium {
            lambda: lambda.as_f64(),
            j,
        });
    }
    let sol = solve_mode(lambda, beta, j, S::PI(), grid.points(), cfg)?;
    if sol.zeros.len() != j - 1 {
        return Err(Error::NonConvergence {
            what: format!("mode {j} shooting produced {} interior zeros", sol.zeros.len()),
            iterations: cfg.max_bisect,
            last: f64::NAN,
            history: vec![],
        });
    }
    let plus = Equilibrium {
        j,
        sign: Some(Sign::Plus),
        lambda,
        beta,
        profile: polish(&Field::new(grid, sol.values)?, lambda, beta),
        slope_at_0: sol.slope,
        zeros: sol.zeros,
        residual: S::zero(),
    };
    let mut e = match sign {
        Sign::Plus => plus,
        Sign::Minus => plus.negate(),
    };
    e.residual = residual(&e.profile, lambda, beta);
    Ok(e)
}

/// Dense RK4 path for a given initial slope over `[0, length]`.
pub fn shooting_path<S: Real>(lambda: S, beta: S, slope: S, length: S, steps: usize) -> ShotPath<S> {
    let h_max = length / S::from_count(steps.max(1));
    shoot(lambda, beta, slope, &[length], h_max, true)
        .path
        .expect("path requested")
}

/// Uses `φ_{j,β'} = sqrt(β/β') φ_{j,β}` instead of re-shooting.
pub fn rescale<S: Real>(e: &Equilibrium<S>, beta_new: S) -> Result<Equilibrium<S>> {
    if !(beta_new > S::zero()) {
        return Err(Error::invalid(format!("beta = {beta_new} must be positive")));
    }
    if beta_new == e.beta {
        return Ok(e.clone());
    }
    let c = (e.beta / beta_new).sqrt();
    let profile = e.profile.scale(c);
    let residual = residual(&profile, e.lambda, beta_new);
    Ok(Equilibrium {
        beta: beta_new,
        profile,
        slope_at_0: e.slope_at_0 * c,
        residual,
        ..e.clone()
    })
}

/// `φ₀` followed by `φ_j^+`, `φ_j^-` for every `j² < λ`: `2n + 1` states for
/// `λ ∈ (n², (n+1)²)`. Bifurcation values are rejected.
pub fn enumerate_equilibria<S: Real>(
    grid: &Grid<S>,
    lambda: S,
    beta: S,
    cfg: &ShootingConfig,
) -> Result<Vec<Equilibrium<S>>> {
    if is_bifurcation_value(lambda) {
        return Err(Error::BifurcationValue {
            lambda: lambda.as_f64(),
        });
    }
    let mut out = vec![Equilibrium::trivial(grid, lambda, beta)];
    for j in 1..=mode_count(lambda) {
        let plus = solve_equilibrium(grid, lambda, beta, j, Sign::Plus, cfg)?;
        let minus = plus.negate();
        out.push(plus);
        out.push(minus);
    }
    Ok(out)
}

/// Sup distance on `[0, π/j]` between `φ_{j,β}^+` and the positive one-hump
/// solution of the same equation on the interval `[0, π/j]`, shot independently.
pub fn glue_check<S: Real>(e: &Equilibrium<S>, cfg: &ShootingConfig) -> Result<S> {
    if e.j <= 1 {
        return Ok(S::zero());
    }
    let length = S::PI() / S::from_count(e.j);
    let eps = S::lit(1e-12);
    let targets: Vec<S> = e
        .profile
        .grid()
        .points()
        .iter()
        .copied()
        .filter(|&x| x < length - eps)
        .collect();
    let hump = solve_mode(e.lambda, e.beta, 1, length, &targets, cfg)?;
    let sign = e.sign.unwrap_or(Sign::Plus).factor::<S>();
    Ok(hump
        .values
        .iter()
        .zip(e.profile.values())
        .fold(S::zero(), |acc, (&h, &p)| acc.max((sign * h - p).abs())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn grid() -> Grid<f64> {
        Grid::new(crate::field::DEFAULT_N_MODES).unwrap()
    }

    fn cfg() -> ShootingConfig {
        ShootingConfig::default()
    }

    #[test]
    fn below_first_bifurcation() {
        let err = solve_equilibrium(&grid(), 0.5, 1.0, 1, Sign::Plus, &cfg()).unwrap_err();
        assert!(matches!(err, Error::NoSuchEquilibrium { j: 1, .. }));
        let all = enumerate_equilibria(&grid(), 0.5, 1.0, &cfg()).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].j, 0);
    }

    #[test]
    fn first_mode_at_lambda_two() {
        let e = solve_equilibrium(&grid(), 2.0, 1.0, 1, Sign::Plus, &cfg()).unwrap();
        assert!(e.profile.values().iter().all(|&v| v > 0.0));
        assert!(e.zeros.is_empty());
        assert!(e.slope_at_0 > 0.0);
        assert!(e.residual < 1e-8, "residual {}", e.residual);
        // Energy oracle: the maximum M sits at π/2 where φ' = 0, so
        // p² = λM² - βM⁴/2.
        let m = e.profile.values()[127];
        let p = e.slope_at_0;
        assert_relative_eq!(p * p, 2.0 * m * m - 0.5 * m.powi(4), max_relative = 1e-10);
    }

    #[test]
    fn second_mode_is_antisymmetric() {
        let e = solve_equilibrium(&grid(), 5.0, 1.0, 2, Sign::Plus, &cfg()).unwrap();
        assert_eq!(e.zeros.len(), 1);
        assert!((e.zeros[0] - PI / 2.0).abs() < 1e-6);
        let r = e.profile.reflect_about_midpoint();
        assert!(r.add(&e.profile).sup_norm() < 1e-9);
        assert!(e.residual < 1e-8);
        assert!(e.profile.values()[..127].iter().all(|&v| v > 0.0));
    }

    #[test]
    fn third_mode_zeros() {
        let e = solve_equilibrium(&grid(), 10.0, 1.0, 3, Sign::Minus, &cfg()).unwrap();
        assert_eq!(e.zeros.len(), 2);
        assert!((e.zeros[0] - PI / 3.0).abs() < 1e-6);
        assert!((e.zeros[1] - 2.0 * PI / 3.0).abs() < 1e-6);
        assert!(e.slope_at_0 < 0.0);
        assert!(e.residual < 1e-8);
    }

    #[test]
    fn census_counts() {
        for (lambda, count) in [(0.5, 1), (2.0, 3), (5.0, 5), (10.0, 7)] {
            let all = enumerate_equilibria(&grid(), lambda, 1.0, &cfg()).unwrap();
            assert_eq!(all.len(), count, "lambda = {lambda}");
            for pair in all[1..].chunks(2) {
                assert_eq!(pair[1].profile, pair[0].profile.neg());
            }
        }
        assert!(matches!(
            enumerate_equilibria(&grid(), 4.0, 1.0, &cfg()),
            Err(Error::BifurcationValue { .. })
        ));
        assert!(matches!(
            solve_equilibrium(&grid(), 4.0, 1.0, 2, Sign::Plus, &cfg()),
            Err(Error::NoSuchEquilibrium { .. })
        ));
    }

    #[test]
    fn rescale_examples() {
        let e = solve_equilibrium(&grid(), 2.0, 1.0, 1, Sign::Plus, &cfg()).unwrap();
        let same = rescale(&e, 1.0).unwrap();
        assert_eq!(same.profile, e.profile);
        let quarter = rescale(&e, 4.0).unwrap();
        assert!(quarter.profile.sub(&e.profile.scale(0.5)).sup_norm() == 0.0);
        assert!(quarter.residual < 1e-8);
        let twice = rescale(&rescale(&e, 2.0).unwrap(), 4.0).unwrap();
        assert!(twice.profile.sup_distance(&quarter.profile) < 1e-12);
        assert!(rescale(&e, 0.0).is_err());
    }

    #[test]
    fn gluing_matches_interval_solution() {
        let g = grid();
        let e1 = solve_equilibrium(&g, 2.0, 1.0, 1, Sign::Plus, &cfg()).unwrap();
        assert_eq!(glue_check(&e1, &cfg()).unwrap(), 0.0);
        let e2 = solve_equilibrium(&g, 5.0, 1.0, 2, Sign::Plus, &cfg()).unwrap();
        assert!(glue_check(&e2, &cfg()).unwrap() < 1e-7);
        let e3 = solve_equilibrium(&g, 10.0, 1.0, 3, Sign::Plus, &cfg()).unwrap();
        assert!(glue_check(&e3, &cfg()).unwrap() < 1e-7);
    }

    #[test]
    fn pitchfork_onset_amplitudes_shrink() {
        let g = grid();
        for j in [1usize, 2] {
            let amps: Vec<f64> = [0.1, 0.01, 0.001]
                .iter()
                .map(|d| {
                    solve_equilibrium(&g, (j * j) as f64 + d, 1.0, j, Sign::Plus, &cfg())
                        .unwrap()
                        .profile
                        .sup_norm()
                })
                .collect();
            assert!(amps[0] > amps[1] && amps[1] > amps[2], "{amps:?}");
            // Small-amplitude law A ≈ sqrt(4δ/3β).
            assert_relative_eq!(amps[2], (4.0 * 0.001 / 3.0f64).sqrt(), max_relative = 2e-2);
        }
    }

    #[test]
    fn energy_is_conserved_along_shot() {
        let e = solve_equilibrium(&grid(), 5.0, 1.0, 2, Sign::Plus, &cfg()).unwrap();
        let path = shooting_path(5.0, 1.0, e.slope_at_0, PI, 10_000);
        let en = path.energy(5.0, 1.0);
        let e0 = en[0];
        for v in en {
            assert!(((v - e0) / e0).abs() < 1e-9);
        }
    }

    #[test]
    fn ordering_in_beta() {
        let g = grid();
        let a = solve_equilibrium(&g, 2.0, 1.5, 1, Sign::Plus, &cfg()).unwrap();
        let b = solve_equilibrium(&g, 2.0, 2.5, 1, Sign::Plus, &cfg()).unwrap();
        assert!(b.profile.values().iter().zip(a.profile.values()).all(|(x, y)| x <= y));
    }

    #[test]
    fn bifurcation_detection() {
        assert!(is_bifurcation_value(4.0f64));
        assert!(is_bifurcation_value(9.0f64));
        assert!(!is_bifurcation_value(5.0f64));
        assert!(!is_bifurcation_value(0.25f64));
    }
}
