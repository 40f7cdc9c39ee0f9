//! Zero structure of solutions: lap numbers, Angenent audits, the
//! symmetrically oscillating classes `𝔉_m^±`, strip membership and ω/α-limit
//! estimates.
//!
//! Lap numbers are counted on the odd 2π-periodic extension. [`ZeroStructure::count`]
//! counts zeros in the closed interval `[-π, π]` (so `sin(jx)` gives `2j + 1`);
//! [`ZeroStructure::cyclic`] counts sign changes around the circle, which is the
//! quantity that is monotone along differences of solutions and invariant
//! under reflections.

use std::f64::consts::PI;

use serde::Serialize;

use crate::equilibria::{rescale, solve_equilibrium, Equilibrium, ShootingConfig, Sign};
use crate::error::{Error, Result};
use crate::evolution::Trajectory;
use crate::field::{Field, SpectralField};
use crate::forcing::Direction;
use crate::pullback::{pullback_equilibrium, PullbackConfig};

type Field64 = Field<f64>;
type Trajectory64 = Trajectory<f64>;

/// Below this sup-norm a field counts as identically zero.
pub const DEGENERATE_SUP: f64 = 1e-12;
/// Hysteresis for sign changes, relative to the sup-norm.
pub const ZERO_HYSTERESIS: f64 = 1e-9;
/// Transversality threshold on crossing slopes, relative to the H¹₀ seminorm.
pub const SLOPE_THRESHOLD: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroStructure {
    /// Zeros of the odd 2π-periodic extension in the closed interval `[-π, π]`.
    pub count: usize,
    /// Sign changes of the periodic extension around the circle.
    pub cyclic: usize,
    /// Every crossing has an interpolated slope above the transversality threshold.
    pub simple: bool,
    /// Crossing locations in `[-π, π]`, ascending.
    pub crossings: Vec<f64>,
    /// Sup-norm below [`DEGENERATE_SUP`]; counts are zero.
    pub degenerate: bool,
}

impl ZeroStructure {
    fn degenerate() -> Self {
        Self {
            count: 0,
            cyclic: 0,
            simple: false,
            crossings: vec![],
            degenerate: true,
        }
    }
}

/// Sign changes of periodic samples `v_i = w(-π + i·h)` (one full period),
/// with hysteresis `zero_tol` and transversality threshold `slope_tol`.
pub fn periodic_zero_structure(samples: &[f64], zero_tol: f64, slope_tol: f64) -> ZeroStructure {
    let sup = samples.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if sup < DEGENERATE_SUP {
        return ZeroStructure::degenerate();
    }
    let len = samples.len();
    let h = 2.0 * PI / len as f64;
    let significant: Vec<usize> = (0..len).filter(|&i| samples[i].abs() > zero_tol).collect();
    let mut crossings = Vec::new();
    let mut simple = true;
    for (k, &i) in significant.iter().enumerate() {
        let (j, wrap) = match significant.get(k + 1) {
            Some(&j) => (j, 0.0),
            None => (significant[0], 2.0 * PI),
        };
        let (a, b) = (samples[i], samples[j]);
        if (a > 0.0) == (b > 0.0) {
            continue;
        }
        let xa = -PI + i as f64 * h;
        let xb = -PI + j as f64 * h + wrap;
        let x = xa + (xb - xa) * a / (a - b);
        let slope = (b - a) / (xb - xa);
        if slope.abs() <= slope_tol {
            simple = false;
        }
        let mut x = if x >= PI - 1e-12 { x - 2.0 * PI } else { x };
        if (x + PI).abs() < 1e-12 {
            x = -PI;
        }
        crossings.push(x);
    }
    crossings.sort_by(|a, b| a.partial_cmp(b).expect("finite crossing"));
    let cyclic = crossings.len();
    let mut count = cyclic;
    if crossings.first().is_some_and(|&x| x == -PI) {
        crossings.push(PI);
        count += 1;
    }
    ZeroStructure {
        count,
        cyclic,
        simple,
        crossings,
        degenerate: false,
    }
}

/// Lap number of a Dirichlet field through its odd 2π-periodic extension.
pub fn lap_number(f: &Field64) -> ZeroStructure {
    let n = f.norms();
    if n.sup < DEGENERATE_SUP {
        return ZeroStructure::degenerate();
    }
    periodic_zero_structure(
        &f.odd_extension(),
        ZERO_HYSTERESIS * n.sup,
        SLOPE_THRESHOLD * n.h1,
    )
}

/// Samples of `x ↦ f̃(2a - x)` on the periodic grid, `f̃` the odd extension.
pub fn reflected_samples(f: &Field64, a: f64) -> Vec<f64> {
    let s = f.to_spectral();
    let len = 2 * (f.len() + 1);
    let h = f.grid().spacing();
    (0..len).map(|i| s.eval(2.0 * a - (-PI + i as f64 * h))).collect()
}

/// Interior zeros of a field in (0, π), refined by bisection on the sine interpolant.
pub fn interior_zeros(f: &Field64) -> Vec<f64> {
    let sup = f.sup_norm();
    if sup < DEGENERATE_SUP {
        return vec![];
    }
    let spec = f.to_spectral();
    let tol = ZERO_HYSTERESIS * sup;
    let pts = f.grid().points();
    let vals = f.values();
    let significant: Vec<usize> = (0..vals.len()).filter(|&i| vals[i].abs() > tol).collect();
    let mut zeros = Vec::new();
    for w in significant.windows(2) {
        let (i, j) = (w[0], w[1]);
        if (vals[i] > 0.0) == (vals[j] > 0.0) {
            continue;
        }
        zeros.push(bisect_root(&spec, pts[i], pts[j]));
    }
    zeros
}

fn bisect_root(spec: &SpectralField<f64>, mut a: f64, mut b: f64) -> f64 {
    let mut fa = spec.eval(a);
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        let fm = spec.eval(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Largest distance between the interior zeros of `f` and `kπ/j`, `k = 1..j-1`;
/// infinite when the count differs.
pub fn pinned_zero_error(f: &Field64, j: usize) -> f64 {
    let zeros = interior_zeros(f);
    if zeros.len() != j.saturating_sub(1) {
        return f64::INFINITY;
    }
    zeros
        .iter()
        .enumerate()
        .map(|(k, z)| (z - (k + 1) as f64 * PI / j as f64).abs())
        .fold(0.0, f64::max)
}

/// What the second trajectory of an audit is.
#[derive(Clone, Copy, Debug)]
pub enum AuditPartner<'a> {
    /// `w = u₁ - u₂`.
    Trajectory(&'a Trajectory64),
    /// `w = ρ_a u₁ - u₁` with `ρ_a v(x) = v(2a - x)` on the periodic extension.
    Reflection(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LapViolation {
    pub time: f64,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub times: Vec<f64>,
    /// Cyclic lap number of `w`; `None` where `w` is below the resolution floor.
    pub laps: Vec<Option<usize>>,
    pub violations: Vec<LapViolation>,
    pub identically_zero: bool,
    pub resolution_floor: f64,
}

impl AuditReport {
    pub fn is_monotone(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Default floor below which `w` is too close to round-off to be counted,
/// relative to the size of the states it is the difference of.
pub const AUDIT_RESOLUTION_FLOOR: f64 = 1e-8;

/// Tracks the lap number of `w(t)` and lists every increase.
pub fn angenent_audit(
    traj: &Trajectory64,
    partner: AuditPartner<'_>,
    resolution_floor: f64,
) -> Result<AuditReport> {
    if let AuditPartner::Trajectory(other) = partner {
        if other.times.len() != traj.times.len()
            || other
                .times
                .iter()
                .zip(&traj.times)
                .any(|(a, b)| (a - b).abs() > 1e-9)
            || other.grid() != traj.grid()
        {
            return Err(Error::invalid("audited trajectories need identical grids and times"));
        }
    }
    let mut laps = Vec::with_capacity(traj.len());
    let mut identically_zero = true;
    for (i, u) in traj.states.iter().enumerate() {
        let (samples, scale, h1) = match partner {
            AuditPartner::Trajectory(other) => {
                let v = &other.states[i];
                let w = u.sub(v);
                let h1 = w.norms().h1;
                (w.odd_extension(), u.sup_norm().max(v.sup_norm()), h1)
            }
            AuditPartner::Reflection(a) => {
                let ext = u.odd_extension();
                let refl = reflected_samples(u, a);
                let w: Vec<f64> = refl.iter().zip(&ext).map(|(r, e)| r - e).collect();
                // H¹ scale of w bounded by twice that of u.
                (w, u.sup_norm(), 2.0 * u.norms().h1)
            }
        };
        let sup = samples.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if sup != 0.0 {
            identically_zero = false;
        }
        if sup < DEGENERATE_SUP.max(resolution_floor * scale) {
            laps.push(None);
            continue;
        }
        let z = periodic_zero_structure(&samples, ZERO_HYSTERESIS * sup, SLOPE_THRESHOLD * h1);
        laps.push(Some(z.cyclic));
    }
    let mut violations = Vec::new();
    let mut last: Option<usize> = None;
    for (t, lap) in traj.times.iter().zip(&laps) {
        if let Some(l) = *lap {
            if let Some(prev) = last {
                if l > prev {
                    violations.push(LapViolation {
                        time: *t,
                        from: prev,
                        to: l,
                    });
                }
            }
            last = Some(l);
        }
    }
    Ok(AuditReport {
        times: traj.times.clone(),
        laps,
        violations,
        identically_zero,
        resolution_floor,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OscillationKind {
    FmPlus,
    FmMinus,
    Zero,
    Unclassified,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OscillationClass {
    pub kind: OscillationKind,
    pub m: usize,
    /// Largest relative violation among periodicity, reflection symmetry and
    /// monotonicity on the half period.
    pub defect: f64,
}

impl OscillationClass {
    pub fn sign(&self) -> Option<Sign> {
        match self.kind {
            OscillationKind::FmPlus => Some(Sign::Plus),
            OscillationKind::FmMinus => Some(Sign::Minus),
            _ => None,
        }
    }

    /// Same class (kind and period) as `other`.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.kind == other.kind
            && (matches!(self.kind, OscillationKind::Zero) || self.m == other.m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassifyConfig {
    pub m_max: usize,
    pub threshold: f64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self {
            m_max: 8,
            threshold: 1e-4,
        }
    }
}

/// Tests membership in `𝔉_m^± = 𝔉_m(∓π/2m)` for `m = 1..=m_max`.
///
/// For the odd extension, period `2π/m` together with the reflection symmetry
/// about `∓π/2m` means the sine spectrum lives on `n = m·(2k+1)`; the two
/// spectral defects measure the energy outside that set. Monotonicity is
/// checked on the grid samples of `(-π/2m, π/2m)`, increasing for `𝔉_m^+`.
pub fn classify_oscillation(f: &Field64, cfg: &ClassifyConfig) -> OscillationClass {
    let sup = f.sup_norm();
    if sup < DEGENERATE_SUP {
        return OscillationClass {
            kind: OscillationKind::Zero,
            m: 0,
            defect: 0.0,
        };
    }
    let spec = f.to_spectral();
    let coeffs = spec.coeffs();
    let energy: f64 = coeffs.iter().map(|c| c * c).sum();
    let slope0: f64 = coeffs.iter().enumerate().map(|(i, c)| (i + 1) as f64 * c).sum();
    let direction = if slope0 >= 0.0 { 1.0 } else { -1.0 };
    let ext = f.odd_extension();
    let h = f.grid().spacing();
    let centre = f.len() + 1;

    let mut best = OscillationClass {
        kind: OscillationKind::Unclassified,
        m: 0,
        defect: f64::INFINITY,
    };
    for m in 1..=cfg.m_max {
        let (mut off_period, mut even_multiple) = (0.0, 0.0);
        for (i, c) in coeffs.iter().enumerate() {
            let n = i + 1;
            if n % m != 0 {
                off_period += c * c;
            } else if (n / m) % 2 == 0 {
                even_multiple += c * c;
            }
        }
        let periodicity = (off_period / energy).sqrt();
        let reflection = (even_multiple / energy).sqrt();

        let half_width = PI / (2.0 * m as f64);
        let reach = ((half_width / h) - 1e-9).floor() as usize;
        let reach = reach.min(centre - 1);
        let mut monotonicity: f64 = 0.0;
        for i in (centre - reach)..(centre + reach) {
            let step = direction * (ext[i + 1] - ext[i]);
            monotonicity = monotonicity.max(-step / sup);
        }
        let defect = periodicity.max(reflection).max(monotonicity);
        if defect < best.defect {
            best = OscillationClass {
                kind: OscillationKind::Unclassified,
                m,
                defect,
            };
        }
    }
    if best.defect < cfg.threshold {
        best.kind = if direction > 0.0 {
            OscillationKind::FmPlus
        } else {
            OscillationKind::FmMinus
        };
    }
    best
}

/// Strip `Y_j^±` slack used by the certifications.
pub const STRIP_SLACK: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StripCheck {
    pub inside: bool,
    pub violation: f64,
}

/// Pointwise envelope test `min(φ_lo, φ_hi) ≤ f ≤ max(φ_lo, φ_hi)`.
pub fn strip_membership(
    f: &Field64,
    j: usize,
    sign: Sign,
    eq_lo: &Equilibrium<f64>,
    eq_hi: &Equilibrium<f64>,
) -> Result<StripCheck> {
    for e in [eq_lo, eq_hi] {
        if e.j != j || e.sign != Some(sign) {
            return Err(Error::invalid(format!(
                "strip Y_{j}^{} built from {}",
                sign.label(),
                e.label()
            )));
        }
    }
    Ok(envelope_check(f, &eq_lo.profile, &eq_hi.profile, STRIP_SLACK))
}

pub(crate) fn envelope_check(f: &Field64, a: &Field64, b: &Field64, slack: f64) -> StripCheck {
    let violation = f
        .values()
        .iter()
        .zip(a.values().iter().zip(b.values()))
        .fold(0.0f64, |acc, (&v, (&x, &y))| {
            let lo = x.min(y);
            let hi = x.max(y);
            acc.max(lo - v).max(v - hi)
        })
        .max(0.0);
    StripCheck {
        inside: violation <= slack,
        violation,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HullMatch {
    pub gamma: String,
    /// Largest sup distance between a snapshot and `ξ_{m,γ}^±`.
    pub distance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitSetEstimate {
    pub direction: Direction,
    pub times: Vec<f64>,
    #[serde(skip)]
    pub snapshots: Vec<Field64>,
    pub classes: Vec<OscillationClass>,
    /// The worst-defect class among the snapshots.
    pub classification: OscillationClass,
    /// Snapshots disagree on their class.
    pub mixed: bool,
    pub strip: Option<(usize, Sign)>,
    pub strip_violation: Option<f64>,
    pub matched_hull_equilibria: Vec<HullMatch>,
}

#[derive(Clone, Copy, Debug)]
pub struct LimitSetOptions {
    pub classify: ClassifyConfig,
    pub shooting: ShootingConfig,
    /// Minimum time span of the sampled ω-window.
    pub min_span: f64,
}

impl Default for LimitSetOptions {
    fn default() -> Self {
        Self {
            classify: ClassifyConfig::default(),
            shooting: ShootingConfig::default(),
            min_span: 5.0,
        }
    }
}

/// Classifies late (ω) or early (α) snapshots of a trajectory, checks the
/// matching strip and compares with equilibria of the limiting forcing.
///
/// α-estimates are only meaningful for constructed global solutions (pullback
/// equilibria, connections), never for forward runs.
pub fn estimate_limit_set(
    traj: &Trajectory64,
    direction: Direction,
    sample_count: usize,
    opts: &LimitSetOptions,
) -> Result<LimitSetEstimate> {
    if sample_count == 0 || sample_count > traj.len() {
        return Err(Error::invalid(format!(
            "cannot take {sample_count} samples from {} snapshots",
            traj.len()
        )));
    }
    let range = match direction {
        Direction::Plus => traj.len() - sample_count..traj.len(),
        Direction::Minus => 0..sample_count,
    };
    let times: Vec<f64> = traj.times[range.clone()].to_vec();
    let span = times.last().unwrap() - times[0];
    if direction == Direction::Plus && span < opts.min_span {
        return Err(Error::invalid(format!(
            "omega window spans {span} time units, need at least {}",
            opts.min_span
        )));
    }
    let snapshots: Vec<Field64> = traj.states[range].to_vec();
    let classes: Vec<OscillationClass> = snapshots
        .iter()
        .map(|s| classify_oscillation(s, &opts.classify))
        .collect();
    let mixed = classes.windows(2).any(|w| !w[0].agrees_with(&w[1]))
        || classes.iter().any(|c| c.kind == OscillationKind::Unclassified);
    let classification = *classes
        .iter()
        .max_by(|a, b| a.defect.partial_cmp(&b.defect).expect("finite defect"))
        .expect("at least one sample");

    let lambda = traj.config.lambda;
    let forcing = traj.forcing;
    let mut strip = None;
    let mut strip_violation = None;
    let mut matched = Vec::new();
    let grid = traj.grid();

    match (mixed, classification.sign()) {
        (false, Some(sign)) if ((classification.m * classification.m) as f64) < lambda => {
            let m = classification.m;
            let (b1, b2) = forcing.bounds();
            let hi = solve_equilibrium(grid, lambda, b1, m, sign, &opts.shooting)?;
            let lo = rescale(&hi, b2)?;
            let worst = snapshots
                .iter()
                .map(|s| envelope_check(s, &lo.profile, &hi.profile, STRIP_SLACK).violation)
                .fold(0.0, f64::max);
            strip_violation = Some(worst);
            if worst <= STRIP_SLACK {
                strip = Some((m, sign));
            }
            if let Some(limit) = forcing.limit(direction) {
                let cfg = PullbackConfig {
                    solver: traj.config,
                    shooting: opts.shooting,
                    ..PullbackConfig::default()
                };
                let xi = pullback_equilibrium(grid, m, sign, lambda, &limit, (0.0, 1.0), &cfg)?;
                let target = xi.states.last().expect("pullback window is nonempty");
                let distance = snapshots
                    .iter()
                    .map(|s| s.sup_distance(target))
                    .fold(0.0, f64::max);
                matched.push(HullMatch {
                    gamma: limit.describe(),
                    distance,
                });
            }
        }
        (false, None) if classification.kind == OscillationKind::Zero => {
            if let Some(limit) = forcing.limit(direction) {
                matched.push(HullMatch {
                    gamma: limit.describe(),
                    distance: snapshots.iter().map(|s| s.sup_norm()).fold(0.0, f64::max),
                });
            }
        }
        _ => {}
    }

    Ok(LimitSetEstimate {
        direction,
        times,
        snapshots,
        classes,
        classification,
        mixed,
        strip,
        strip_violation,
        matched_hull_equilibria: matched,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Grid;

    fn grid() -> Grid<f64> {
        Grid::new(255).unwrap()
    }

    #[test]
    fn lap_numbers_of_sine_modes() {
        let g = grid();
        let z = lap_number(&Field::from_fn(&g, |x| (2.0 * x).sin()));
        assert_eq!(z.count, 5);
        assert_eq!(z.cyclic, 4);
        assert!(z.simple);
        let expected = [-PI, -PI / 2.0, 0.0, PI / 2.0, PI];
        assert_eq!(z.crossings.len(), 5);
        for (a, b) in z.crossings.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{:?}", z.crossings);
        }
        assert_eq!(lap_number(&Field::from_fn(&g, |x| (3.0 * x).sin())).count, 7);
        assert_eq!(lap_number(&Field::from_fn(&g, f64::sin)).count, 3);
        let zero = lap_number(&Field::zeros(&g));
        assert!(zero.degenerate);
    }

    #[test]
    fn count_is_odd_for_dirichlet_fields() {
        let g = grid();
        for k in 1..6 {
            let f = Field::from_fn(&g, |x| (k as f64 * x).sin() + 0.1 * x.sin());
            assert_eq!(lap_number(&f).count % 2, 1);
        }
    }

    #[test]
    fn classification_examples() {
        let g = grid();
        let cfg = ClassifyConfig::default();
        let c = classify_oscillation(&Field::from_fn(&g, f64::sin), &cfg);
        assert_eq!((c.kind, c.m), (OscillationKind::FmPlus, 1));
        assert!(c.defect < 1e-12);
        let c = classify_oscillation(&Field::from_fn(&g, |x| -(2.0 * x).sin()), &cfg);
        assert_eq!((c.kind, c.m), (OscillationKind::FmMinus, 2));
        let c = classify_oscillation(&Field::zeros(&g), &cfg);
        assert_eq!(c.kind, OscillationKind::Zero);
        // Mixed modes are in no class.
        let c = classify_oscillation(&Field::from_fn(&g, |x| x.sin() + 0.3 * (2.0 * x).sin()), &cfg);
        assert_eq!(c.kind, OscillationKind::Unclassified);
        // sin(x) + sin(3x)/9 stays monotone on (-π/2, π/2): still 𝔉_1^+.
        let c = classify_oscillation(&Field::from_fn(&g, |x| x.sin() + (3.0 * x).sin() / 9.0), &cfg);
        assert_eq!((c.kind, c.m), (OscillationKind::FmPlus, 1));
        // sin(x) + sin(3x)/2 is odd-mode but not monotone on the half period.
        let c = classify_oscillation(&Field::from_fn(&g, |x| x.sin() + 0.5 * (3.0 * x).sin()), &cfg);
        assert_eq!(c.kind, OscillationKind::Unclassified);
    }

    #[test]
    fn second_equilibrium_is_in_f2_plus() {
        let g = grid();
        let e = solve_equilibrium(&g, 5.0, 1.0, 2, Sign::Plus, &ShootingConfig::default()).unwrap();
        let c = classify_oscillation(&e.profile, &ClassifyConfig::default());
        assert_eq!((c.kind, c.m), (OscillationKind::FmPlus, 2));
    }

    #[test]
    fn strip_examples() {
        let g = grid();
        let cfg = ShootingConfig::default();
        let hi = solve_equilibrium(&g, 2.0, 1.5, 1, Sign::Plus, &cfg).unwrap();
        let lo = rescale(&hi, 2.5).unwrap();
        assert!(strip_membership(&lo.profile, 1, Sign::Plus, &lo, &hi).unwrap().inside);
        let mid = lo.profile.add(&hi.profile).scale(0.5);
        assert!(strip_membership(&mid, 1, Sign::Plus, &lo, &hi).unwrap().inside);
        let out = strip_membership(&hi.profile.scale(2.0), 1, Sign::Plus, &lo, &hi).unwrap();
        assert!(!out.inside && out.violation > 0.1);
        assert!(strip_membership(&mid, 2, Sign::Plus, &lo, &hi).is_err());
    }

    #[test]
    fn interior_zeros_are_refined() {
        let g = grid();
        let f = Field::from_fn(&g, |x| (3.0 * x).sin() * (1.0 + 0.3 * x.cos()));
        let z = interior_zeros(&f);
        assert_eq!(z.len(), 2);
        assert!((z[0] - PI / 3.0).abs() < 1e-10);
        assert!(pinned_zero_error(&f, 3) < 1e-10);
        assert_eq!(pinned_zero_error(&f, 2), f64::INFINITY);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn field(coeffs: &[f64]) -> Field64 {
            Field::from_sine_series(&grid(), coeffs)
        }

        proptest! {
            #[test]
            fn reflection_preserves_cyclic_lap(coeffs in proptest::collection::vec(-1.0f64..1.0, 6), a in -3.0f64..3.0) {
                let f = field(&coeffs);
                let n = f.norms();
                prop_assume!(n.sup > 1e-3);
                let base = lap_number(&f);
                prop_assume!(base.simple);
                let refl = reflected_samples(&f, a);
                let r = periodic_zero_structure(&refl, ZERO_HYSTERESIS * n.sup, SLOPE_THRESHOLD * n.h1);
                prop_assert_eq!(base.cyclic, r.cyclic);
            }

            #[test]
            fn negation_flips_class(coeffs in proptest::collection::vec(-1.0f64..1.0, 6), pick in 0usize..3) {
                let f = match pick {
                    0 => field(&coeffs),
                    1 => Field::from_fn(&grid(), |x| (2.0 * x).sin() * (1.0 + 0.2 * coeffs[0] * (4.0 * x).cos())),
                    _ => Field::from_fn(&grid(), |x| x.sin() + 0.05 * coeffs[1] * (3.0 * x).sin()),
                };
                let cfg = ClassifyConfig::default();
                let a = classify_oscillation(&f, &cfg);
                let b = classify_oscillation(&f.neg(), &cfg);
                prop_assert_eq!(a.m, b.m);
                prop_assert_eq!(a.defect, b.defect);
                let flipped = match a.kind {
                    OscillationKind::FmPlus => OscillationKind::FmMinus,
                    OscillationKind::FmMinus => OscillationKind::FmPlus,
                    k => k,
                };
                prop_assert_eq!(b.kind, flipped);
            }
        }
    }
}
