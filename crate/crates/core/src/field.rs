//! Grid, field and sine-transform primitives on the interval (0, π).
//!
//! A [`Field`] stores interior samples `u(x_k)`, `x_k = kπ/(n+1)`, of a function
//! vanishing at both ends. Its [`SpectralField`] holds the coefficients `s_n` of
//! `Σ s_n sin(n x)`, `n = 1..=n_modes`, so the two representations describe the
//! same band-limited function and the Dirichlet Laplacian is diagonal (`-n²`).
//!
//! The discrete sine transform (type I) is computed through a complex FFT of the
//! odd extension, length `2(n+1)`. Choosing `n_modes = 2^k - 1` keeps that
//! length a power of two and puts `π/2`, `π/4`, ... on the grid.

use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default resolution: `2^8 - 1` interior points.
pub const DEFAULT_N_MODES: usize = 255;

struct GridInner<S: Real> {
    n_modes: usize,
    points: Vec<S>,
    fft: Arc<dyn Fft<S>>,
}

/// Uniform interior grid of (0, π) together with its transform plan.
///
/// Cloning is cheap; the points and the FFT plan are shared.
#[derive(Clone)]
pub struct Grid<S: Real> {
    inner: Arc<GridInner<S>>,
}

impl<S: Real> Grid<S> {
    pub fn new(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::invalid("grid needs at least one interior point"));
        }
        let h = S::PI() / S::from_count(n_modes + 1);
        let points = (1..=n_modes).map(|k| S::from_count(k) * h).collect();
        let fft = FftPlanner::new().plan_fft_forward(2 * (n_modes + 1));
        Ok(Self {
            inner: Arc::new(GridInner { n_modes, points, fft }),
        })
    }

    pub fn n_modes(&self) -> usize {
        self.inner.n_modes
    }

    pub fn points(&self) -> &[S] {
        &self.inner.points
    }

    /// Grid spacing `π/(n+1)`.
    pub fn spacing(&self) -> S {
        S::PI() / S::from_count(self.inner.n_modes + 1)
    }

    /// Index of the interior point closest to `x`.
    pub fn nearest_index(&self, x: S) -> usize {
        let k = (x / self.spacing()).round().to_isize().unwrap_or(1);
        (k.clamp(1, self.n_modes() as isize) - 1) as usize
    }

    /// Computes `y_n = Σ_k x_k sin(π n k/(n+1))` for `n = 1..=n_modes`.
    ///
    /// The matrix is symmetric and squares to `(n+1)/2 · I`, so the same kernel
    /// serves both directions.
    fn sine_kernel(&self, input: &[S]) -> Vec<S> {
        let n = self.n_modes();
        debug_assert_eq!(input.len(), n);
        let len = 2 * (n + 1);
        let mut buf = vec![Complex::new(S::zero(), S::zero()); len];
        for (k, &v) in input.iter().enumerate() {
            buf[k + 1].re = v;
            buf[len - k - 1].re = -v;
        }
        self.inner.fft.process(&mut buf);
        let half = S::lit(-0.5);
        buf[1..=n].iter().map(|c| c.im * half).collect()
    }
}

impl<S: Real> PartialEq for Grid<S> {
    fn eq(&self, other: &Self) -> bool {
        self.n_modes() == other.n_modes()
    }
}

impl<S: Real> fmt::Debug for Grid<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid").field("n_modes", &self.n_modes()).finish()
    }
}

/// Interior samples of a function on (0, π) with zero Dirichlet data.
#[derive(Clone, Debug, PartialEq)]
pub struct Field<S: Real> {
    grid: Grid<S>,
    values: Vec<S>,
}

/// Sine coefficients: the function `Σ s_n sin(n x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField<S: Real> {
    grid: Grid<S>,
    coeffs: Vec<S>,
}

/// Sup norm, L² norm and H¹₀ seminorm of a field.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Norms<S> {
    pub sup: S,
    pub l2: S,
    pub h1: S,
}

impl<S: Real> Field<S> {
    pub fn new(grid: &Grid<S>, values: Vec<S>) -> Result<Self> {
        if values.len() != grid.n_modes() {
            return Err(Error::invalid(format!(
                "field has {} values, grid has {} points",
                values.len(),
                grid.n_modes()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite value at grid index {k}")));
        }
        Ok(Self {
            grid: grid.clone(),
            values,
        })
    }

    pub fn zeros(grid: &Grid<S>) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![S::zero(); grid.n_modes()],
        }
    }

    pub fn from_fn(grid: &Grid<S>, f: impl Fn(S) -> S) -> Self {
        let values = grid.points().iter().map(|&x| f(x)).collect();
        Self {
            grid: grid.clone(),
            values,
        }
    }

    /// Samples of `Σ coeffs[n-1] sin(n x)`.
    pub fn from_sine_series(grid: &Grid<S>, coeffs: &[S]) -> Self {
        let mut padded = vec![S::zero(); grid.n_modes()];
        for (dst, &c) in padded.iter_mut().zip(coeffs) {
            *dst = c;
        }
        SpectralField::from_coeffs(grid, padded)
            .expect("length matches grid")
            .to_field()
    }

    pub(crate) fn from_raw(grid: &Grid<S>, values: Vec<S>) -> Self {
        debug_assert_eq!(values.len(), grid.n_modes());
        Self {
            grid: grid.clone(),
            values,
        }
    }

    pub fn grid(&self) -> &Grid<S> {
        &self.grid
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn into_values(self) -> Vec<S> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_spectral(&self) -> SpectralField<S> {
        dst_forward(self)
    }

    pub fn norms(&self) -> Norms<S> {
        norms(self)
    }

    pub fn sup_norm(&self) -> S {
        self.values
            .iter()
            .fold(S::zero(), |acc, v| acc.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(S) -> S) -> Self {
        Self::from_raw(&self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scale(&self, a: S) -> Self {
        self.map(|v| a * v)
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(S, S) -> S) -> Self {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::from_raw(&self.grid, values)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    /// `max_k |self_k - other_k|`.
    pub fn sup_distance(&self, other: &Self) -> S {
        self.sub(other).sup_norm()
    }

    /// H¹₀ seminorm of the difference.
    pub fn h1_distance(&self, other: &Self) -> S {
        self.sub(other).norms().h1
    }

    /// Reflection `x ↦ π - x`, exact on the grid.
    pub fn reflect_about_midpoint(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        Self::from_raw(&self.grid, values)
    }

    /// Samples of the odd 2π-periodic extension at `x_i = -π + i·h`, `i = 0..2(n+1)`.
    pub fn odd_extension(&self) -> Vec<S> {
        let n = self.len();
        let mut out = Vec::with_capacity(2 * (n + 1));
        out.push(S::zero());
        out.extend(self.values.iter().rev().map(|&v| -v));
        out.push(S::zero());
        out.extend(self.values.iter().copied());
        out
    }
}

impl<S: Real> SpectralField<S> {
    pub fn from_coeffs(grid: &Grid<S>, coeffs: Vec<S>) -> Result<Self> {
        if coeffs.len() != grid.n_modes() {
            return Err(Error::invalid(format!(
                "{} coefficients for a grid with {} modes",
                coeffs.len(),
                grid.n_modes()
            )));
        }
        Ok(Self {
            grid: grid.clone(),
            coeffs,
        })
    }

    pub fn grid(&self) -> &Grid<S> {
        &self.grid
    }

    /// `coeffs()[n-1]` multiplies `sin(n x)`.
    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn to_field(&self) -> Field<S> {
        dst_inverse(self)
    }

    /// Evaluates the sine series at an arbitrary point (also outside `[0, π]`,
    /// giving the odd 2π-periodic extension).
    pub fn eval(&self, x: S) -> S {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| c * (S::from_count(i + 1) * x).sin())
            .sum()
    }

    /// Derivative of the sine series at `x`.
    pub fn eval_derivative(&self, x: S) -> S {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let n = S::from_count(i + 1);
                c * n * (n * x).cos()
            })
            .sum()
    }

    /// Spectral second derivative, returned in physical space.
    pub fn second_derivative(&self) -> Field<S> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let n = S::from_count(i + 1);
                -n * n * c
            })
            .collect();
        SpectralField {
            grid: self.grid.clone(),
            coeffs,
        }
        .to_field()
    }
}

/// Forward discrete sine transform: grid values to sine coefficients.
pub fn dst_forward<S: Real>(f: &Field<S>) -> SpectralField<S> {
    let grid = f.grid();
    let scale = S::lit(2.0) / S::from_count(grid.n_modes() + 1);
    let coeffs = grid
        .sine_kernel(f.values())
        .into_iter()
        .map(|v| v * scale)
        .collect();
    SpectralField {
        grid: grid.clone(),
        coeffs,
    }
}

/// Inverse discrete sine transform: sine coefficients to grid values.
pub fn dst_inverse<S: Real>(s: &SpectralField<S>) -> Field<S> {
    let values = s.grid.sine_kernel(&s.coeffs);
    Field::from_raw(&s.grid, values)
}

/// Sup norm, L² norm (trapezoid rule, exact for the band-limited interpolant)
/// and H¹₀ seminorm `sqrt(π/2 · Σ n² s_n²)`.
pub fn norms<S: Real>(f: &Field<S>) -> Norms<S> {
    let h = f.grid().spacing();
    let l2 = (h * f.values().iter().map(|&v| v * v).sum::<S>()).sqrt();
    let half_pi = S::FRAC_PI_2();
    let h1_sq: S = f
        .to_spectral()
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let n = S::from_count(i + 1);
            n * n * c * c
        })
        .sum();
    Norms {
        sup: f.sup_norm(),
        l2,
        h1: (half_pi * h1_sq).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn grid() -> Grid<f64> {
        Grid::new(DEFAULT_N_MODES).unwrap()
    }

    /// Direct O(n²) sine sum, independent of the FFT path.
    fn naive_dst(values: &[f64]) -> Vec<f64> {
        let n = values.len();
        (1..=n)
            .map(|m| {
                2.0 / (n as f64 + 1.0)
                    * values
                        .iter()
                        .enumerate()
                        .map(|(k, v)| v * (PI * (m * (k + 1)) as f64 / (n as f64 + 1.0)).sin())
                        .sum::<f64>()
            })
            .collect()
    }

    #[test]
    fn grid_points_are_interior_and_uniform() {
        let g = grid();
        let pts = g.points();
        assert_eq!(pts.len(), 255);
        assert!(pts[0] > 0.0 && *pts.last().unwrap() < PI);
        for w in pts.windows(2) {
            assert_relative_eq!(w[1] - w[0], g.spacing(), epsilon = 1e-14);
        }
        // 2^k - 1 points put π/2 on the grid.
        assert_eq!(pts[127], 128.0 * PI / 256.0);
        assert!(Grid::<f64>::new(0).is_err());
    }

    #[test]
    fn forward_of_basis_functions() {
        let g = grid();
        let s = dst_forward(&Field::from_fn(&g, f64::sin));
        assert_relative_eq!(s.coeffs()[0], 1.0, epsilon = 1e-13);
        assert!(s.coeffs()[1..].iter().all(|c| c.abs() < 1e-13));

        let s = dst_forward(&Field::from_fn(&g, |x| 2.0 * (3.0 * x).sin() - x.sin()));
        assert_relative_eq!(s.coeffs()[0], -1.0, epsilon = 1e-13);
        assert!(s.coeffs()[1].abs() < 1e-13);
        assert_relative_eq!(s.coeffs()[2], 2.0, epsilon = 1e-13);
        assert!(s.coeffs()[3..].iter().all(|c| c.abs() < 1e-13));

        let z = dst_forward(&Field::zeros(&g));
        assert!(z.coeffs().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn fft_path_matches_direct_sum() {
        let g = Grid::<f64>::new(31).unwrap();
        let f = Field::from_fn(&g, |x| x * (PI - x) * (1.0 + x.cos()));
        let fast = dst_forward(&f);
        for (a, b) in fast.coeffs().iter().zip(naive_dst(f.values())) {
            assert_relative_eq!(*a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn inverse_of_unit_coefficient() {
        let g = grid();
        let mut c = vec![0.0; g.n_modes()];
        c[0] = 1.0;
        let f = dst_inverse(&SpectralField::from_coeffs(&g, c).unwrap());
        for (v, x) in f.values().iter().zip(g.points()) {
            assert_relative_eq!(*v, x.sin(), epsilon = 1e-13);
        }
        let z = dst_inverse(&SpectralField::from_coeffs(&g, vec![0.0; 255]).unwrap());
        assert_eq!(z, Field::zeros(&g));
    }

    #[test]
    fn norms_of_simple_modes() {
        let g = grid();
        let n = norms(&Field::from_fn(&g, f64::sin));
        assert_relative_eq!(n.l2, FRAC_PI_2.sqrt(), epsilon = 1e-13);
        assert_relative_eq!(n.h1, FRAC_PI_2.sqrt(), epsilon = 1e-13);
        assert_relative_eq!(n.sup, 1.0, epsilon = 1e-4);

        let n = norms(&Field::from_fn(&g, |x| (2.0 * x).sin()));
        assert_relative_eq!(n.h1, 2.0 * FRAC_PI_2.sqrt(), epsilon = 1e-13);

        let n = norms(&Field::zeros(&g));
        assert_eq!((n.sup, n.l2, n.h1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn field_rejects_bad_input() {
        let g = Grid::<f64>::new(7).unwrap();
        assert!(Field::new(&g, vec![0.0; 6]).is_err());
        let mut v = vec![0.0; 7];
        v[3] = f64::NAN;
        assert!(Field::new(&g, v).is_err());
    }

    #[test]
    fn spectral_evaluation_and_extension() {
        let g = grid();
        let f = Field::from_fn(&g, |x| (2.0 * x).sin() + 0.25 * (5.0 * x).sin());
        let s = f.to_spectral();
        for &x in &[0.3f64, 1.7, -2.2, 4.0] {
            let exact = (2.0 * x).sin() + 0.25 * (5.0 * x).sin();
            assert_relative_eq!(s.eval(x), exact, epsilon = 1e-12);
        }
        assert_relative_eq!(s.eval_derivative(0.0), 2.0 + 1.25, epsilon = 1e-12);
        let ext = f.odd_extension();
        assert_eq!(ext.len(), 2 * 256);
        for (i, v) in ext.iter().enumerate() {
            let x = -PI + i as f64 * g.spacing();
            assert_relative_eq!(*v, (2.0 * x).sin() + 0.25 * (5.0 * x).sin(), epsilon = 1e-12);
        }
    }

    #[test]
    fn single_precision_round_trip() {
        let g = Grid::<f32>::new(63).unwrap();
        let f = Field::from_fn(&g, |x| x.sin() - 0.5 * (4.0 * x).sin());
        let back = dst_forward(&f).to_field();
        assert!(back.sup_distance(&f) < 1e-5);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(200))]

            #[test]
            fn round_trip(values in proptest::collection::vec(-10.0f64..10.0, 255)) {
                let g = grid();
                let f = Field::new(&g, values).unwrap();
                let back = dst_inverse(&dst_forward(&f));
                let scale = f.sup_norm().max(f64::MIN_POSITIVE);
                prop_assert!(back.sup_distance(&f) < 1e-12 * scale);
            }

            #[test]
            fn parseval(values in proptest::collection::vec(-10.0f64..10.0, 255)) {
                let g = grid();
                let f = Field::new(&g, values).unwrap();
                let l2 = norms(&f).l2;
                let energy: f64 = dst_forward(&f).coeffs().iter().map(|c| c * c).sum::<f64>() * FRAC_PI_2;
                prop_assert!((l2 * l2 - energy).abs() <= 1e-10 * energy.max(1e-300));
            }

            #[test]
            fn coefficient_round_trip(coeffs in proptest::collection::vec(-1.0f64..1.0, 255)) {
                let g = grid();
                let s = SpectralField::from_coeffs(&g, coeffs.clone()).unwrap();
                let back = dst_forward(&dst_inverse(&s));
                for (a, b) in back.coeffs().iter().zip(&coeffs) {
                    prop_assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }
}
