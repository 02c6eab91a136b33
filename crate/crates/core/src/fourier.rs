//! Band-limited Laurent series on the unit circle.
//!
//! A [`LaurentFunction`] stands in for an element of `L²(𝕋, m)`. It keeps
//! both views of the function: the values at the `M` uniform nodes
//! `z_j = exp(2πij/M)` and the Fourier coefficients `a_n` for `|n| ≤ N`.
//! The two views are kept consistent: samples are always the synthesis of
//! the stored band, and any energy that falls outside the band during
//! construction is recorded as a truncation norm instead of being silently
//! aliased.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Dropped out-of-band norm above which a function is reported as truncated.
pub const TRUNCATION_FLAG: f64 = 1e-12;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn forward_plan(len: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(len))
}

fn inverse_plan(len: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(len))
}

/// Quadrature grid size `M` and band limit `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridParams {
    size: usize,
    band: usize,
}

impl GridParams {
    pub const DEFAULT_SIZE: usize = 4096;
    pub const DEFAULT_BAND: usize = 1024;

    pub fn new(size: usize, band: usize) -> Result<Self> {
        if size < 4 || !size.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "grid size {size} must be a power of two ≥ 4"
            )));
        }
        if band + 1 > size / 2 {
            return Err(Error::InvalidGrid(format!(
                "band {band} exceeds M/2 - 1 = {} for M = {size}",
                size / 2 - 1
            )));
        }
        Ok(Self { size, band })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn band(&self) -> usize {
        self.band
    }

    /// Number of stored coefficients, `2N + 1`.
    pub fn coeff_len(&self) -> usize {
        2 * self.band + 1
    }

    /// The `j`-th quadrature node `exp(2πij/M)`.
    pub fn node(&self, j: usize) -> C64 {
        C64::from_polar(1.0, 2.0 * PI * j as f64 / self.size as f64)
    }

    pub fn nodes(&self) -> impl Iterator<Item = C64> + '_ {
        (0..self.size).map(move |j| self.node(j))
    }

    fn check_same(&self, other: &GridParams) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch(
                self.size, self.band, other.size, other.band,
            ));
        }
        Ok(())
    }
}

impl Default for GridParams {
    fn default() -> Self {
        Self {
            size: Self::DEFAULT_SIZE,
            band: Self::DEFAULT_BAND,
        }
    }
}

/// Outcome of a tolerance test: the measured residual and whether it fell
/// below the tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    pub residual: f64,
}

impl Verdict {
    pub fn below(residual: f64, tol: f64) -> Self {
        Self {
            holds: residual < tol,
            residual,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LaurentFunction {
    grid: GridParams,
    samples: Vec<C64>,
    /// `coeffs[n + N]` holds `a_n`.
    coeffs: Vec<C64>,
    /// l² norm of the coefficients discarded when the function was banded.
    truncation: f64,
}

impl LaurentFunction {
    pub fn zero(grid: GridParams) -> Self {
        Self {
            grid,
            samples: vec![C64::new(0.0, 0.0); grid.size],
            coeffs: vec![C64::new(0.0, 0.0); grid.coeff_len()],
            truncation: 0.0,
        }
    }

    pub fn constant(grid: GridParams, c: C64) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); grid.coeff_len()];
        coeffs[grid.band] = c;
        Self {
            grid,
            samples: vec![c; grid.size],
            coeffs,
            truncation: 0.0,
        }
    }

    /// The monomial `z^k`.
    pub fn monomial(grid: GridParams, k: i64) -> Result<Self> {
        Self::from_terms(grid, &[(k, C64::new(1.0, 0.0))])
    }

    /// Builds `Σ c·z^n` from `(n, c)` pairs; repeated exponents add up.
    pub fn from_terms(grid: GridParams, terms: &[(i64, C64)]) -> Result<Self> {
        let band = grid.band as i64;
        let mut coeffs = vec![C64::new(0.0, 0.0); grid.coeff_len()];
        for &(n, c) in terms {
            if n.abs() > band {
                return Err(Error::Parameter(format!(
                    "exponent {n} outside band ±{band}"
                )));
            }
            coeffs[(n + band) as usize] += c;
        }
        Self::from_coeffs(grid, coeffs)
    }

    /// Builds a function from its full coefficient vector, indexed `n + N`.
    pub fn from_coeffs(grid: GridParams, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != grid.coeff_len() {
            return Err(Error::Parameter(format!(
                "expected {} coefficients, got {}",
                grid.coeff_len(),
                coeffs.len()
            )));
        }
        let samples = synthesize(&grid, &coeffs);
        Ok(Self {
            grid,
            samples,
            coeffs,
            truncation: 0.0,
        })
    }

    /// Builds a function from a coefficient window `|n| ≤ w` (length `2w+1`),
    /// zero-padding to the grid band.
    pub fn from_window(grid: GridParams, window: &[C64]) -> Result<Self> {
        if window.len() % 2 == 0 {
            return Err(Error::Parameter("window length must be odd".into()));
        }
        let w = window.len() / 2;
        if w > grid.band {
            return Err(Error::Parameter(format!(
                "window ±{w} wider than band ±{}",
                grid.band
            )));
        }
        let mut coeffs = vec![C64::new(0.0, 0.0); grid.coeff_len()];
        let off = grid.band - w;
        coeffs[off..off + window.len()].copy_from_slice(window);
        Self::from_coeffs(grid, coeffs)
    }

    /// Analyses node values, keeps the band `|n| ≤ N` and records the norm
    /// of everything beyond it.
    pub fn from_samples(grid: GridParams, samples: &[C64]) -> Result<Self> {
        if samples.len() != grid.size {
            return Err(Error::Parameter(format!(
                "expected {} samples, got {}",
                grid.size,
                samples.len()
            )));
        }
        let m = grid.size;
        let mut buf = samples.to_vec();
        forward_plan(m).process(&mut buf);
        let scale = 1.0 / m as f64;
        let band = grid.band as i64;
        let mut coeffs = vec![C64::new(0.0, 0.0); grid.coeff_len()];
        for n in -band..=band {
            coeffs[(n + band) as usize] = buf[n.rem_euclid(m as i64) as usize] * scale;
        }
        let dropped: f64 = (band + 1..m as i64 - band)
            .map(|k| (buf[k as usize] * scale).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let samples = synthesize(&grid, &coeffs);
        Ok(Self {
            grid,
            samples,
            coeffs,
            truncation: dropped,
        })
    }

    /// Samples `f` at the grid nodes.
    pub fn from_fn(grid: GridParams, f: impl Fn(C64) -> C64) -> Result<Self> {
        let samples: Vec<C64> = grid.nodes().map(f).collect();
        Self::from_samples(grid, &samples)
    }

    pub fn grid(&self) -> GridParams {
        self.grid
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Fourier coefficient `a_n`; zero outside the band.
    pub fn coeff(&self, n: i64) -> C64 {
        let band = self.grid.band as i64;
        if n.abs() > band {
            C64::new(0.0, 0.0)
        } else {
            self.coeffs[(n + band) as usize]
        }
    }

    /// Coefficients for `|n| ≤ w`, indexed `n + w`.
    pub fn window(&self, w: usize) -> Vec<C64> {
        let w = w as i64;
        (-w..=w).map(|n| self.coeff(n)).collect()
    }

    /// Norm of the out-of-band content discarded while building this value.
    pub fn truncation(&self) -> f64 {
        self.truncation
    }

    pub fn is_truncated(&self) -> bool {
        self.truncation > TRUNCATION_FLAG
    }

    /// `⟨f, g⟩ = Σ a_n·conj(b_n)`.
    pub fn inner_product(&self, other: &Self) -> Result<C64> {
        self.grid.check_same(&other.grid)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    /// `(1/M) Σ_j f(z_j)·conj(g(z_j))`.
    pub fn quadrature_inner_product(&self, other: &Self) -> Result<C64> {
        self.grid.check_same(&other.grid)?;
        let s: C64 = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a * b.conj())
            .sum();
        Ok(s / self.grid.size as f64)
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Pointwise product (the action of `M_φ`). Content pushed past the band
    /// is dropped and accumulated into [`truncation`](Self::truncation).
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        let prod: Vec<C64> = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a * b)
            .collect();
        let mut out = Self::from_samples(self.grid, &prod)?;
        out.truncation += self.truncation + other.truncation;
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map_coeffs(|a| a * c)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| f(a, b))
            .collect();
        let mut out = Self::from_coeffs(self.grid, coeffs)?;
        out.truncation = self.truncation + other.truncation;
        Ok(out)
    }

    fn map_coeffs(&self, f: impl Fn(C64) -> C64) -> Self {
        let coeffs: Vec<C64> = self.coeffs.iter().map(|&a| f(a)).collect();
        let samples = synthesize(&self.grid, &coeffs);
        Self {
            grid: self.grid,
            samples,
            coeffs,
            truncation: self.truncation,
        }
    }

    /// `J f = conj(f)`: coefficients `c_n = conj(a_{-n})`.
    pub fn conj_j(&self) -> Self {
        let coeffs: Vec<C64> = self.coeffs.iter().rev().map(|a| a.conj()).collect();
        let samples = self.samples.iter().map(|s| s.conj()).collect();
        Self {
            grid: self.grid,
            samples,
            coeffs,
            truncation: self.truncation,
        }
    }

    /// `f#(z) = conj(f(conj z))`: coefficients `c_n = conj(a_n)`.
    pub fn sharp(&self) -> Self {
        let m = self.grid.size;
        let coeffs = self.coeffs.iter().map(|a| a.conj()).collect();
        let samples = (0..m).map(|j| self.samples[(m - j) % m].conj()).collect();
        Self {
            grid: self.grid,
            samples,
            coeffs,
            truncation: self.truncation,
        }
    }

    /// Orthogonal projection onto `H²`: drops every `n < 0`.
    pub fn project_h2(&self) -> Self {
        let band = self.grid.band;
        let mut coeffs = self.coeffs.clone();
        coeffs[..band].iter_mut().for_each(|c| *c = C64::new(0.0, 0.0));
        let samples = synthesize(&self.grid, &coeffs);
        Self {
            grid: self.grid,
            samples,
            coeffs,
            truncation: self.truncation,
        }
    }

    /// Norm of the `n < 0` part, i.e. the distance from `H²`.
    pub fn negative_part_norm(&self) -> f64 {
        self.coeffs[..self.grid.band]
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Multiplication by `z^k`, done exactly on coefficients.
    pub fn shift(&self, k: i64) -> Self {
        let band = self.grid.band as i64;
        let mut coeffs = vec![C64::new(0.0, 0.0); self.grid.coeff_len()];
        let mut dropped = 0.0;
        for n in -band..=band {
            let c = self.coeffs[(n + band) as usize];
            let t = n + k;
            if t.abs() <= band {
                coeffs[(t + band) as usize] = c;
            } else {
                dropped += c.norm_sqr();
            }
        }
        let samples = synthesize(&self.grid, &coeffs);
        Self {
            grid: self.grid,
            samples,
            coeffs,
            truncation: self.truncation + dropped.sqrt(),
        }
    }

    /// Symmetry `f(z) = f(conj z)`, measured as `max_n |a_n − a_{−n}|`.
    pub fn is_symmetric(&self, tol: f64) -> Verdict {
        let band = self.grid.band;
        let residual = (1..=band)
            .map(|k| (self.coeffs[band + k] - self.coeffs[band - k]).norm())
            .fold(0.0, f64::max);
        Verdict::below(residual, tol)
    }

    /// Unimodularity on the grid, `max_j ||f(z_j)| − 1|`.
    pub fn is_unimodular(&self, tol: f64) -> Verdict {
        let residual = self
            .samples
            .iter()
            .map(|s| (s.norm() - 1.0).abs())
            .fold(0.0, f64::max);
        Verdict::below(residual, tol)
    }

    /// Smallest `d` such that every `|a_n|` with `|n| > d` is at most `tol`.
    pub fn effective_band(&self, tol: f64) -> usize {
        let band = self.grid.band;
        (0..=band)
            .rev()
            .find(|&d| {
                self.coeffs[band + d].norm() > tol || self.coeffs[band - d].norm() > tol
            })
            .unwrap_or(0)
    }

    /// Largest coefficient distance `max_n |a_n − b_n|`.
    pub fn max_coeff_distance(&self, other: &Self) -> Result<f64> {
        self.grid.check_same(&other.grid)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `‖f − g‖` in `L²`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }
}

fn synthesize(grid: &GridParams, coeffs: &[C64]) -> Vec<C64> {
    let m = grid.size;
    let band = grid.band as i64;
    let mut buf = vec![C64::new(0.0, 0.0); m];
    for n in -band..=band {
        buf[n.rem_euclid(m as i64) as usize] = coeffs[(n + band) as usize];
    }
    inverse_plan(m).process(&mut buf);
    buf
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn small() -> GridParams {
        GridParams::new(256, 64).unwrap()
    }

    fn b_half(grid: GridParams) -> LaurentFunction {
        // (|a|/a)(a - z)/(1 - a z) with a = 0.5
        LaurentFunction::from_fn(grid, |z| (c(0.5, 0.0) - z) / (c(1.0, 0.0) - z * 0.5)).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(GridParams::new(4096, 1024).is_ok());
        assert!(GridParams::new(4096, 2047).is_ok());
        assert!(GridParams::new(4096, 2048).is_err());
        assert!(GridParams::new(1000, 10).is_err());
        assert_eq!(GridParams::default().size(), 4096);
    }

    #[test]
    fn monomials_are_orthonormal() {
        let g = small();
        let z = LaurentFunction::monomial(g, 1).unwrap();
        let one = LaurentFunction::constant(g, c(1.0, 0.0));
        assert_eq!(z.inner_product(&one).unwrap(), c(0.0, 0.0));
        let f = one.add(&z).unwrap();
        assert!((f.inner_product(&f).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn blaschke_factor_has_unit_norm() {
        let b = b_half(GridParams::default());
        assert!((b.inner_product(&b).unwrap() - c(1.0, 0.0)).norm() < 1e-13);
        assert!(!b.is_truncated());
        assert!(b.is_unimodular(1e-12).holds);
    }

    #[test]
    fn out_of_grid_mismatch_is_an_error() {
        let a = LaurentFunction::zero(small());
        let b = LaurentFunction::zero(GridParams::default());
        assert!(matches!(a.inner_product(&b), Err(Error::GridMismatch(..))));
        assert!(a.multiply(&b).is_err());
    }

    #[test]
    fn products() {
        let g = small();
        let f = LaurentFunction::from_terms(g, &[(0, c(1.0, 0.0)), (1, c(1.0, 0.0))]).unwrap();
        let h = LaurentFunction::from_terms(g, &[(0, c(1.0, 0.0)), (1, c(-1.0, 0.0))]).unwrap();
        let p = f.multiply(&h).unwrap();
        let want = LaurentFunction::from_terms(g, &[(0, c(1.0, 0.0)), (2, c(-1.0, 0.0))]).unwrap();
        assert!(p.max_coeff_distance(&want).unwrap() < 1e-15);

        let one = LaurentFunction::constant(g, c(1.0, 0.0));
        assert!(f.multiply(&one).unwrap().max_coeff_distance(&f).unwrap() < 1e-15);

        let z = LaurentFunction::monomial(g, 1).unwrap();
        let zi = LaurentFunction::monomial(g, -1).unwrap();
        assert!(z.multiply(&zi).unwrap().max_coeff_distance(&one).unwrap() < 1e-15);
    }

    #[test]
    fn band_overflow_is_flagged() {
        let g = small();
        let f = LaurentFunction::monomial(g, 40).unwrap();
        let p = f.multiply(&f).unwrap();
        assert!(p.is_truncated());
        assert!((p.truncation() - 1.0).abs() < 1e-12);
        assert!(p.norm() < 1e-12);
    }

    #[test]
    fn reflection_operators() {
        let g = small();
        let f = LaurentFunction::from_terms(g, &[(0, c(0.0, 1.0)), (1, c(2.0, 0.0))]).unwrap();
        let jf = f.conj_j();
        assert_eq!(jf.coeff(0), c(0.0, -1.0));
        assert_eq!(jf.coeff(-1), c(2.0, 0.0));
        assert_eq!(jf.coeff(1), c(0.0, 0.0));

        let iz = LaurentFunction::from_terms(g, &[(1, c(0.0, 1.0))]).unwrap();
        assert_eq!(iz.sharp().coeff(1), c(0.0, -1.0));

        for k in [-3i64, 0, 5] {
            let m = LaurentFunction::monomial(g, k).unwrap();
            assert_eq!(m.conj_j().coeff(-k), c(1.0, 0.0));
            assert_eq!(m.sharp().coeff(k), c(1.0, 0.0));
        }
    }

    #[test]
    fn sharp_samples_match_definition() {
        let g = small();
        let f = LaurentFunction::from_terms(g, &[(-2, c(0.3, 0.1)), (1, c(-1.0, 2.0)), (3, c(0.0, 0.7))])
            .unwrap();
        let s = f.sharp();
        let via_coeffs = LaurentFunction::from_coeffs(g, s.coeffs().to_vec()).unwrap();
        for (a, b) in s.samples().iter().zip(via_coeffs.samples()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn hardy_projection() {
        let g = small();
        let f = LaurentFunction::from_terms(g, &[(1, c(1.0, 0.0)), (-1, c(1.0, 0.0))]).unwrap();
        let p = f.project_h2();
        let z = LaurentFunction::monomial(g, 1).unwrap();
        assert!(p.max_coeff_distance(&z).unwrap() < 1e-15);
        assert_eq!(p.project_h2().coeffs(), p.coeffs());
        assert!((f.negative_part_norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn symmetry_and_unimodularity() {
        let g = small();
        let s = LaurentFunction::from_terms(g, &[(1, c(1.0, 0.0)), (-1, c(1.0, 0.0))]).unwrap();
        let a = LaurentFunction::from_terms(g, &[(1, c(1.0, 0.0)), (-1, c(-1.0, 0.0))]).unwrap();
        assert!(s.is_symmetric(1e-12).holds);
        let v = a.is_symmetric(1e-12);
        assert!(!v.holds);
        assert!((v.residual - 2.0).abs() < 1e-15);

        assert!(LaurentFunction::monomial(g, 7).unwrap().is_unimodular(1e-12).holds);
        assert!(b_half(g).is_unimodular(1e-12).holds);
        let one_plus_z = LaurentFunction::from_terms(g, &[(0, c(1.0, 0.0)), (1, c(1.0, 0.0))]).unwrap();
        assert!(!one_plus_z.is_unimodular(1e-3).holds);
    }

    #[test]
    fn shift_matches_multiplication() {
        let g = small();
        let f = b_half(g);
        let z3 = LaurentFunction::monomial(g, 3).unwrap();
        let a = f.shift(3);
        let b = f.multiply(&z3).unwrap();
        assert!(a.max_coeff_distance(&b).unwrap() < 1e-13);
    }

    #[test]
    fn effective_band_of_rational_function() {
        let f = b_half(GridParams::default());
        let d = f.effective_band(1e-15);
        assert!(d > 30 && d < 70, "{d}");
        assert_eq!(LaurentFunction::monomial(small(), -4).unwrap().effective_band(0.5), 4);
    }
}
