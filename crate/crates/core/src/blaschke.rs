//! Finite Blaschke products as exact zero-multiset algebra.
//!
//! A product is a unimodular constant `λ` together with a multiset of zeros
//! in the open disk. Each zero contributes the normalized factor
//!
//! ```text
//! b_a(z) = z                              (a = 0)
//! b_a(z) = (|a|/a)·(a − z)/(1 − conj(a)·z)  (a ≠ 0)
//! ```
//!
//! so that `b_a(0) = |a| ≥ 0` and `b_a#` is exactly `b_{conj a}`. Division,
//! the lattice meet `∧` and divisibility are multiset operations with a
//! pairing tolerance, matched greedily by nearest neighbour.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{GridParams, LaurentFunction, C64};

/// Two zeros closer than this are treated as the same point.
pub const PAIRING_TOL: f64 = 1e-9;

/// Zeros beyond this modulus are refused by [`BlaschkeProduct::to_grid`].
pub const MAX_GRID_MODULUS: f64 = 0.8;

/// Tail norm targeted when sizing the band needed for a product.
pub const GRID_TAIL_TOL: f64 = 1e-13;

const LAMBDA_TOL: f64 = 1e-12;
const SNAP_TO_ORIGIN: f64 = 1e-15;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlaschkeJson", into = "BlaschkeJson")]
pub struct BlaschkeProduct {
    lambda: C64,
    /// Sorted by `(re, im)`; repeated entries carry multiplicity.
    zeros: Vec<C64>,
}

fn cmp_zero(a: &C64, b: &C64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

impl BlaschkeProduct {
    pub fn new(lambda: C64, zeros: Vec<C64>) -> Result<Self> {
        if !lambda.re.is_finite() || !lambda.im.is_finite() || (lambda.norm() - 1.0).abs() > LAMBDA_TOL {
            return Err(Error::Parameter(format!(
                "lambda {lambda} is not unimodular"
            )));
        }
        for (i, a) in zeros.iter().enumerate() {
            if !a.re.is_finite() || !a.im.is_finite() || a.norm() >= 1.0 {
                return Err(Error::Parameter(format!(
                    "zero #{i} = {a} is not in the open unit disk"
                )));
            }
        }
        Ok(Self::canonical(lambda / lambda.norm(), zeros))
    }

    fn canonical(lambda: C64, mut zeros: Vec<C64>) -> Self {
        for a in zeros.iter_mut() {
            if a.norm() < SNAP_TO_ORIGIN {
                *a = C64::new(0.0, 0.0);
            }
        }
        zeros.sort_by(cmp_zero);
        Self { lambda, zeros }
    }

    /// Product with `λ = 1`.
    pub fn from_zeros(zeros: Vec<C64>) -> Result<Self> {
        Self::new(C64::new(1.0, 0.0), zeros)
    }

    pub fn constant(lambda: C64) -> Result<Self> {
        Self::new(lambda, Vec::new())
    }

    pub fn one() -> Self {
        Self {
            lambda: C64::new(1.0, 0.0),
            zeros: Vec::new(),
        }
    }

    /// `z^k`.
    pub fn z_power(k: usize) -> Self {
        Self {
            lambda: C64::new(1.0, 0.0),
            zeros: vec![C64::new(0.0, 0.0); k],
        }
    }

    /// Single normalized factor `b_a`.
    pub fn factor(a: C64) -> Result<Self> {
        Self::from_zeros(vec![a])
    }

    pub fn lambda(&self) -> C64 {
        self.lambda
    }

    pub fn zeros(&self) -> &[C64] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_constant(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn max_modulus(&self) -> f64 {
        self.zeros.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Same zeros, different constant.
    pub fn with_lambda(&self, lambda: C64) -> Result<Self> {
        Self::new(lambda, self.zeros.clone())
    }

    pub fn evaluate(&self, z: C64) -> Result<C64> {
        let mut acc = self.lambda;
        for &a in &self.zeros {
            acc *= factor_value(a, z)?;
        }
        Ok(acc)
    }

    /// `B(0) = λ·Π|a|`, or zero when some factor vanishes at the origin.
    pub fn value_at_zero(&self) -> C64 {
        self.zeros.iter().fold(self.lambda, |acc, a| acc * a.norm())
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut zeros = self.zeros.clone();
        zeros.extend_from_slice(&other.zeros);
        Self::canonical(self.lambda * other.lambda, zeros)
    }

    /// `self / other` when the quotient is inner, otherwise `None`.
    pub fn divide(&self, other: &Self) -> Option<Self> {
        let used = match_into(&other.zeros, &self.zeros, PAIRING_TOL)?;
        let zeros = self
            .zeros
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(_, &a)| a)
            .collect();
        Some(Self::canonical(self.lambda / other.lambda, zeros))
    }

    /// `self ≤ other`: `other / self` is inner.
    pub fn divides(&self, other: &Self) -> bool {
        match_into(&self.zeros, &other.zeros, PAIRING_TOL).is_some()
    }

    /// Greatest common inner divisor `self ∧ other`, normalized to `λ = 1`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut used = vec![false; other.zeros.len()];
        let mut common = Vec::new();
        for &a in &self.zeros {
            if let Some(j) = nearest_unused(a, &other.zeros, &used, PAIRING_TOL) {
                used[j] = true;
                common.push(a);
            }
        }
        Self::canonical(C64::new(1.0, 0.0), common)
    }

    /// `B#(z) = conj(B(conj z))`: conjugates `λ` and every zero.
    pub fn sharp(&self) -> Self {
        Self::canonical(
            self.lambda.conj(),
            self.zeros.iter().map(|a| a.conj()).collect(),
        )
    }

    /// Same zero multiset; returns `μ` with `other = μ·self`.
    pub fn equal_up_to_unimodular(&self, other: &Self) -> Option<C64> {
        if self.zeros.len() != other.zeros.len() {
            return None;
        }
        match_into(&self.zeros, &other.zeros, PAIRING_TOL)?;
        Some(other.lambda / self.lambda)
    }

    /// Strict equality of zeros and constant within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.lambda - other.lambda).norm() < tol
            && self.zeros.len() == other.zeros.len()
            && match_into(&self.zeros, &other.zeros, tol).is_some()
    }

    /// Estimated band past which the coefficient tail has `ℓ²` norm below
    /// `tol`, from a coefficient majorant of the factors.
    pub fn required_band(&self, tol: f64) -> usize {
        const CAP: usize = 1 << 15;
        // The majorant decays geometrically, so a prefix twice as long as the
        // answer already carries all of the tail that matters.
        let mut len = 256;
        loop {
            let n = self.majorant_band(tol, len);
            if 2 * n < len || len == CAP {
                return n;
            }
            len = (2 * len).min(CAP);
        }
    }

    fn majorant_band(&self, tol: f64, len: usize) -> usize {
        let mut seq = vec![0.0; len];
        seq[0] = 1.0;
        for a in &self.zeros {
            let r = a.norm();
            if r < SNAP_TO_ORIGIN {
                seq.rotate_right(1);
                seq[0] = 0.0;
                continue;
            }
            // |coeffs of b_a| ≤ (r, (1−r²), (1−r²)r, (1−r²)r², …)
            let mut s = 0.0;
            let mut prev = 0.0;
            for x in seq.iter_mut() {
                s = prev + r * s;
                prev = *x;
                *x = r * *x + (1.0 - r * r) * s;
            }
        }
        let mut tail = 0.0;
        for n in (0..len).rev() {
            tail += seq[n] * seq[n];
            if tail.sqrt() >= tol {
                return n;
            }
        }
        0
    }

    /// Samples the product on `grid`. Zeros must satisfy `|a| ≤ 0.8` and the
    /// band must cover the estimated coefficient tail.
    pub fn to_grid(&self, grid: GridParams) -> Result<LaurentFunction> {
        let required_band = self.required_band(GRID_TAIL_TOL);
        if let Some(&a) = self.zeros.iter().find(|a| a.norm() > MAX_GRID_MODULUS) {
            return Err(Error::Precision {
                zero: a,
                modulus: a.norm(),
                limit: MAX_GRID_MODULUS,
                required_band,
            });
        }
        if required_band > grid.band() {
            return Err(Error::BandTooSmall {
                band: grid.band(),
                required_band,
            });
        }
        let samples: Vec<C64> = grid
            .nodes()
            .map(|z| self.evaluate(z))
            .collect::<Result<_>>()?;
        LaurentFunction::from_samples(grid, &samples)
    }
}

fn factor_value(a: C64, z: C64) -> Result<C64> {
    if a == C64::new(0.0, 0.0) {
        return Ok(z);
    }
    let denom = C64::new(1.0, 0.0) - a.conj() * z;
    if denom.norm() < 1e-14 {
        return Err(Error::Pole(z));
    }
    Ok((a - z) / denom * (a.norm() / a))
}

fn nearest_unused(a: C64, pool: &[C64], used: &[bool], tol: f64) -> Option<usize> {
    pool.iter()
        .enumerate()
        .filter(|(j, _)| !used[*j])
        .map(|(j, b)| (j, (a - b).norm()))
        .filter(|&(_, d)| d < tol)
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .map(|(j, _)| j)
}

/// Greedily pairs each element of `sub` with an unused element of `sup`;
/// returns the usage mask of `sup` on success.
fn match_into(sub: &[C64], sup: &[C64], tol: f64) -> Option<Vec<bool>> {
    if sub.len() > sup.len() {
        return None;
    }
    let mut used = vec![false; sup.len()];
    for &a in sub {
        let j = nearest_unused(a, sup, &used, tol)?;
        used[j] = true;
    }
    Some(used)
}

impl fmt::Display for BlaschkeProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·B[", self.lambda)?;
        for (i, a) in self.zeros.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

/// Wire form: `{"lambda": [re, im], "zeros": [[re, im, multiplicity], …]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlaschkeJson {
    lambda: [f64; 2],
    zeros: Vec<(f64, f64, u32)>,
}

impl TryFrom<BlaschkeJson> for BlaschkeProduct {
    type Error = Error;

    fn try_from(raw: BlaschkeJson) -> Result<Self> {
        let mut zeros = Vec::new();
        for (i, &(re, im, mult)) in raw.zeros.iter().enumerate() {
            if mult == 0 {
                return Err(Error::Malformed(format!(
                    "zeros[{i}]: multiplicity must be ≥ 1"
                )));
            }
            let a = C64::new(re, im);
            if !re.is_finite() || !im.is_finite() || a.norm() >= 1.0 {
                return Err(Error::Malformed(format!(
                    "zeros[{i}]: {a} is not in the open unit disk"
                )));
            }
            zeros.extend(std::iter::repeat(a).take(mult as usize));
        }
        let lambda = C64::new(raw.lambda[0], raw.lambda[1]);
        BlaschkeProduct::new(lambda, zeros)
            .map_err(|e| Error::Malformed(format!("lambda: {e}")))
    }
}

impl From<BlaschkeProduct> for BlaschkeJson {
    fn from(b: BlaschkeProduct) -> Self {
        let mut zeros: Vec<(f64, f64, u32)> = Vec::new();
        for a in b.zeros {
            match zeros.last_mut() {
                Some(last) if (C64::new(last.0, last.1) - a).norm() < PAIRING_TOL => last.2 += 1,
                _ => zeros.push((a.re, a.im, 1)),
            }
        }
        Self {
            lambda: [b.lambda.re, b.lambda.im],
            zeros,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn bz(zeros: &[C64]) -> BlaschkeProduct {
        BlaschkeProduct::from_zeros(zeros.to_vec()).unwrap()
    }

    #[test]
    fn evaluation_convention() {
        let b = bz(&[c(0.5, 0.0)]);
        assert!(b.evaluate(c(0.5, 0.0)).unwrap().norm() < 1e-16);
        assert!((b.evaluate(c(0.0, 0.0)).unwrap() - c(0.5, 0.0)).norm() < 1e-16);
        assert!((b.value_at_zero() - c(0.5, 0.0)).norm() < 1e-16);
        let z2 = BlaschkeProduct::z_power(2);
        assert!((z2.evaluate(c(0.0, 1.0)).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(matches!(b.evaluate(c(2.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(BlaschkeProduct::new(c(0.5, 0.0), vec![]).is_err());
        assert!(BlaschkeProduct::from_zeros(vec![c(1.0, 0.0)]).is_err());
        assert!(BlaschkeProduct::from_zeros(vec![c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn multiply_and_divide() {
        let z = BlaschkeProduct::z_power(1);
        let z2 = BlaschkeProduct::z_power(2);
        let z3 = BlaschkeProduct::z_power(3);
        assert_eq!(z2.multiply(&z), z3);
        assert_eq!(z3.divide(&z2).unwrap(), z);
        assert!(bz(&[c(0.5, 0.0)]).divide(&bz(&[c(0.3, 0.0)])).is_none());
        assert_eq!(z3.degree(), 3);
    }

    #[test]
    fn gcd_is_multiset_intersection() {
        let a = bz(&[c(0.3, 0.0), c(0.0, 0.5), c(0.0, 0.5)]);
        let b = bz(&[c(0.0, 0.5), c(-0.2, 0.0)]);
        assert_eq!(a.gcd(&b), bz(&[c(0.0, 0.5)]));
        assert_eq!(
            BlaschkeProduct::z_power(2).gcd(&BlaschkeProduct::z_power(3)),
            BlaschkeProduct::z_power(2)
        );
        assert_eq!(bz(&[c(0.1, 0.2)]).gcd(&bz(&[c(0.2, 0.1)])), BlaschkeProduct::one());
    }

    #[test]
    fn sharp_on_zeros() {
        let b = bz(&[c(0.0, 0.5)]);
        assert_eq!(b.sharp(), bz(&[c(0.0, -0.5)]));
        let l = BlaschkeProduct::new(c(0.0, 1.0), vec![c(0.2, 0.3), c(-0.4, 0.1)]).unwrap();
        assert_eq!(l.sharp().sharp(), l);
        assert_eq!(l.sharp().lambda(), c(0.0, -1.0));
    }

    #[test]
    fn sharp_matches_evaluation() {
        let b = BlaschkeProduct::new(c(0.6, 0.8), vec![c(0.2, 0.3), c(-0.4, 0.1), c(0.0, 0.0)]).unwrap();
        let s = b.sharp();
        let grid = GridParams::new(64, 20).unwrap();
        for z in grid.nodes() {
            let lhs = s.evaluate(z).unwrap();
            let rhs = b.evaluate(z.conj()).unwrap().conj();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn divisibility_predicates() {
        assert!(BlaschkeProduct::z_power(1).divides(&BlaschkeProduct::z_power(2)));
        assert!(!BlaschkeProduct::z_power(2).divides(&BlaschkeProduct::z_power(1)));
        let a = c(0.2, 0.4);
        assert!(!bz(&[a]).divides(&bz(&[a.conj()])));
        let z2 = BlaschkeProduct::z_power(2);
        let mz2 = z2.with_lambda(c(-1.0, 0.0)).unwrap();
        assert_eq!(z2.equal_up_to_unimodular(&mz2), Some(c(-1.0, 0.0)));
        assert!(z2.equal_up_to_unimodular(&BlaschkeProduct::z_power(3)).is_none());
    }

    #[test]
    fn grid_sampling() {
        let grid = GridParams::default();
        let z2 = BlaschkeProduct::z_power(2).to_grid(grid).unwrap();
        assert!((z2.coeff(2) - c(1.0, 0.0)).norm() < 1e-14);
        assert!(z2.norm() - 1.0 < 1e-14);

        let b = bz(&[c(0.5, 0.0)]).to_grid(grid).unwrap();
        assert!((b.coeff(0) - c(0.5, 0.0)).norm() < 1e-14);
        assert!(b.negative_part_norm() < 1e-10);

        let far = bz(&[c(0.85, 0.0)]);
        match far.to_grid(grid) {
            Err(Error::Precision { required_band, .. }) => assert!(required_band > 100),
            other => panic!("expected precision error, got {other:?}"),
        }
        let tight = bz(&[c(0.8, 0.0); 6]);
        assert!(matches!(
            tight.to_grid(GridParams::new(256, 64).unwrap()),
            Err(Error::BandTooSmall { .. })
        ));
        assert!(tight.to_grid(grid).unwrap().is_unimodular(1e-12).holds);
    }

    #[test]
    fn required_band_bounds_actual_tail() {
        let b = bz(&[c(0.7, 0.1), c(-0.3, 0.6), c(0.0, 0.0), c(0.5, -0.5)]);
        let d = b.required_band(1e-13);
        let f = b.to_grid(GridParams::default()).unwrap();
        let tail: f64 = ((d as i64 + 1)..=1024).map(|n| f.coeff(n).norm_sqr()).sum::<f64>().sqrt();
        assert!(tail < 1e-13, "tail {tail} past {d}");
    }

    #[test]
    fn json_wire_format() {
        let b = BlaschkeProduct::new(c(0.0, 1.0), vec![c(0.0, 0.5), c(0.0, 0.5), c(0.25, -0.1)]).unwrap();
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(s, r#"{"lambda":[0.0,1.0],"zeros":[[0.0,0.5,2],[0.25,-0.1,1]]}"#);
        let back: BlaschkeProduct = serde_json::from_str(&s).unwrap();
        assert_eq!(back, b);

        let bad = serde_json::from_str::<BlaschkeProduct>(r#"{"lambda":[1,0],"zeros":[[0.0,1.5,1]]}"#);
        assert!(bad.unwrap_err().to_string().contains("zeros[0]"));
        let bad = serde_json::from_str::<BlaschkeProduct>(r#"{"lambda":[2,0],"zeros":[]}"#);
        assert!(bad.unwrap_err().to_string().contains("lambda"));
        assert!(serde_json::from_str::<BlaschkeProduct>(r#"{"lambda":[1,0]}"#).is_err());
    }
}
