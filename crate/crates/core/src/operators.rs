//! Linear and antilinear operators on a coefficient window.
//!
//! Operators act on the span of `{z^n : |n| ≤ w}` and are stored as dense
//! `(2w+1)×(2w+1)` matrices in the monomial basis, row/column `i` standing
//! for `n = i − w`. An [`AntilinearMap`] with matrix `P` acts as
//! `v ↦ P·conj(v)`, so composition and adjoints stay plain matrix algebra.
//!
//! Multiplication operators are exact entry by entry (`(M_φ)_{m,n} = φ_{m−n}`),
//! but products of them lose the terms that pass through indices outside the
//! window. Residuals of composed identities are therefore measured on an
//! interior block `|m|, |n| ≤ r` chosen away from the window edge.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::fourier::{GridParams, LaurentFunction, Verdict, C64};

fn czero() -> C64 {
    C64::new(0.0, 0.0)
}

fn cone() -> C64 {
    C64::new(1.0, 0.0)
}

/// Complex product through four real GEMMs.
pub(crate) fn cmatmul(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    assert_eq!(a.ncols(), b.nrows(), "inner dimensions differ");
    let ar = a.map(|z| z.re);
    let ai = a.map(|z| z.im);
    let br = b.map(|z| z.re);
    let bi = b.map(|z| z.im);
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    re.zip_map(&im, C64::new)
}

fn conj(m: &DMatrix<C64>) -> DMatrix<C64> {
    m.map(|z| z.conj())
}

fn frobenius(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn rows(m: &DMatrix<C64>, start: usize, len: usize) -> DMatrix<C64> {
    m.rows(start, len).into_owned()
}

fn cols(m: &DMatrix<C64>, start: usize, len: usize) -> DMatrix<C64> {
    m.columns(start, len).into_owned()
}

/// Column-oriented product that skips zero entries of `v`; probes and their
/// images are supported on a small part of the window.
fn matvec(m: &DMatrix<C64>, v: &[C64]) -> Vec<C64> {
    let mut out = vec![czero(); m.nrows()];
    for (j, &x) in v.iter().enumerate() {
        if x == czero() {
            continue;
        }
        for (o, a) in out.iter_mut().zip(m.column(j).iter()) {
            *o += a * x;
        }
    }
    out
}

fn check_window(w: usize, grid: &GridParams) -> Result<()> {
    if w > grid.band() {
        return Err(Error::Parameter(format!(
            "operator window ±{w} exceeds function band ±{}",
            grid.band()
        )));
    }
    Ok(())
}

/// Interior block `|m|, |n| ≤ r` of a window of half-width `w`.
#[derive(Clone, Copy, Debug)]
struct Block {
    start: usize,
    len: usize,
}

fn block(w: usize, r: usize) -> Result<Block> {
    if r > w {
        return Err(Error::Parameter(format!(
            "interior ±{r} exceeds window ±{w}"
        )));
    }
    Ok(Block {
        start: w - r,
        len: 2 * r + 1,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    half: usize,
    matrix: DMatrix<C64>,
}

impl LinearMap {
    pub fn from_matrix(half: usize, matrix: DMatrix<C64>) -> Result<Self> {
        let d = 2 * half + 1;
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::Parameter(format!(
                "matrix must be {d}×{d}, got {}×{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { half, matrix })
    }

    pub fn identity(half: usize) -> Self {
        let d = 2 * half + 1;
        Self {
            half,
            matrix: DMatrix::identity(d, d),
        }
    }

    /// `M_{z^k}`: shifts every coefficient by `k`.
    pub fn shift(half: usize, k: i64) -> Self {
        let d = 2 * half + 1;
        let matrix = DMatrix::from_fn(d, d, |i, j| {
            if i as i64 - j as i64 == k {
                cone()
            } else {
                czero()
            }
        });
        Self { half, matrix }
    }

    pub fn half(&self) -> usize {
        self.half
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        matvec(&self.matrix, v)
    }

    pub fn apply_fn(&self, f: &LaurentFunction) -> Result<LaurentFunction> {
        check_window(self.half, &f.grid())?;
        LaurentFunction::from_window(f.grid(), &self.apply(&f.window(self.half)))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        LinearMap {
            half: self.half,
            matrix: cmatmul(&self.matrix, &other.matrix),
        }
    }

    /// `self ∘ A`, an antilinear map.
    pub fn compose_antilinear(&self, a: &AntilinearMap) -> AntilinearMap {
        AntilinearMap {
            half: self.half,
            matrix: cmatmul(&self.matrix, &a.matrix),
        }
    }

    pub fn adjoint(&self) -> LinearMap {
        LinearMap {
            half: self.half,
            matrix: self.matrix.adjoint(),
        }
    }

    /// Frobenius norm of `self − other` on the interior block `±r`, an upper
    /// bound for the operator norm of the restricted difference.
    pub fn distance(&self, other: &LinearMap, r: usize) -> Result<f64> {
        let b = block(self.half, r)?;
        let diff = self.matrix.view((b.start, b.start), (b.len, b.len))
            - other.matrix.view((b.start, b.start), (b.len, b.len));
        Ok(frobenius(&diff))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AntilinearMap {
    half: usize,
    matrix: DMatrix<C64>,
}

impl AntilinearMap {
    pub fn from_matrix(half: usize, matrix: DMatrix<C64>) -> Result<Self> {
        let l = LinearMap::from_matrix(half, matrix)?;
        Ok(Self {
            half,
            matrix: l.matrix,
        })
    }

    pub fn half(&self) -> usize {
        self.half
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// `v ↦ P·conj(v)`.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let cv: Vec<C64> = v.iter().map(|z| z.conj()).collect();
        matvec(&self.matrix, &cv)
    }

    pub fn apply_fn(&self, f: &LaurentFunction) -> Result<LaurentFunction> {
        check_window(self.half, &f.grid())?;
        LaurentFunction::from_window(f.grid(), &self.apply(&f.window(self.half)))
    }

    /// `self ∘ other`, which is linear: `P·conj(Q)`.
    pub fn compose(&self, other: &AntilinearMap) -> LinearMap {
        LinearMap {
            half: self.half,
            matrix: cmatmul(&self.matrix, &conj(&other.matrix)),
        }
    }

    /// `self ∘ L`, antilinear: `P·conj(L)`.
    pub fn compose_linear(&self, l: &LinearMap) -> AntilinearMap {
        AntilinearMap {
            half: self.half,
            matrix: cmatmul(&self.matrix, &conj(&l.matrix)),
        }
    }

    /// `c·A`.
    pub fn scale(&self, c: C64) -> AntilinearMap {
        AntilinearMap {
            half: self.half,
            matrix: self.matrix.map(|z| z * c),
        }
    }

    /// Frobenius distance on the interior block `±r`.
    pub fn distance(&self, other: &AntilinearMap, r: usize) -> Result<f64> {
        let b = block(self.half, r)?;
        let diff = self.matrix.view((b.start, b.start), (b.len, b.len))
            - other.matrix.view((b.start, b.start), (b.len, b.len));
        Ok(frobenius(&diff))
    }

    /// `A∘A − I` on the interior block `±r`, from the partial product
    /// `P[I,:]·conj(P)[:,I]`.
    pub fn involution_residual(&self, r: usize) -> Result<f64> {
        let b = block(self.half, r)?;
        let top = rows(&self.matrix, b.start, b.len);
        let right = conj(&cols(&self.matrix, b.start, b.len));
        let sq = cmatmul(&top, &right);
        let diff = sq - DMatrix::<C64>::identity(b.len, b.len);
        Ok(frobenius(&diff))
    }

    /// Probe form of the conjugation axioms: `‖A(A f) − f‖` and
    /// `|⟨A g, A h⟩ − ⟨h, g⟩|` over consecutive probe pairs.
    pub fn conjugation_residuals(&self, probes: &[Vec<C64>]) -> ConjugationResiduals {
        let images: Vec<Vec<C64>> = probes.iter().map(|p| self.apply(p)).collect();
        let involution = probes
            .iter()
            .zip(&images)
            .map(|(p, img)| {
                l2_distance(&self.apply(img), p)
            })
            .fold(0.0, f64::max);
        let isometry = (0..probes.len().saturating_sub(1))
            .map(|i| {
                let (g, h) = (&probes[i], &probes[i + 1]);
                (dot(&images[i], &images[i + 1]) - dot(h, g)).norm()
            })
            .fold(0.0, f64::max);
        ConjugationResiduals {
            involution,
            isometry,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjugationResiduals {
    pub involution: f64,
    pub isometry: f64,
}

impl ConjugationResiduals {
    pub fn max(&self) -> f64 {
        self.involution.max(self.isometry)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.max() < tol
    }
}

/// Random unit vectors in a window of half-width `half`, supported on
/// `|n| ≤ support`.
pub fn random_probes(half: usize, support: usize, count: usize, rng: &mut impl Rng) -> Vec<Vec<C64>> {
    let support = support.min(half);
    (0..count)
        .map(|_| {
            let mut v = vec![czero(); 2 * half + 1];
            for x in &mut v[half - support..=half + support] {
                *x = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
            let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v.iter_mut().for_each(|z| *z /= n);
            v
        })
        .collect()
}

/// `M_φ` on the window `±half`.
pub fn build_m(phi: &LaurentFunction, half: usize) -> Result<LinearMap> {
    check_window(half, &phi.grid())?;
    let d = 2 * half + 1;
    let matrix = DMatrix::from_fn(d, d, |i, j| phi.coeff(i as i64 - j as i64));
    Ok(LinearMap { half, matrix })
}

/// `J f = conj(f)`.
pub fn build_j(half: usize) -> AntilinearMap {
    let d = 2 * half + 1;
    let matrix = DMatrix::from_fn(d, d, |i, j| if i + j == d - 1 { cone() } else { czero() });
    AntilinearMap { half, matrix }
}

/// `J* f = f#`.
pub fn build_jstar(half: usize) -> AntilinearMap {
    let d = 2 * half + 1;
    AntilinearMap {
        half,
        matrix: DMatrix::identity(d, d),
    }
}

fn mpsi_j_unchecked(psi: &LaurentFunction, half: usize) -> AntilinearMap {
    let d = 2 * half + 1;
    let h = half as i64;
    let matrix = DMatrix::from_fn(d, d, |i, j| psi.coeff(i as i64 - h + j as i64 - h));
    AntilinearMap { half, matrix }
}

fn mpsi_jstar_unchecked(psi: &LaurentFunction, half: usize) -> AntilinearMap {
    let d = 2 * half + 1;
    let matrix = DMatrix::from_fn(d, d, |i, j| psi.coeff(i as i64 - j as i64));
    AntilinearMap { half, matrix }
}

/// `C_θ f = θ·conj(z)·conj(f)`.
pub fn build_c_theta(theta: &BlaschkeProduct, grid: GridParams, half: usize) -> Result<AntilinearMap> {
    check_window(half, &grid)?;
    let symbol = theta.to_grid(grid)?.shift(-1);
    Ok(mpsi_j_unchecked(&symbol, half))
}

/// `M_ψ J`; refuses a symbol that is not unimodular within `tol`.
pub fn build_mpsi_j(psi: &LaurentFunction, half: usize, tol: f64) -> Result<AntilinearMap> {
    check_window(half, &psi.grid())?;
    let u = psi.is_unimodular(tol);
    if !u.holds {
        return Err(Error::NotUnimodular(u.residual));
    }
    Ok(mpsi_j_unchecked(psi, half))
}

/// `M_ψ J*`; refuses a non-unimodular symbol. A non-symmetric symbol still
/// yields an antilinear isometry, but not an involution; the returned
/// verdict reports the symmetry test so callers can see it.
pub fn build_mpsi_jstar(psi: &LaurentFunction, half: usize, tol: f64) -> Result<(AntilinearMap, Verdict)> {
    check_window(half, &psi.grid())?;
    let u = psi.is_unimodular(tol);
    if !u.holds {
        return Err(Error::NotUnimodular(u.residual));
    }
    Ok((mpsi_jstar_unchecked(psi, half), psi.is_symmetric(tol)))
}

/// The transposition conjugation swapping the `z^k` and `z^l` coefficients
/// and conjugating all of them.
pub fn build_ckl(k: i64, l: i64, half: usize) -> Result<AntilinearMap> {
    let h = half as i64;
    if k >= l || k.abs() > h || l.abs() > h {
        return Err(Error::Parameter(format!(
            "need k < l inside ±{half}, got k = {k}, l = {l}"
        )));
    }
    let d = 2 * half + 1;
    let (ki, li) = ((k + h) as usize, (l + h) as usize);
    let mut matrix = DMatrix::identity(d, d);
    matrix[(ki, ki)] = czero();
    matrix[(li, li)] = czero();
    matrix[(ki, li)] = cone();
    matrix[(li, ki)] = cone();
    Ok(AntilinearMap { half, matrix })
}

/// `M_z A − A M_z` on the block `±r` (Frobenius). Exact up to `r = half − 1`.
pub fn commutes_with_mz(a: &AntilinearMap, r: usize) -> Result<f64> {
    shift_residual(a, r, 1)
}

/// `M_z A − A M_{conj z}` on the block `±r` (Frobenius).
pub fn intertwines_mz_mzbar(a: &AntilinearMap, r: usize) -> Result<f64> {
    shift_residual(a, r, -1)
}

fn shift_residual(a: &AntilinearMap, r: usize, dir: i64) -> Result<f64> {
    if r + 1 > a.half {
        return Err(Error::Parameter(format!(
            "shift residual needs r < {}, got {r}",
            a.half
        )));
    }
    let h = a.half as i64;
    let r = r as i64;
    let mut acc = 0.0;
    for m in -r..=r {
        for n in -r..=r {
            let left = a.matrix[((m - 1 + h) as usize, (n + h) as usize)];
            let right = a.matrix[((m + h) as usize, (n + dir + h) as usize)];
            acc += (left - right).norm_sqr();
        }
    }
    Ok(acc.sqrt())
}

/// `‖C A C − A*‖` on the block `±r`.
pub fn is_c_symmetric(a: &LinearMap, c: &AntilinearMap, r: usize) -> Result<f64> {
    if a.half != c.half {
        return Err(Error::Parameter("window mismatch".into()));
    }
    let b = block(a.half, r)?;
    let top = rows(&c.matrix, b.start, b.len);
    let right = conj(&cols(&c.matrix, b.start, b.len));
    let cac = cmatmul(&cmatmul(&top, &conj(&a.matrix)), &right);
    let adj = a.matrix.adjoint();
    let diff = cac - adj.view((b.start, b.start), (b.len, b.len));
    Ok(frobenius(&diff))
}

/// One factor of an [`OperatorChain`].
#[derive(Clone, Debug)]
pub enum Factor {
    Linear(LinearMap),
    Antilinear(AntilinearMap),
}

impl Factor {
    fn half(&self) -> usize {
        match self {
            Factor::Linear(l) => l.half,
            Factor::Antilinear(a) => a.half,
        }
    }

    fn apply(&self, v: &[C64]) -> Vec<C64> {
        match self {
            Factor::Linear(l) => l.apply(v),
            Factor::Antilinear(a) => a.apply(v),
        }
    }
}

/// A composite `F_1 ∘ F_2 ∘ … ∘ F_k` applied factor by factor, without
/// forming the product matrix.
#[derive(Clone, Debug)]
pub struct OperatorChain {
    factors: Vec<Factor>,
}

impl OperatorChain {
    /// Factors in composition order: the last one acts first.
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        let Some(first) = factors.first() else {
            return Err(Error::Parameter("empty operator chain".into()));
        };
        let half = first.half();
        if factors.iter().any(|f| f.half() != half) {
            return Err(Error::Parameter("chain factors use different windows".into()));
        }
        Ok(Self { factors })
    }

    pub fn half(&self) -> usize {
        self.factors[0].half()
    }

    pub fn is_antilinear(&self) -> bool {
        self.factors
            .iter()
            .filter(|f| matches!(f, Factor::Antilinear(_)))
            .count()
            % 2
            == 1
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.factors
            .iter()
            .rev()
            .fold(v.to_vec(), |acc, f| f.apply(&acc))
    }

    pub fn apply_fn(&self, f: &LaurentFunction) -> Result<LaurentFunction> {
        let half = self.half();
        check_window(half, &f.grid())?;
        LaurentFunction::from_window(f.grid(), &self.apply(&f.window(half)))
    }

    /// Same probe residuals as [`AntilinearMap::conjugation_residuals`].
    pub fn conjugation_residuals(&self, probes: &[Vec<C64>]) -> Result<ConjugationResiduals> {
        if !self.is_antilinear() {
            return Err(Error::Parameter("chain is linear, not antilinear".into()));
        }
        let images: Vec<Vec<C64>> = probes.iter().map(|p| self.apply(p)).collect();
        let involution = probes
            .iter()
            .zip(&images)
            .map(|(p, img)| l2_distance(&self.apply(img), p))
            .fold(0.0, f64::max);
        let isometry = (0..probes.len().saturating_sub(1))
            .map(|i| (dot(&images[i], &images[i + 1]) - dot(&probes[i + 1], &probes[i])).norm())
            .fold(0.0, f64::max);
        Ok(ConjugationResiduals {
            involution,
            isometry,
        })
    }

    /// `max ‖z·C(f) − C(z^k·f)‖` over the probes: `k = 1` tests commuting with
    /// `M_z`, `k = −1` tests intertwining `M_z` with `M_{conj z}`.
    pub fn shift_residual(&self, probes: &[Vec<C64>], k: i64) -> f64 {
        probes
            .iter()
            .map(|p| {
                let left = shift_vec(&self.apply(p), 1);
                let right = self.apply(&shift_vec(p, k));
                l2_distance(&left, &right)
            })
            .fold(0.0, f64::max)
    }
}

fn dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

fn l2_distance(x: &[C64], y: &[C64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
}

fn shift_vec(v: &[C64], k: i64) -> Vec<C64> {
    let len = v.len() as i64;
    (0..len)
        .map(|i| {
            let src = i - k;
            if (0..len).contains(&src) {
                v[src as usize]
            } else {
                czero()
            }
        })
        .collect()
}

/// Interior block `(A·B)[I, I]` of a product of window matrices, computed from
/// the strips `A[I, :]` and `B[:, I]` only.
pub fn product_block(a: &DMatrix<C64>, b: &DMatrix<C64>, half: usize, r: usize) -> Result<DMatrix<C64>> {
    let blk = block(half, r)?;
    Ok(cmatmul(&rows(a, blk.start, blk.len), &cols(b, blk.start, blk.len)))
}

/// Interior block `M[I, I]`.
pub fn interior(m: &DMatrix<C64>, half: usize, r: usize) -> Result<DMatrix<C64>> {
    let blk = block(half, r)?;
    Ok(m.view((blk.start, blk.start), (blk.len, blk.len)).into_owned())
}

/// Frobenius norm of a block.
pub fn block_norm(m: &DMatrix<C64>) -> f64 {
    frobenius(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjugationKind {
    /// `M_z C = C M_{conj z}`.
    MzConjugation,
    /// `M_z C = C M_z`.
    MzCommuting,
    Neither,
}

#[derive(Clone, Debug)]
pub struct SymbolRecovery {
    pub kind: ConjugationKind,
    pub psi: LaurentFunction,
    pub commuting_residual: f64,
    pub intertwining_residual: f64,
    /// `‖A − M_ψ J^{(*)}‖` on the block `±half/2`; zero for `Neither`.
    pub reconstruction_residual: f64,
    pub unimodular: Verdict,
    pub symmetric: Verdict,
}

impl SymbolRecovery {
    /// The class-specific conclusions: reconstruction and unimodularity, plus
    /// symmetry for the commuting class.
    pub fn consistent(&self, tol: f64) -> bool {
        match self.kind {
            ConjugationKind::MzConjugation => self.reconstruction_residual < tol && self.unimodular.residual < tol,
            ConjugationKind::MzCommuting => {
                self.reconstruction_residual < tol
                    && self.unimodular.residual < tol
                    && self.symmetric.residual < tol
            }
            ConjugationKind::Neither => true,
        }
    }
}

/// Reads `ψ = A(1)` and classifies `A` by which shift relation holds.
pub fn recover_symbol(a: &AntilinearMap, grid: GridParams, tol: f64) -> Result<SymbolRecovery> {
    check_window(a.half, &grid)?;
    let mut one = vec![czero(); 2 * a.half + 1];
    one[a.half] = cone();
    let psi = LaurentFunction::from_window(grid, &a.apply(&one))?;
    let r = a.half - 1;
    let commuting_residual = commutes_with_mz(a, r)?;
    let intertwining_residual = intertwines_mz_mzbar(a, r)?;
    let kind = if commuting_residual < tol {
        ConjugationKind::MzCommuting
    } else if intertwining_residual < tol {
        ConjugationKind::MzConjugation
    } else {
        ConjugationKind::Neither
    };
    let inner = a.half / 2;
    let reconstruction_residual = match kind {
        ConjugationKind::MzCommuting => a.distance(&mpsi_jstar_unchecked(&psi, a.half), inner)?,
        ConjugationKind::MzConjugation => a.distance(&mpsi_j_unchecked(&psi, a.half), inner)?,
        ConjugationKind::Neither => 0.0,
    };
    Ok(SymbolRecovery {
        kind,
        unimodular: psi.is_unimodular(tol),
        symmetric: psi.is_symmetric(tol),
        psi,
        commuting_residual,
        intertwining_residual,
        reconstruction_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn grid() -> GridParams {
        GridParams::new(512, 128).unwrap()
    }

    fn unit(half: usize, n: i64) -> Vec<C64> {
        let mut v = vec![czero(); 2 * half + 1];
        v[(n + half as i64) as usize] = cone();
        v
    }

    #[test]
    fn complex_gemm_matches_naive() {
        let a = DMatrix::from_fn(5, 4, |i, j| c(i as f64 - 1.0, j as f64 * 0.5));
        let b = DMatrix::from_fn(4, 3, |i, j| c((i * j) as f64, 1.0 - i as f64));
        let want = &a * &b;
        assert!(frobenius(&(cmatmul(&a, &b) - want)) < 1e-12);
    }

    #[test]
    fn multiplication_builders() {
        let g = grid();
        let h = 16;
        let one = LaurentFunction::constant(g, cone());
        assert_eq!(build_m(&one, h).unwrap(), LinearMap::identity(h));
        let z = LaurentFunction::monomial(g, 1).unwrap();
        let mz = build_m(&z, h).unwrap();
        assert_eq!(mz, LinearMap::shift(h, 1));
        let zi = LaurentFunction::monomial(g, -1).unwrap();
        let prod = mz.compose(&build_m(&zi, h).unwrap());
        assert!(prod.distance(&LinearMap::identity(h), h - 1).unwrap() < 1e-15);
    }

    #[test]
    fn reflections_on_monomials() {
        let h = 8;
        for k in [-3i64, 0, 2] {
            assert_eq!(build_j(h).apply(&unit(h, k)), unit(h, -k));
            assert_eq!(build_jstar(h).apply(&unit(h, k)), unit(h, k));
        }
    }

    #[test]
    fn c_theta_of_z_squared() {
        let h = 8;
        let ct = build_c_theta(&BlaschkeProduct::z_power(2), grid(), h).unwrap();
        // c0 + c1 z ↦ conj(c1) + conj(c0) z
        let mut v = vec![czero(); 2 * h + 1];
        v[h] = c(1.0, 2.0);
        v[h + 1] = c(-0.5, 0.25);
        let out = ct.apply(&v);
        assert!((out[h] - c(-0.5, -0.25)).norm() < 1e-14);
        assert!((out[h + 1] - c(1.0, -2.0)).norm() < 1e-14);
    }

    #[test]
    fn transposition_conjugation() {
        let h = 6;
        let ckl = build_ckl(0, 1, h).unwrap();
        let mut v = vec![czero(); 2 * h + 1];
        v[h] = c(1.0, 1.0);
        v[h + 1] = c(2.0, -1.0);
        v[h + 2] = c(0.0, 3.0);
        let out = ckl.apply(&v);
        assert_eq!(out[h], c(2.0, 1.0));
        assert_eq!(out[h + 1], c(1.0, -1.0));
        assert_eq!(out[h + 2], c(0.0, -3.0));
        assert!(ckl.involution_residual(h).unwrap() < 1e-15);
        assert!(commutes_with_mz(&build_ckl(0, 2, h).unwrap(), h - 1).unwrap() > 0.5);
        assert!(intertwines_mz_mzbar(&build_ckl(0, 2, h).unwrap(), h - 1).unwrap() > 0.5);
        assert!(build_ckl(2, 1, h).is_err());
        assert!(build_ckl(0, 7, h).is_err());
    }

    #[test]
    fn shift_relations_of_basic_conjugations() {
        let h = 10;
        assert!(commutes_with_mz(&build_jstar(h), h - 1).unwrap() < 1e-15);
        assert!(intertwines_mz_mzbar(&build_j(h), h - 1).unwrap() < 1e-15);
        assert!(commutes_with_mz(&build_j(h), h - 1).unwrap() > 1.0);
        let theta = BlaschkeProduct::from_zeros(vec![c(0.3, 0.2), c(-0.1, 0.4)]).unwrap();
        let ct = build_c_theta(&theta, grid(), 64).unwrap();
        assert!(intertwines_mz_mzbar(&ct, 63).unwrap() < 1e-10);
    }

    #[test]
    fn mpsi_builders_validate_symbol() {
        let g = grid();
        let one = LaurentFunction::constant(g, cone());
        let (m, sym) = build_mpsi_jstar(&one, 8, 1e-10).unwrap();
        assert_eq!(m, build_jstar(8));
        assert!(sym.holds);
        let s = LaurentFunction::from_terms(g, &[(1, cone()), (-1, cone())]).unwrap();
        assert!(matches!(build_mpsi_jstar(&s, 8, 1e-10), Err(Error::NotUnimodular(_))));
        assert!(matches!(build_mpsi_j(&s, 8, 1e-10), Err(Error::NotUnimodular(_))));
        let z = LaurentFunction::monomial(g, 1).unwrap();
        let (_, sym) = build_mpsi_jstar(&z, 8, 1e-10).unwrap();
        assert!(!sym.holds);
    }

    #[test]
    fn c_symmetry_of_shift() {
        let h = 12;
        let mz = LinearMap::shift(h, 1);
        assert!(is_c_symmetric(&mz, &build_j(h), h - 1).unwrap() < 1e-15);
        assert!(is_c_symmetric(&mz, &build_jstar(h), h - 1).unwrap() > 1.0);
    }

    #[test]
    fn probes_give_zero_residuals_for_j() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let probes = random_probes(12, 4, 20, &mut rng);
        let r = build_j(12).conjugation_residuals(&probes);
        assert!(r.holds(1e-14), "{r:?}");
        let skew = build_jstar(12).scale(c(2.0, 0.0));
        assert!(!skew.conjugation_residuals(&probes).holds(1e-3));
    }

    #[test]
    fn chain_matches_matrix_product() {
        let g = grid();
        let h = 48;
        let a = BlaschkeProduct::from_zeros(vec![c(0.3, 0.1)]).unwrap();
        let b = BlaschkeProduct::from_zeros(vec![c(-0.2, 0.4), c(0.1, 0.1)]).unwrap();
        let ca = build_c_theta(&a, g, h).unwrap();
        let cb = build_c_theta(&b, g, h).unwrap();
        let chain = OperatorChain::new(vec![
            Factor::Antilinear(cb.clone()),
            Factor::Antilinear(build_jstar(h)),
            Factor::Antilinear(ca.clone()),
        ])
        .unwrap();
        assert!(chain.is_antilinear());
        let dense = cb.compose(&build_jstar(h)).compose_antilinear(&ca);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in random_probes(h, 3, 4, &mut rng) {
            let x = chain.apply(&p);
            let y = dense.apply(&p);
            assert!(l2_distance(&x, &y) < 1e-12);
        }
        let probes = random_probes(h, 3, 4, &mut rng);
        assert!(chain.shift_residual(&probes, 1) < 1e-10);
        assert!(chain.shift_residual(&probes, -1) > 1e-3);
        let lin = OperatorChain::new(vec![Factor::Antilinear(cb), Factor::Antilinear(ca)]).unwrap();
        assert!(lin.conjugation_residuals(&probes).is_err());
    }

    #[test]
    fn symbol_recovery_classes() {
        let g = grid();
        let h = 32;
        let lam = C64::from_polar(1.0, 0.7);
        let rec = recover_symbol(&build_jstar(h).scale(lam), g, 1e-10).unwrap();
        assert_eq!(rec.kind, ConjugationKind::MzCommuting);
        assert!((rec.psi.coeff(0) - lam).norm() < 1e-15);
        assert!(rec.consistent(1e-10));

        let theta = BlaschkeProduct::from_zeros(vec![c(0.2, 0.1)]).unwrap();
        let ct = build_c_theta(&theta, g, h).unwrap();
        let rec = recover_symbol(&ct, g, 1e-10).unwrap();
        assert_eq!(rec.kind, ConjugationKind::MzConjugation);
        let want = theta.to_grid(g).unwrap().shift(-1);
        assert!(rec.psi.max_coeff_distance(&want).unwrap() < 1e-12);

        let rec = recover_symbol(&build_ckl(0, 1, h).unwrap(), g, 1e-10).unwrap();
        assert_eq!(rec.kind, ConjugationKind::Neither);
    }
}
