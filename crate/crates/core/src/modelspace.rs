//! Model spaces `K_θ = H² ⊖ θH²` for finite Blaschke products.
//!
//! The orthonormal basis is the Takenaka–Malmquist system
//!
//! ```text
//! e_k(z) = sqrt(1 − |a_k|²)/(1 − conj(a_k)·z) · Π_{j<k} b_{a_j}(z)
//! ```
//!
//! built over the zeros of `θ` in canonical order, repeated zeros included.
//! Operators between model spaces are plain `d×d` matrices in these bases;
//! antilinear ones act as `v ↦ R·conj(v)` on coordinate vectors.

use nalgebra::DMatrix;

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::fourier::{GridParams, LaurentFunction, Verdict, C64};
use crate::operators::AntilinearMap;

#[derive(Clone, Debug)]
pub struct ModelSpaceBasis {
    theta: BlaschkeProduct,
    basis: Vec<LaurentFunction>,
}

impl ModelSpaceBasis {
    /// Takenaka–Malmquist basis of `K_θ`.
    pub fn new(theta: &BlaschkeProduct, grid: GridParams) -> Result<Self> {
        if theta.is_constant() {
            return Err(Error::Parameter(
                "K_θ is trivial for constant θ; a basis needs degree ≥ 1".into(),
            ));
        }
        // Also validates the zeros against the grid's tail contract.
        theta.to_grid(grid)?;
        let zeros = theta.zeros().to_vec();
        let basis = (0..zeros.len())
            .map(|k| {
                let a = zeros[k];
                let prefix = BlaschkeProduct::from_zeros(zeros[..k].to_vec())?;
                let norm = (1.0 - a.norm_sqr()).sqrt();
                let values: Vec<C64> = grid
                    .nodes()
                    .map(|z| Ok(prefix.evaluate(z)? * norm / (C64::new(1.0, 0.0) - a.conj() * z)))
                    .collect::<Result<_>>()?;
                LaurentFunction::from_samples(grid, &values)
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            theta: theta.clone(),
            basis,
        })
    }

    pub fn theta(&self) -> &BlaschkeProduct {
        &self.theta
    }

    pub fn functions(&self) -> &[LaurentFunction] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn grid(&self) -> GridParams {
        self.basis[0].grid()
    }

    /// `max |⟨e_i, e_j⟩ − δ_ij|`.
    pub fn gram_residual(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (i, ei) in self.basis.iter().enumerate() {
            for (j, ej) in self.basis.iter().enumerate() {
                let delta = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((ei.inner_product(ej)? - delta).norm());
            }
        }
        Ok(worst)
    }

    /// `max |⟨e_k, θ·z^m⟩|` over `m = 0..=2d`.
    pub fn orthogonality_residual(&self) -> Result<f64> {
        let theta = self.theta.to_grid(self.grid())?;
        let mut worst: f64 = 0.0;
        for m in 0..=2 * self.dim() as i64 {
            let probe = theta.shift(m);
            for e in &self.basis {
                worst = worst.max(e.inner_product(&probe)?.norm());
            }
        }
        Ok(worst)
    }

    /// `⟨f, e_k⟩` for every basis vector.
    pub fn coordinates(&self, f: &LaurentFunction) -> Result<Vec<C64>> {
        self.basis.iter().map(|e| f.inner_product(e)).collect()
    }

    /// `Σ c_k e_k`.
    pub fn combine(&self, coords: &[C64]) -> Result<LaurentFunction> {
        let mut acc = LaurentFunction::zero(self.grid());
        for (c, e) in coords.iter().zip(&self.basis) {
            acc = acc.add(&e.scale(*c))?;
        }
        Ok(acc)
    }

    /// Orthogonal projection `P_θ f = Σ ⟨f, e_k⟩ e_k`.
    pub fn project(&self, f: &LaurentFunction) -> Result<LaurentFunction> {
        self.combine(&self.coordinates(f)?)
    }

    /// `‖f − P_θ f‖`.
    pub fn leakage(&self, f: &LaurentFunction) -> Result<f64> {
        f.distance(&self.project(f)?)
    }
}

/// `P_θ f = P₊f − θ·P₊(conj(θ)·P₊f)`, kept as an independent route to the
/// projection.
pub fn algebraic_projection(f: &LaurentFunction, theta: &BlaschkeProduct) -> Result<LaurentFunction> {
    let t = theta.to_grid(f.grid())?;
    let pf = f.project_h2();
    let inner = t.conj_j().multiply(&pf)?.project_h2();
    pf.sub(&t.multiply(&inner)?)
}

/// `γ·e_k` for each basis vector: an orthonormal basis of `γK_α`.
pub fn multiplied_basis(basis: &ModelSpaceBasis, gamma: &BlaschkeProduct) -> Result<Vec<LaurentFunction>> {
    let g = gamma.to_grid(basis.grid())?;
    basis.functions().iter().map(|e| g.multiply(e)).collect()
}

/// Reproducing kernel at the origin, `k_0 = 1 − conj(α(0))·α`.
pub fn kernel_k0(alpha: &BlaschkeProduct, grid: GridParams) -> Result<LaurentFunction> {
    nonconstant(alpha)?;
    let a = alpha.to_grid(grid)?;
    let one = LaurentFunction::constant(grid, C64::new(1.0, 0.0));
    one.sub(&a.scale(alpha.value_at_zero().conj()))
}

/// Conjugate kernel `k̃_0 = C_α k_0 = conj(z)·(α − α(0))`.
pub fn kernel_k0_tilde(alpha: &BlaschkeProduct, grid: GridParams) -> Result<LaurentFunction> {
    nonconstant(alpha)?;
    let a = alpha.to_grid(grid)?;
    let c = LaurentFunction::constant(grid, alpha.value_at_zero());
    Ok(a.sub(&c)?.shift(-1))
}

fn nonconstant(b: &BlaschkeProduct) -> Result<()> {
    if b.is_constant() {
        return Err(Error::Parameter("inner function must be nonconstant".into()));
    }
    Ok(())
}

/// Matrix of the compression `A_φ^θ f = P_θ(φ f)` in a Takenaka–Malmquist
/// basis.
#[derive(Clone, Debug)]
pub struct TtoMatrix {
    pub theta: BlaschkeProduct,
    pub symbol: LaurentFunction,
    /// `entries[(i, j)] = ⟨φ e_j, e_i⟩`.
    pub entries: DMatrix<C64>,
}

pub fn tto_matrix(phi: &LaurentFunction, basis: &ModelSpaceBasis) -> Result<TtoMatrix> {
    let d = basis.dim();
    let mut entries = DMatrix::zeros(d, d);
    for (j, ej) in basis.functions().iter().enumerate() {
        let image = phi.multiply(ej)?;
        for (i, ei) in basis.functions().iter().enumerate() {
            entries[(i, j)] = image.inner_product(ei)?;
        }
    }
    Ok(TtoMatrix {
        theta: basis.theta().clone(),
        symbol: phi.clone(),
        entries,
    })
}

/// The truncated shift `A_z^θ`.
pub fn truncated_shift(basis: &ModelSpaceBasis) -> Result<TtoMatrix> {
    tto_matrix(&LaurentFunction::monomial(basis.grid(), 1)?, basis)
}

/// An antilinear map from the span of a source family into a model space,
/// together with how far the images fall outside that model space.
#[derive(Clone, Debug)]
pub struct RestrictedAntilinear {
    /// `matrix[(i, k)] = ⟨A s_k, e_i⟩`, acting as `v ↦ matrix·conj(v)`.
    pub matrix: DMatrix<C64>,
    /// `max_k ‖A s_k − P_dst A s_k‖`.
    pub leakage: f64,
}

impl RestrictedAntilinear {
    pub fn contained(&self, tol: f64) -> Verdict {
        Verdict::below(self.leakage, tol)
    }
}

/// Restricts an antilinear action given as a function on `L²`.
pub fn restrict_with(
    src: &[LaurentFunction],
    dst: &ModelSpaceBasis,
    apply: impl Fn(&LaurentFunction) -> Result<LaurentFunction>,
) -> Result<RestrictedAntilinear> {
    let mut matrix = DMatrix::zeros(dst.dim(), src.len());
    let mut leakage: f64 = 0.0;
    for (k, s) in src.iter().enumerate() {
        let image = apply(s)?;
        let coords = dst.coordinates(&image)?;
        for (i, c) in coords.iter().enumerate() {
            matrix[(i, k)] = *c;
        }
        leakage = leakage.max(image.distance(&dst.combine(&coords)?)?);
    }
    Ok(RestrictedAntilinear { matrix, leakage })
}

/// Restricts an operator-window antilinear map `A` to `src → dst`.
pub fn restrict_antilinear(
    a: &AntilinearMap,
    src: &[LaurentFunction],
    dst: &ModelSpaceBasis,
) -> Result<RestrictedAntilinear> {
    restrict_with(src, dst, |f| a.apply_fn(f))
}

/// Distance of `f` from `θH²`: the norm of the `n < 0` part of `conj(θ)·f`.
pub fn membership_theta_h2(f: &LaurentFunction, theta: &BlaschkeProduct, tol: f64) -> Result<Verdict> {
    let t = theta.to_grid(f.grid())?;
    let residual = t.conj_j().multiply(f)?.negative_part_norm();
    Ok(Verdict::below(residual, tol))
}

/// Composition rules for coordinate matrices. An antilinear matrix `R` acts
/// as `v ↦ R·conj(v)`.
pub mod algebra {
    use super::*;

    /// `A ∘ B` for antilinear `A`, `B`: the linear matrix `A·conj(B)`.
    pub fn anti_anti(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
        a * b.map(|z| z.conj())
    }

    /// `A ∘ L` for antilinear `A`, linear `L`: the antilinear matrix `A·conj(L)`.
    pub fn anti_lin(a: &DMatrix<C64>, l: &DMatrix<C64>) -> DMatrix<C64> {
        a * l.map(|z| z.conj())
    }

    /// `L ∘ A`: the antilinear matrix `L·A`.
    pub fn lin_anti(l: &DMatrix<C64>, a: &DMatrix<C64>) -> DMatrix<C64> {
        l * a
    }

    pub fn max_abs(m: &DMatrix<C64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |A·Aᴴ − I|`, the unitarity defect of a square matrix.
    pub fn unitarity_residual(m: &DMatrix<C64>) -> f64 {
        let d = m.nrows();
        let lhs = m.adjoint() * m - DMatrix::<C64>::identity(d, d);
        let rhs = m * m.adjoint() - DMatrix::<C64>::identity(d, d);
        max_abs(&lhs).max(max_abs(&rhs))
    }

    /// Involution and isometry defects of an antilinear coordinate matrix:
    /// `R·conj(R) = I` and `Rᴴ·R = I`.
    pub fn conjugation_residual(r: &DMatrix<C64>) -> f64 {
        let d = r.nrows();
        let inv = anti_anti(r, r) - DMatrix::<C64>::identity(d, d);
        let iso = r.adjoint() * r - DMatrix::<C64>::identity(d, d);
        max_abs(&inv).max(max_abs(&iso))
    }
}

#[cfg(test)]
mod tests {
    use super::algebra::*;
    use super::*;
    use crate::operators::{build_c_theta, build_jstar};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn grid() -> GridParams {
        GridParams::new(1024, 256).unwrap()
    }

    fn bz(zeros: &[C64]) -> BlaschkeProduct {
        BlaschkeProduct::from_zeros(zeros.to_vec()).unwrap()
    }

    #[test]
    fn monomial_model_space() {
        let g = grid();
        let b = ModelSpaceBasis::new(&BlaschkeProduct::z_power(3), g).unwrap();
        for (k, e) in b.functions().iter().enumerate() {
            let want = LaurentFunction::monomial(g, k as i64).unwrap();
            assert!(e.max_coeff_distance(&want).unwrap() < 1e-14);
        }
    }

    #[test]
    fn single_factor_basis() {
        let g = grid();
        let b = ModelSpaceBasis::new(&bz(&[c(0.5, 0.0)]), g).unwrap();
        let want = LaurentFunction::from_fn(g, |z| c(0.75f64.sqrt(), 0.0) / (c(1.0, 0.0) - z * 0.5)).unwrap();
        assert!(b.functions()[0].max_coeff_distance(&want).unwrap() < 1e-14);
        assert!(ModelSpaceBasis::new(&BlaschkeProduct::one(), g).is_err());
    }

    #[test]
    fn basis_invariants_with_repeated_zeros() {
        let g = grid();
        for theta in [
            bz(&[c(0.0, 0.5), c(0.3, 0.2)]),
            bz(&[c(0.4, -0.3), c(0.4, -0.3), c(0.4, -0.3), c(-0.6, 0.1)]),
        ] {
            let b = ModelSpaceBasis::new(&theta, g).unwrap();
            assert!(b.gram_residual().unwrap() < 1e-10);
            assert!(b.orthogonality_residual().unwrap() < 1e-10);
        }
    }

    #[test]
    fn projection_examples() {
        let g = grid();
        let b = ModelSpaceBasis::new(&BlaschkeProduct::z_power(2), g).unwrap();
        let f = LaurentFunction::from_terms(g, &[(0, c(1.0, 0.0)), (1, c(1.0, 0.0)), (2, c(1.0, 0.0))]).unwrap();
        let want = LaurentFunction::from_terms(g, &[(0, c(1.0, 0.0)), (1, c(1.0, 0.0))]).unwrap();
        assert!(b.project(&f).unwrap().max_coeff_distance(&want).unwrap() < 1e-14);

        let theta = bz(&[c(0.2, 0.3), c(-0.5, 0.1)]);
        let b = ModelSpaceBasis::new(&theta, g).unwrap();
        let analytic = LaurentFunction::from_terms(g, &[(0, c(0.3, -1.0)), (2, c(1.0, 0.5)), (5, c(-0.2, 0.0))]).unwrap();
        let t = theta.to_grid(g).unwrap();
        assert!(b.project(&t.multiply(&analytic).unwrap()).unwrap().norm() < 1e-10);
        let e1 = &b.functions()[1];
        assert!(b.project(e1).unwrap().distance(e1).unwrap() < 1e-12);
        let anti = LaurentFunction::from_terms(g, &[(-1, c(1.0, 0.0)), (-3, c(0.0, 1.0))]).unwrap();
        assert!(b.project(&anti).unwrap().norm() < 1e-12);
    }

    #[test]
    fn projection_matches_algebraic_formula() {
        let g = grid();
        let theta = bz(&[c(0.2, 0.3), c(-0.5, 0.1), c(0.0, -0.4)]);
        let b = ModelSpaceBasis::new(&theta, g).unwrap();
        let f = LaurentFunction::from_terms(g, &[(-2, c(1.0, 0.0)), (0, c(0.5, 0.5)), (1, c(-1.0, 0.2)), (4, c(0.0, 2.0))]).unwrap();
        let p1 = b.project(&f).unwrap();
        let p2 = algebraic_projection(&f, &theta).unwrap();
        assert!(p1.distance(&p2).unwrap() < 1e-10);
    }

    #[test]
    fn kernels() {
        let g = grid();
        let one = LaurentFunction::constant(g, c(1.0, 0.0));
        let with_origin = bz(&[c(0.0, 0.0), c(0.3, 0.1)]);
        assert!(kernel_k0(&with_origin, g).unwrap().distance(&one).unwrap() < 1e-14);

        let z = LaurentFunction::monomial(g, 1).unwrap();
        let kt = kernel_k0_tilde(&BlaschkeProduct::z_power(2), g).unwrap();
        assert!(kt.distance(&z).unwrap() < 1e-14);

        let half = bz(&[c(0.5, 0.0)]);
        let bh = half.to_grid(g).unwrap();
        let want = one.sub(&bh.scale(c(0.5, 0.0))).unwrap();
        assert!(kernel_k0(&half, g).unwrap().distance(&want).unwrap() < 1e-14);

        let alpha = bz(&[c(0.3, -0.2), c(-0.1, 0.6)]);
        let basis = ModelSpaceBasis::new(&alpha, g).unwrap();
        let k0 = kernel_k0(&alpha, g).unwrap();
        let kt = kernel_k0_tilde(&alpha, g).unwrap();
        assert!(basis.leakage(&k0).unwrap() < 1e-10);
        assert!(basis.leakage(&kt).unwrap() < 1e-10);
        let ca = alpha.to_grid(g).unwrap().shift(-1).multiply(&k0.conj_j()).unwrap();
        assert!(ca.distance(&kt).unwrap() < 1e-10);
    }

    #[test]
    fn tto_examples() {
        let g = grid();
        let b = ModelSpaceBasis::new(&BlaschkeProduct::z_power(3), g).unwrap();
        let s = truncated_shift(&b).unwrap();
        let mut want = DMatrix::<C64>::zeros(3, 3);
        want[(1, 0)] = c(1.0, 0.0);
        want[(2, 1)] = c(1.0, 0.0);
        assert!(max_abs(&(s.entries - want)) < 1e-14);

        let theta = bz(&[c(0.1, 0.5), c(-0.3, -0.3)]);
        let b = ModelSpaceBasis::new(&theta, g).unwrap();
        let id = tto_matrix(&LaurentFunction::constant(g, c(1.0, 0.0)), &b).unwrap();
        assert!(max_abs(&(id.entries - DMatrix::identity(2, 2))) < 1e-12);
    }

    #[test]
    fn conjugated_shift_on_z_squared() {
        let g = grid();
        let theta = BlaschkeProduct::z_power(2);
        let b = ModelSpaceBasis::new(&theta, g).unwrap();
        let ct = build_c_theta(&theta, g, 32).unwrap();
        let r = restrict_antilinear(&ct, b.functions(), &b).unwrap();
        assert!(r.leakage < 1e-14);
        let a = truncated_shift(&b).unwrap().entries;
        let cac = anti_anti(&anti_lin(&r.matrix, &a), &r.matrix);
        let mut want = DMatrix::<C64>::zeros(2, 2);
        want[(0, 1)] = c(1.0, 0.0);
        assert!(max_abs(&(cac - want)) < 1e-14);
    }

    #[test]
    fn restriction_leakage() {
        let g = grid();
        let alpha = bz(&[c(0.3, 0.4), c(-0.2, 0.1)]);
        let ka = ModelSpaceBasis::new(&alpha, g).unwrap();
        let kas = ModelSpaceBasis::new(&alpha.sharp(), g).unwrap();
        let js = build_jstar(128);
        assert!(restrict_antilinear(&js, ka.functions(), &kas).unwrap().leakage < 1e-10);
        assert!(restrict_antilinear(&js, ka.functions(), &ka).unwrap().leakage > 1e-2);

        let ct = build_c_theta(&alpha, g, 128).unwrap();
        let r = restrict_antilinear(&ct, ka.functions(), &ka).unwrap();
        assert!(r.leakage < 1e-10);
        assert!(conjugation_residual(&r.matrix) < 1e-10);

        let via_fn = restrict_with(ka.functions(), &kas, |f| Ok(f.sharp())).unwrap();
        assert!(via_fn.leakage < 1e-10);
    }

    #[test]
    fn theta_h2_membership() {
        let g = grid();
        let theta = bz(&[c(0.3, 0.4), c(-0.2, 0.1)]);
        let t = theta.to_grid(g).unwrap();
        assert!(membership_theta_h2(&t.shift(3), &theta, 1e-10).unwrap().holds);
        let one = LaurentFunction::constant(g, c(1.0, 0.0));
        let v = membership_theta_h2(&one, &BlaschkeProduct::z_power(1), 1e-10).unwrap();
        assert!(!v.holds);
        assert!((v.residual - 1.0).abs() < 1e-14);
    }
}
