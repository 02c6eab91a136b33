//! Executable forms of the structural results on conjugations, shift-invariant
//! subspaces, model spaces and truncated Toeplitz operators.
//!
//! Every routine here evaluates the two sides of a statement independently —
//! an operator-side residual and an inner-function-side predicate — and
//! reports whether they agree. Nothing derives one side from the other.
//! Negative results ("no conjugation of this kind exists") are covered by
//! falsification demonstrations over seeded candidate families; their
//! reports carry a `floor_ratio` residual, `demo_floor / smallest observed
//! defect`, which must stay below 1.
//!
//! Operators on `L²` are applied on the grid (`C_θ f = θ·conj(z)·conj(f)`,
//! `J* f = f#`), operators on a model space as coordinate matrices in its
//! Takenaka–Malmquist basis; antilinear coordinate matrices act as
//! `v ↦ R·conj(v)`.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::blaschke::{BlaschkeProduct, PAIRING_TOL};
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::fourier::{GridParams, LaurentFunction, C64};
use crate::modelspace::algebra::{anti_anti, anti_lin, conjugation_residual, lin_anti, max_abs, unitarity_residual};
use crate::modelspace::{
    membership_theta_h2, multiplied_basis, restrict_with, truncated_shift, tto_matrix, ModelSpaceBasis,
};
use crate::operators::{build_m, build_mpsi_j, recover_symbol, AntilinearMap, ConjugationKind};

/// Probes are supported on `|n| ≤ PROBE_SUPPORT`.
pub const PROBE_SUPPORT: usize = 6;
/// Extra room left between the widest support a window has to hold and its edge.
pub const WINDOW_MARGIN: usize = 8;
/// Coefficients below this are treated as outside a symbol's band.
pub const SYMBOL_TAIL: f64 = 1e-14;
/// Shift-invariant subspaces are probed with `α·z^k` for `k = 0..=MEMBERSHIP_DEPTH`.
pub const MEMBERSHIP_DEPTH: i64 = 4;
/// Depth used by the randomized demonstration against `M_z`-conjugations
/// between shift-invariant subspaces.
pub const DEMO_DEPTH: i64 = 12;

/// Grid and tolerance ladder shared by every check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub grid: GridParams,
    /// Identities that hold by construction.
    pub tol_construct: f64,
    /// Identities between composed operators.
    pub tol_composed: f64,
    /// Smallest defect a falsification demonstration must exhibit.
    pub demo_floor: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            grid: GridParams::default(),
            tol_construct: 1e-10,
            tol_composed: 1e-9,
            demo_floor: 1e-3,
        }
    }
}

/// Outcome of one check. `pass` holds exactly when every residual is finite
/// and below `tolerance`; diagnostics are informational only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    pub params: Value,
    pub residuals: BTreeMap<String, f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub diagnostics: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckReport {
    pub fn new(check_id: impl Into<String>, params: Value, tolerance: f64) -> Self {
        Self {
            check_id: check_id.into(),
            params,
            residuals: BTreeMap::new(),
            tolerance,
            pass: false,
            diagnostics: BTreeMap::new(),
            error: None,
        }
    }

    /// A report for a check that could not be evaluated.
    pub fn failed(check_id: impl Into<String>, params: Value, tolerance: f64, err: &Error) -> Self {
        let mut r = Self::new(check_id, params, tolerance);
        r.error = Some(err.to_string());
        r
    }

    /// Records a residual; repeated names keep the largest value.
    pub fn residual(&mut self, name: &str, value: f64) {
        let v = if value.is_nan() { f64::MAX } else { value.min(f64::MAX) };
        let e = self.residuals.entry(name.to_string()).or_insert(0.0);
        *e = e.max(v);
    }

    /// Records a count of disagreements; repeated names add up.
    pub fn count(&mut self, name: &str, n: usize) {
        *self.residuals.entry(name.to_string()).or_insert(0.0) += n as f64;
    }

    /// Records one boolean disagreement as a count of 0 or 1.
    pub fn flag(&mut self, name: &str, failed: bool) {
        self.count(name, failed as usize);
    }

    pub fn diagnostic(&mut self, name: &str, value: f64) {
        self.diagnostics.insert(name.to_string(), value);
    }

    pub fn diagnostic_max(&mut self, name: &str, value: f64) {
        let e = self.diagnostics.entry(name.to_string()).or_insert(f64::NEG_INFINITY);
        *e = e.max(value);
    }

    pub fn diagnostic_min(&mut self, name: &str, value: f64) {
        let e = self.diagnostics.entry(name.to_string()).or_insert(f64::INFINITY);
        *e = e.min(value);
    }

    /// Folds another report's residuals in as maxima / sums.
    pub fn absorb(&mut self, other: &CheckReport) {
        for (k, v) in &other.residuals {
            self.residual(k, *v);
        }
    }

    pub fn finish(mut self) -> Self {
        self.diagnostics.retain(|_, v| v.is_finite());
        self.pass = self.error.is_none()
            && !self.residuals.is_empty()
            && self.residuals.values().all(|v| v.is_finite() && *v < self.tolerance);
        self
    }
}

/// `demo_floor / smallest defect`: below 1 iff every defect clears the floor.
pub fn floor_ratio(floor: f64, smallest: f64) -> f64 {
    if smallest > 0.0 {
        floor / smallest
    } else {
        f64::MAX
    }
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

fn cpair(z: C64) -> Value {
    json!([z.re, z.im])
}

fn nonconstant(b: &BlaschkeProduct, name: &str) -> Result<()> {
    if b.is_constant() {
        return Err(Error::Parameter(format!("{name} must be a nonconstant inner function")));
    }
    Ok(())
}

/// Coefficient band of a grid symbol, ignoring coefficients below
/// [`SYMBOL_TAIL`].
pub fn symbol_band(f: &LaurentFunction) -> usize {
    f.effective_band(SYMBOL_TAIL)
}

/// Half-width of an operator window that holds probes plus `span` further
/// coefficients.
pub fn window(s: &Settings, span: usize) -> Result<usize> {
    let half = PROBE_SUPPORT + span + WINDOW_MARGIN;
    if half > s.grid.band() {
        return Err(Error::BandTooSmall {
            band: s.grid.band(),
            required_band: half,
        });
    }
    Ok(half)
}

/// `C_θ f = θ·conj(z)·conj(f)` on the grid, with `θ` given by its samples.
pub fn apply_c(theta: &LaurentFunction, f: &LaurentFunction) -> Result<LaurentFunction> {
    Ok(theta.multiply(&f.conj_j())?.shift(-1))
}

/// `C_β J* C_α f` on the grid.
pub fn apply_c_jstar_c(beta: &LaurentFunction, alpha: &LaurentFunction, f: &LaurentFunction) -> Result<LaurentFunction> {
    apply_c(beta, &apply_c(alpha, f)?.sharp())
}

/// `max_j |f(z_j) − g(z_j)|`.
pub fn sup_distance(f: &LaurentFunction, g: &LaurentFunction) -> Result<f64> {
    Ok(f.sub(g)?.samples().iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// `B·B#`.
pub fn sharp_product(b: &BlaschkeProduct) -> BlaschkeProduct {
    b.multiply(&b.sharp())
}

/// `max_j |αα#(z_j) − θθ#(z_j)|`.
pub fn sharp_product_residual(alpha: &BlaschkeProduct, theta: &BlaschkeProduct, grid: GridParams) -> Result<f64> {
    sup_distance(&sharp_product(alpha).to_grid(grid)?, &sharp_product(theta).to_grid(grid)?)
}

/// Involution and isometry residuals of a grid-level antilinear map over
/// consecutive probe pairs.
pub fn grid_conjugation_residuals(
    probes: &[LaurentFunction],
    apply: impl Fn(&LaurentFunction) -> Result<LaurentFunction>,
) -> Result<(f64, f64)> {
    let images: Vec<LaurentFunction> = probes.iter().map(&apply).collect::<Result<_>>()?;
    let mut involution: f64 = 0.0;
    for (p, img) in probes.iter().zip(&images) {
        involution = involution.max(apply(img)?.distance(p)?);
    }
    let mut isometry: f64 = 0.0;
    for i in 0..probes.len().saturating_sub(1) {
        let lhs = images[i].inner_product(&images[i + 1])?;
        let rhs = probes[i + 1].inner_product(&probes[i])?;
        isometry = isometry.max((lhs - rhs).norm());
    }
    Ok((involution, isometry))
}

fn probes(seed: u64, stream: &str, grid: GridParams, count: usize) -> Result<Vec<LaurentFunction>> {
    let mut c = Corpus::new(seed, stream);
    (0..count).map(|_| c.probe(grid, PROBE_SUPPORT)).collect()
}

// ---------------------------------------------------------------------------
// M_z-conjugations and model spaces
// ---------------------------------------------------------------------------

/// Both sides of the containment criterion for `C_β` on `γK_α`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContainmentVerdict {
    /// `max_k ‖C_β(γe_k) − P_θ C_β(γe_k)‖`.
    pub leakage: f64,
    pub contained: bool,
    /// `γα ≤ β ≤ γθ` and `α ≤ θ`, from the zero multisets.
    pub divisible: bool,
}

/// Evaluates `C_β(γK_α) ⊂ K_θ` by leakage and, separately, the divisibility
/// chain `γα ≤ β ≤ γθ`, `α ≤ θ`.
pub fn mz_conjugation_containment(
    s: &Settings,
    beta: &BlaschkeProduct,
    gamma: &BlaschkeProduct,
    alpha: &BlaschkeProduct,
    theta: &BlaschkeProduct,
) -> Result<ContainmentVerdict> {
    nonconstant(alpha, "α")?;
    nonconstant(theta, "θ")?;
    let src = multiplied_basis(&ModelSpaceBasis::new(alpha, s.grid)?, gamma)?;
    let dst = ModelSpaceBasis::new(theta, s.grid)?;
    let b = beta.to_grid(s.grid)?;
    let leakage = restrict_with(&src, &dst, |f| apply_c(&b, f))?.leakage;
    let ga = gamma.multiply(alpha);
    let divisible = ga.divides(beta) && beta.divides(&gamma.multiply(theta)) && alpha.divides(theta);
    Ok(ContainmentVerdict {
        leakage,
        contained: leakage < s.tol_composed,
        divisible,
    })
}

pub fn verify_mz_conjugation_containment(
    s: &Settings,
    beta: &BlaschkeProduct,
    gamma: &BlaschkeProduct,
    alpha: &BlaschkeProduct,
    theta: &BlaschkeProduct,
) -> Result<CheckReport> {
    let v = mz_conjugation_containment(s, beta, gamma, alpha, theta)?;
    let params = json!({"beta": to_json(beta), "gamma": to_json(gamma), "alpha": to_json(alpha), "theta": to_json(theta)});
    let mut r = CheckReport::new("conj.containment_equivalence", params, s.tol_composed);
    r.flag("verdict_disagreement", v.contained != v.divisible);
    r.diagnostic("leakage", v.leakage);
    r.diagnostic("divisible", v.divisible as u8 as f64);
    Ok(r.finish())
}

/// `M_z`-commuting conjugations carrying `γK_α` into `K_θ`: builds
/// `C = J*·M_φ` with `φ = (β/(γα))·conj(γ)` under `γα ≤ β ≤ γθ#`, checks the
/// containment, and compares the operator's involution defect with the
/// symmetry of `φ`. For constant `γ` it also checks the rigidity: `C` is a
/// conjugation only when `β/α` is constant.
pub fn verify_commuting_containment(
    s: &Settings,
    alpha: &BlaschkeProduct,
    theta: &BlaschkeProduct,
    beta: &BlaschkeProduct,
    gamma: &BlaschkeProduct,
) -> Result<CheckReport> {
    nonconstant(alpha, "α")?;
    nonconstant(theta, "θ")?;
    let ga = gamma.multiply(alpha);
    if !ga.divides(beta) || !beta.divides(&gamma.multiply(&theta.sharp())) {
        return Err(Error::Parameter("need γα ≤ β ≤ γθ#".into()));
    }
    let q = beta
        .divide(&ga)
        .ok_or_else(|| Error::Invariant("γα divides β but the quotient failed".into()))?;
    let g = s.grid;
    let phi = q.to_grid(g)?.multiply(&gamma.to_grid(g)?.conj_j())?;

    let src = multiplied_basis(&ModelSpaceBasis::new(alpha, g)?, gamma)?;
    let dst = ModelSpaceBasis::new(theta, g)?;
    let leakage = restrict_with(&src, &dst, |f| Ok(phi.multiply(f)?.sharp()))?.leakage;

    // J*·M_φ acts as v ↦ conj(M_φ v), i.e. the antilinear matrix conj(M_φ).
    let half = window(s, 2 * symbol_band(&phi))?;
    let m = build_m(&phi, half)?;
    let c = AntilinearMap::from_matrix(half, m.matrix().map(|z| z.conj()))?;
    let involution = c.involution_residual(PROBE_SUPPORT)?;
    let is_conjugation = involution < s.tol_composed;
    let symmetric = phi.is_symmetric(s.tol_composed);

    let params = json!({"alpha": to_json(alpha), "theta": to_json(theta), "beta": to_json(beta), "gamma": to_json(gamma)});
    let mut r = CheckReport::new("conj.commuting_containment_rigidity", params, s.tol_composed);
    r.residual("containment_leakage", leakage);
    r.flag("conjugation_vs_symmetry", is_conjugation != symmetric.holds);
    if gamma.is_constant() {
        r.flag("rigidity", is_conjugation != q.is_constant());
    }
    r.diagnostic("involution", involution);
    r.diagnostic("symmetry", symmetric.residual);
    r.diagnostic("quotient_degree", q.degree() as f64);
    Ok(r.finish())
}

// ---------------------------------------------------------------------------
// Conjugations between shift-invariant subspaces
// ---------------------------------------------------------------------------

/// The three faces of the involution criterion for `C_θ J* C_α`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvolutionFaces {
    /// `max ‖C²f − f‖` over probes.
    pub involution: f64,
    /// `max_j |αα#(z_j) − θθ#(z_j)|`.
    pub sharp_products: f64,
    /// Symmetry defect of `θ·conj(α#)`.
    pub symmetry: f64,
}

impl InvolutionFaces {
    pub fn agree(&self, tol: f64) -> bool {
        let a = self.involution < tol;
        a == (self.sharp_products < tol) && a == (self.symmetry < tol)
    }
}

pub fn involution_faces(s: &Settings, alpha: &BlaschkeProduct, theta: &BlaschkeProduct, seed: u64) -> Result<InvolutionFaces> {
    let g = s.grid;
    let a = alpha.to_grid(g)?;
    let t = theta.to_grid(g)?;
    let ps = probes(seed, "involution-probes", g, 4)?;
    let (involution, _) = grid_conjugation_residuals(&ps, |f| apply_c_jstar_c(&t, &a, f))?;
    let sharp_products = sharp_product_residual(alpha, theta, g)?;
    let symmetry = t.multiply(&alpha.sharp().to_grid(g)?.conj_j())?.is_symmetric(s.tol_composed).residual;
    Ok(InvolutionFaces {
        involution,
        sharp_products,
        symmetry,
    })
}

pub fn involution_criterion(s: &Settings, alpha: &BlaschkeProduct, theta: &BlaschkeProduct, seed: u64) -> Result<CheckReport> {
    let f = involution_faces(s, alpha, theta, seed)?;
    let params = json!({"alpha": to_json(alpha), "theta": to_json(theta), "seed": seed});
    let mut r = CheckReport::new("conj.involution_criterion", params, s.tol_composed);
    r.flag("disagreement", !f.agree(s.tol_composed));
    r.diagnostic("involution", f.involution);
    r.diagnostic("sharp_products", f.sharp_products);
    r.diagnostic("symmetry", f.symmetry);
    Ok(r.finish())
}

/// The inner function `β` with `θ ≤ β` and `ββ# = αα#`:
/// `δ = α∧θ`, `α₁ = α/δ`, `θ₁ = θ/δ`, `u = α₁#/θ₁`, `β = θu`.
pub fn construct_beta(alpha: &BlaschkeProduct, theta: &BlaschkeProduct) -> Result<BlaschkeProduct> {
    if !sharp_product(theta).divides(&sharp_product(alpha)) {
        return Err(Error::NotConstructible("θθ# does not divide αα#".into()));
    }
    let delta = alpha.gcd(theta);
    let a1 = alpha
        .divide(&delta)
        .ok_or_else(|| Error::Invariant("α ∧ θ does not divide α".into()))?;
    let t1 = theta
        .divide(&delta)
        .ok_or_else(|| Error::Invariant("α ∧ θ does not divide θ".into()))?;
    let u = a1
        .sharp()
        .divide(&t1)
        .ok_or_else(|| Error::Invariant("θ₁ does not divide α₁#".into()))?;
    Ok(theta.multiply(&u))
}

/// All `β = u·v#` over splits `α = u·v`, one representative (with `λ = 1`)
/// per class up to a unimodular constant, in canonical order.
pub fn enumerate_betas(alpha: &BlaschkeProduct) -> Result<Vec<BlaschkeProduct>> {
    nonconstant(alpha, "α")?;
    let mut groups: Vec<(C64, usize)> = Vec::new();
    for &a in alpha.zeros() {
        match groups.iter_mut().find(|(b, _)| (a - b).norm() < PAIRING_TOL) {
            Some(g) => g.1 += 1,
            None => groups.push((a, 1)),
        }
    }
    let mut out: Vec<BlaschkeProduct> = Vec::new();
    // counts[i] copies of zero i go to u, the rest to v (and so appear
    // conjugated in v#).
    let mut counts = vec![0usize; groups.len()];
    loop {
        let mut zeros = Vec::with_capacity(alpha.degree());
        for (&(a, m), &k) in groups.iter().zip(&counts) {
            zeros.extend(std::iter::repeat(a).take(k));
            zeros.extend(std::iter::repeat(a.conj()).take(m - k));
        }
        let beta = BlaschkeProduct::from_zeros(zeros)?;
        if !out.iter().any(|b| b.equal_up_to_unimodular(&beta).is_some()) {
            out.push(beta);
        }
        let mut i = 0;
        loop {
            if i == groups.len() {
                out.sort_by(|x, y| canonical_cmp(x, y));
                return Ok(out);
            }
            if counts[i] < groups[i].1 {
                counts[i] += 1;
                break;
            }
            counts[i] = 0;
            i += 1;
        }
    }
}

fn canonical_cmp(x: &BlaschkeProduct, y: &BlaschkeProduct) -> std::cmp::Ordering {
    x.zeros()
        .iter()
        .zip(y.zeros())
        .map(|(a, b)| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)))
        .find(|o| o.is_ne())
        .unwrap_or(x.degree().cmp(&y.degree()))
}

/// Distance of `C(α·z^k)` from `θH²`, maximized over `k = 0..=depth`, for
/// the grid map `C = C_β J* C_α`.
fn max_membership(
    beta: &LaurentFunction,
    alpha_map: &LaurentFunction,
    source: &LaurentFunction,
    target: &BlaschkeProduct,
    depth: i64,
    tol: f64,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in 0..=depth {
        let img = apply_c_jstar_c(beta, alpha_map, &source.shift(k))?;
        worst = worst.max(membership_theta_h2(&img, target, tol)?.residual);
    }
    Ok(worst)
}

/// `M_z`-commuting conjugations from `αH²` into `θH²`. When `θθ# ≤ αα#`,
/// builds `β` and `C = C_β J* C_α` and checks that `C` is a commuting
/// conjugation with `C(αH²) = βH² ⊂ θH²`. Otherwise runs a seeded family of
/// commuting conjugations and requires every one of them to miss `θH²` by
/// at least the demonstration floor.
pub fn verify_shift_invariant_map(s: &Settings, alpha: &BlaschkeProduct, theta: &BlaschkeProduct, seed: u64) -> Result<CheckReport> {
    let g = s.grid;
    let admissible = sharp_product(theta).divides(&sharp_product(alpha));
    let params = json!({"alpha": to_json(alpha), "theta": to_json(theta), "seed": seed, "admissible": admissible});
    let a = alpha.to_grid(g)?;
    if admissible {
        let beta = construct_beta(alpha, theta)?;
        let b = beta.to_grid(g)?;
        let mut r = CheckReport::new("conj.shift_invariant_map", params, s.tol_composed);
        let ps = probes(seed, "shift-invariant-probes", g, 6)?;
        let map = |f: &LaurentFunction| apply_c_jstar_c(&b, &a, f);
        let (involution, isometry) = grid_conjugation_residuals(&ps, map)?;
        r.residual("involution", involution);
        r.residual("isometry", isometry);
        for p in &ps {
            let lhs = map(p)?.shift(1);
            let rhs = map(&p.shift(1))?;
            r.residual("commutes_with_z", lhs.distance(&rhs)?);
        }
        r.residual("maps_into_theta_h2", max_membership(&b, &a, &a, theta, MEMBERSHIP_DEPTH, s.tol_composed)?);
        r.residual("maps_into_beta_h2", max_membership(&b, &a, &a, &beta, MEMBERSHIP_DEPTH, s.tol_composed)?);
        r.residual("beta_h2_back_into_alpha_h2", max_membership(&b, &a, &b, alpha, MEMBERSHIP_DEPTH, s.tol_composed)?);
        r.flag("theta_divides_beta", !theta.divides(&beta));
        r.flag("degree", beta.degree() != alpha.degree());
        r.residual("beta_sharp_product", sharp_product_residual(&beta, alpha, g)?);
        r.diagnostic("beta_degree", beta.degree() as f64);
        let mut r = r.finish();
        r.params["beta"] = to_json(&beta);
        return Ok(r);
    }

    let mut r = CheckReport::new("conj.shift_invariant_map", params, 1.0);
    let mut family: Vec<(BlaschkeProduct, BlaschkeProduct)> = vec![(BlaschkeProduct::one(), BlaschkeProduct::one())];
    for beta in enumerate_betas(alpha)? {
        family.push((alpha.clone(), beta));
    }
    let mut corpus = Corpus::new(seed, "shift-invariant-family");
    for _ in 0..4 {
        let mut avoid: Vec<C64> = alpha.zeros().iter().chain(theta.zeros()).copied().collect();
        let d = corpus.degree(1, 3);
        let other = corpus.blaschke(d, &mut avoid);
        let betas = enumerate_betas(&other)?;
        let pick = corpus.degree(0, betas.len() - 1);
        family.push((other, betas[pick].clone()));
    }
    let mut smallest = f64::INFINITY;
    for (src, beta) in &family {
        let defect = max_membership(&beta.to_grid(g)?, &src.to_grid(g)?, &a, theta, MEMBERSHIP_DEPTH, s.tol_composed)?;
        smallest = smallest.min(defect);
    }
    r.residual("floor_ratio", floor_ratio(s.demo_floor, smallest));
    r.diagnostic("family_size", family.len() as f64);
    r.diagnostic("smallest_defect", smallest);
    Ok(r.finish())
}

/// The pair `α = b_a b_b`, `θ = b_a b_{conj b}`, after validating
/// `a ≠ b`, `a ∉ ℝ`, `b ∉ ℝ`.
pub fn swap_pair_products(a: C64, b: C64) -> Result<(BlaschkeProduct, BlaschkeProduct)> {
    if (a - b).norm() < PAIRING_TOL {
        return Err(Error::Parameter("need a ≠ b".into()));
    }
    if a.im.abs() < PAIRING_TOL {
        return Err(Error::Parameter("need a ≠ conj(a), i.e. a not real".into()));
    }
    if b.im.abs() < PAIRING_TOL {
        return Err(Error::Parameter("need b ≠ conj(b), i.e. b not real".into()));
    }
    Ok((
        BlaschkeProduct::from_zeros(vec![a, b])?,
        BlaschkeProduct::from_zeros(vec![a, b.conj()])?,
    ))
}

/// Swapping one zero for its conjugate: `αα# = θθ#` and a commuting
/// conjugation `αH² → θH²` exists, yet none of `α ≤ θ#`, `θ ≤ α#`,
/// `α ≤ θ`, `θ ≤ α` holds, so no conjugation of either kind carries `K_α`
/// into `K_θ`.
pub fn swap_pair(s: &Settings, a: C64, b: C64, seed: u64) -> Result<CheckReport> {
    let (alpha, theta) = swap_pair_products(a, b)?;
    let params = json!({"a": cpair(a), "b": cpair(b), "alpha": to_json(&alpha), "theta": to_json(&theta)});
    let mut r = CheckReport::new("conj.swap_pair_example", params, s.tol_construct);
    r.residual("sharp_products", sharp_product_residual(&alpha, &theta, s.grid)?);
    r.flag("alpha_divides_theta_sharp", alpha.divides(&theta.sharp()));
    r.flag("theta_divides_alpha_sharp", theta.divides(&alpha.sharp()));
    r.flag("alpha_divides_theta", alpha.divides(&theta));
    r.flag("theta_divides_alpha", theta.divides(&alpha));
    let map = verify_shift_invariant_map(s, &alpha, &theta, seed)?;
    r.flag("shift_invariant_map", !map.pass);
    r.diagnostic(
        "shift_invariant_map_worst",
        map.residuals.values().copied().fold(0.0, f64::max),
    );
    // λJ* is the only candidate a commuting conjugation K_α → K_θ could be;
    // it lands in K_{α#} instead.
    let ka = ModelSpaceBasis::new(&alpha, s.grid)?;
    let kt = ModelSpaceBasis::new(&theta, s.grid)?;
    let leak = restrict_with(ka.functions(), &kt, |f| Ok(f.sharp()))?.leakage;
    r.diagnostic("jstar_leakage_into_k_theta", leak);
    Ok(r.finish())
}

/// Falsification demonstration: random unimodular `ψ`, `C = M_ψ J`, and the
/// distance of `C(α·z^k)` from `θH²` for `k ≤ DEMO_DEPTH`. Since
/// `C(αz^k) = G·z^{−k}` with `G = ψ·conj(α)`, that distance is the norm of the
/// coefficients of `conj(θ)·G` below `k`.
pub fn demo_no_mz_conjugation_between(
    s: &Settings,
    alpha: &BlaschkeProduct,
    theta: &BlaschkeProduct,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    if trials == 0 {
        return Err(Error::Parameter("trials must be ≥ 1; an empty demonstration would pass vacuously".into()));
    }
    let g = s.grid;
    let a = alpha.to_grid(g)?;
    let t = theta.to_grid(g)?;
    let at_bar = a.multiply(&t)?.conj_j();
    let params = json!({"alpha": to_json(alpha), "theta": to_json(theta), "trials": trials, "seed": seed});
    let mut r = CheckReport::new("conj.no_mz_conjugation_between_shift_invariant", params, 1.0);
    let mut corpus = Corpus::new(seed, "mz-conjugation-demo");
    let mut smallest = f64::INFINITY;
    for trial in 0..trials {
        let (family, psi) = match trial % 3 {
            0 => {
                let d = corpus.degree(1, 4);
                ("phase", corpus.phase(g, d)?)
            }
            1 => {
                let mut avoid = Vec::new();
                let d1 = corpus.degree(0, 3);
                let d2 = corpus.degree(1, 3);
                let b1 = corpus.blaschke(d1, &mut avoid);
                let b2 = corpus.blaschke(d2, &mut avoid);
                ("ratio", b1.to_grid(g)?.multiply(&b2.to_grid(g)?.conj_j())?)
            }
            _ => {
                // ψ = αθg, the shape forced by C(α) ∈ θH².
                let mut avoid = Vec::new();
                let d = corpus.degree(1, 3);
                let inner = corpus.blaschke(d, &mut avoid).to_grid(g)?;
                ("forced_shape", a.multiply(&t)?.multiply(&inner)?)
            }
        };
        let u = psi.is_unimodular(s.tol_construct);
        if !u.holds {
            return Err(Error::NotUnimodular(u.residual));
        }
        let gfun = psi.multiply(&at_bar)?;
        let below: f64 = (-(g.band() as i64)..DEMO_DEPTH)
            .map(|n| gfun.coeff(n).norm_sqr())
            .sum::<f64>()
            .sqrt();
        smallest = smallest.min(below);
        r.diagnostic_min(&format!("smallest_defect_{family}"), below);
    }
    r.residual("floor_ratio", floor_ratio(s.demo_floor, smallest));
    r.diagnostic("smallest_defect", smallest);
    Ok(r.finish())
}

// ---------------------------------------------------------------------------
// H²-preservation
// ---------------------------------------------------------------------------

/// Both sides of the `H²`-rigidity for an `M_z`-commuting conjugation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct H2Rigidity {
    /// `max_k ‖P_−(A z^k)‖` over `k = 0..=MEMBERSHIP_DEPTH`.
    pub preservation: f64,
    /// `max_j |ψ(z_j) − ψ_0|` for the recovered symbol.
    pub nonconstancy: f64,
}

pub fn commuting_h2_rigidity(s: &Settings, a: &AntilinearMap) -> Result<H2Rigidity> {
    let rec = recover_symbol(a, s.grid, s.tol_composed)?;
    if rec.kind != ConjugationKind::MzCommuting {
        return Err(Error::Parameter("map is not an M_z-commuting conjugation".into()));
    }
    let h = a.half();
    let mut preservation: f64 = 0.0;
    for k in 0..=MEMBERSHIP_DEPTH as usize {
        let mut e = vec![C64::new(0.0, 0.0); 2 * h + 1];
        e[h + k] = C64::new(1.0, 0.0);
        let img = a.apply(&e);
        preservation = preservation.max(img[..h].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
    }
    let c0 = rec.psi.coeff(0);
    let nonconstancy = rec.psi.samples().iter().map(|z| (z - c0).norm()).fold(0.0, f64::max);
    Ok(H2Rigidity {
        preservation,
        nonconstancy,
    })
}

/// Falsification demonstration: random unimodular `ψ`; `M_ψ J` must fail
/// to map `{1, z, z²}` into `H²` by at least the floor. Pure inner symbols
/// divisible by `z²` are left out of the family: they do map these three
/// monomials into `H²` and only fail at `z³` and beyond.
pub fn demo_no_h2_preserving_mz_conjugation(s: &Settings, trials: usize, seed: u64) -> Result<CheckReport> {
    if trials == 0 {
        return Err(Error::Parameter("trials must be ≥ 1; an empty demonstration would pass vacuously".into()));
    }
    let g = s.grid;
    let params = json!({"trials": trials, "seed": seed});
    let mut r = CheckReport::new("ops.no_h2_preserving_mz_conjugation", params, 1.0);
    let mut corpus = Corpus::new(seed, "h2-demo");
    let mut smallest = f64::INFINITY;
    for trial in 0..trials {
        let psi = if trial % 2 == 0 {
            let d = corpus.degree(1, 4);
            corpus.phase(g, d)?
        } else {
            let mut avoid = Vec::new();
            let d1 = corpus.degree(0, 3);
            let d2 = corpus.degree(1, 3);
            let b1 = corpus.blaschke(d1, &mut avoid);
            let b2 = corpus.blaschke(d2, &mut avoid);
            b1.to_grid(g)?.multiply(&b2.to_grid(g)?.conj_j())?
        };
        let half = window(s, symbol_band(&psi) + 2)?;
        let c = build_mpsi_j(&psi, half, s.tol_construct)?;
        let mut defect: f64 = 0.0;
        for k in 0..=2 {
            let mut e = vec![C64::new(0.0, 0.0); 2 * half + 1];
            e[half + k] = C64::new(1.0, 0.0);
            let img = c.apply(&e);
            defect = defect.max(img[..half].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
        }
        smallest = smallest.min(defect);
    }
    r.residual("floor_ratio", floor_ratio(s.demo_floor, smallest));
    r.diagnostic("smallest_defect", smallest);
    Ok(r.finish())
}

// ---------------------------------------------------------------------------
// Truncated Toeplitz operators
// ---------------------------------------------------------------------------

/// Result of fitting `A_ψ^θ = L` over analytic `ψ ∈ K_θ`.
#[derive(Clone, Debug)]
pub struct SymbolFit {
    /// The fitted symbol, `Σ c_k e_k`.
    pub psi: LaurentFunction,
    pub coords: Vec<C64>,
    /// `‖A_ψ − L‖_F` after the fit.
    pub fit_residual: f64,
}

/// Least-squares solve of `Σ_k c_k A_{e_k}^θ = L`. Since `A_ψ^θ = 0` exactly
/// when `ψ ∈ θH²`, the symbol is determined modulo `θH²`, and the basis
/// of `K_θ` parametrizes it once.
pub fn extract_analytic_symbol(l: &DMatrix<C64>, basis: &ModelSpaceBasis) -> Result<SymbolFit> {
    let d = basis.dim();
    if l.nrows() != d || l.ncols() != d {
        return Err(Error::Parameter(format!("expected a {d}×{d} matrix")));
    }
    let mut design = DMatrix::<C64>::zeros(d * d, d);
    for (k, e) in basis.functions().iter().enumerate() {
        let t = tto_matrix(e, basis)?.entries;
        for (i, v) in t.iter().enumerate() {
            design[(i, k)] = *v;
        }
    }
    let rhs = DVector::from_iterator(d * d, l.iter().copied());
    let coords = design
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-13)
        .map_err(|e| Error::Invariant(format!("least-squares solve failed: {e}")))?;
    let fit_residual = (&design * &coords - &rhs).norm();
    let coords: Vec<C64> = coords.iter().copied().collect();
    Ok(SymbolFit {
        psi: basis.combine(&coords)?,
        coords,
        fit_residual,
    })
}

/// `M_z`-commuting conjugations between `K_θ` and `K_{θ#}`: with
/// `C = λJ*`, checks `C(K_θ) ⊂ K_{θ#}`, `A_z^{θ#}C = CA_z^θ`, and that
/// `J*C|K_θ` is an isometric truncated Toeplitz operator whose extracted
/// symbol is `conj(λ)` modulo `θH²`.
pub fn verify_commuting_tto_decomposition(s: &Settings, theta: &BlaschkeProduct, lambda: C64) -> Result<CheckReport> {
    nonconstant(theta, "θ")?;
    if (lambda.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Parameter(format!("λ = {lambda} is not unimodular")));
    }
    let g = s.grid;
    let ts = theta.sharp();
    let k = ModelSpaceBasis::new(theta, g)?;
    let ks = ModelSpaceBasis::new(&ts, g)?;
    let c = restrict_with(k.functions(), &ks, |f| Ok(f.sharp().scale(lambda)))?;
    let t = truncated_shift(&k)?.entries;
    let t_sharp = truncated_shift(&ks)?.entries;
    let back = restrict_with(ks.functions(), &k, |f| Ok(f.sharp()))?;
    let a = anti_anti(&back.matrix, &c.matrix);
    let fit = extract_analytic_symbol(&a, &k)?;
    let want = LaurentFunction::constant(g, lambda.conj());

    let params = json!({"theta": to_json(theta), "lambda": cpair(lambda)});
    let mut r = CheckReport::new("tto.commuting_conjugation_decomposition", params, s.tol_composed);
    r.residual("leakage_into_k_theta_sharp", c.leakage);
    r.residual(
        "intertwines_truncated_shifts",
        max_abs(&(lin_anti(&t_sharp, &c.matrix) - anti_lin(&c.matrix, &t))),
    );
    r.residual("isometry", unitarity_residual(&a));
    r.residual("matches_constant_tto", max_abs(&(&a - tto_matrix(&want, &k)?.entries)));
    r.residual("symbol_fit", fit.fit_residual);
    r.residual("symbol_error", fit.psi.distance(&k.project(&want)?)?);
    if !ts.approx_eq(theta, PAIRING_TOL) {
        let same = restrict_with(k.functions(), &k, |f| Ok(f.sharp().scale(lambda)))?.leakage;
        r.flag("same_space_leakage_small", same < s.demo_floor);
        r.diagnostic("same_space_leakage", same);
    }
    Ok(r.finish())
}

/// Coordinate matrices used by the model-space conjugation checks.
struct ModelSpaceFrame {
    basis: ModelSpaceBasis,
    /// `J*` restricted to `K_θ → K_θ` (meaningful when `θ# = θ`).
    jstar: DMatrix<C64>,
    /// `C_θ` restricted to `K_θ`.
    c_theta: DMatrix<C64>,
    /// `A_z^θ`.
    shift: DMatrix<C64>,
}

impl ModelSpaceFrame {
    fn new(theta: &BlaschkeProduct, grid: GridParams) -> Result<Self> {
        let basis = ModelSpaceBasis::new(theta, grid)?;
        let t = theta.to_grid(grid)?;
        let jstar = restrict_with(basis.functions(), &basis, |f| Ok(f.sharp()))?.matrix;
        let c_theta = restrict_with(basis.functions(), &basis, |f| apply_c(&t, f))?.matrix;
        let shift = truncated_shift(&basis)?.entries;
        Ok(Self {
            basis,
            jstar,
            c_theta,
            shift,
        })
    }
}

fn random_unitary(corpus: &mut Corpus, d: usize) -> DMatrix<C64> {
    let m = DMatrix::from_fn(d, d, |_, _| corpus.complex());
    m.qr().q()
}

/// Self-sharp `θ`: a conjugation on `K_θ` commutes with `A_z^θ` exactly when
/// it is `λJ*`. Each candidate is classified twice — by the conjugation and
/// commutation tests, and by extracting `λ` and measuring `‖C − λJ*‖`.
pub fn verify_self_sharp_rigidity(s: &Settings, theta: &BlaschkeProduct, seed: u64) -> Result<CheckReport> {
    nonconstant(theta, "θ")?;
    if !theta.sharp().approx_eq(theta, PAIRING_TOL) {
        return Err(Error::Parameter("θ# = θ is required: conjugation-closed zeros and real λ".into()));
    }
    let fr = ModelSpaceFrame::new(theta, s.grid)?;
    let d = fr.basis.dim();
    let mut corpus = Corpus::new(seed, "self-sharp-candidates");
    let mut candidates: Vec<(DMatrix<C64>, Option<C64>)> = Vec::new();
    for _ in 0..3 {
        let lam = corpus.unimodular();
        candidates.push((fr.jstar.map(|z| z * lam), Some(lam)));
    }
    candidates.push((fr.c_theta.clone(), None));
    for _ in 0..2 {
        let mut psi = corpus.analytic(s.grid, 3)?.scale(C64::new(0.3, 0.0));
        psi = psi.add(&LaurentFunction::constant(s.grid, corpus.unimodular()))?;
        let tp = tto_matrix(&psi, &fr.basis)?.entries;
        candidates.push((anti_lin(&fr.jstar, &tp), None));
    }
    for _ in 0..2 {
        let w = random_unitary(&mut corpus, d);
        candidates.push((lin_anti(&w, &anti_lin(&fr.jstar, &w.adjoint())), None));
    }

    let (pivot, _) = fr
        .jstar
        .column(0)
        .iter()
        .enumerate()
        .map(|(i, z)| (i, z.norm()))
        .fold((0, -1.0), |best, x| if x.1 > best.1 { x } else { best });
    let params = json!({"theta": to_json(theta), "seed": seed, "candidates": candidates.len()});
    let mut r = CheckReport::new("tto.self_sharp_rigidity", params, s.tol_composed);
    let mut accepted_count = 0;
    for (m, expected) in &candidates {
        let conj = conjugation_residual(m);
        let comm = max_abs(&(&fr.shift * m - m * fr.shift.map(|z| z.conj())));
        let accepted = conj < s.tol_composed && comm < s.tol_composed;
        let lam = m[(pivot, 0)] / fr.jstar[(pivot, 0)];
        let dist = max_abs(&(m - fr.jstar.map(|z| z * lam)));
        // λJ* with λ on the unit circle.
        let is_ljstar = dist < s.tol_composed && (lam.norm() - 1.0).abs() < s.tol_composed;
        r.flag("classification_disagreement", accepted != is_ljstar);
        if let Some(want) = expected {
            r.residual("lambda_error", (lam - want).norm());
            r.residual("distance_to_lambda_jstar", dist);
        }
        accepted_count += accepted as usize;
    }
    r.diagnostic("accepted", accepted_count as f64);
    Ok(r.finish())
}

/// Whether a conjugation on `K_θ` (coordinate matrix `cm`) satisfies the
/// intertwining `A_z C = C A_{conj z}` and, independently, whether `C·C_θ`
/// fits an analytic truncated Toeplitz operator that is unitary.
pub fn intertwining_sides(s: &Settings, theta: &BlaschkeProduct, cm: &DMatrix<C64>) -> Result<(bool, bool)> {
    let fr = ModelSpaceFrame::new(theta, s.grid)?;
    intertwining_sides_in(s, &fr, cm)
}

fn intertwining_sides_in(s: &Settings, fr: &ModelSpaceFrame, cm: &DMatrix<C64>) -> Result<(bool, bool)> {
    let tbar = fr.shift.adjoint();
    let shift_rel = max_abs(&(lin_anti(&fr.shift, cm) - anti_lin(cm, &tbar)));
    let l = anti_anti(cm, &fr.c_theta);
    let fit = extract_analytic_symbol(&l, &fr.basis)?;
    let tp = tto_matrix(&fit.psi, &fr.basis)?.entries;
    let form = fit.fit_residual < s.tol_composed && unitarity_residual(&tp) < s.tol_composed;
    Ok((shift_rel < s.tol_composed, form))
}

/// Conjugations on `K_θ` intertwining `A_z^θ` and `A_{conj z}^θ`: with
/// `C = A_ψ^θ C_θ` for unitary `A_ψ^θ`, checks the conjugation axioms, the
/// intertwining for `z` and for random analytic symbols, the second form
/// `C = C_θ A_{conj ψ}^θ`, and that `C·C_θ` commutes with `A_z^θ` and yields
/// `ψ` back modulo `θH²` by a least-squares symbol extraction.
pub fn verify_intertwining_tto_symbol(s: &Settings, theta: &BlaschkeProduct, psi: &LaurentFunction, seed: u64) -> Result<CheckReport> {
    nonconstant(theta, "θ")?;
    let fr = ModelSpaceFrame::new(theta, s.grid)?;
    let tpsi = tto_matrix(psi, &fr.basis)?.entries;
    let unitary = unitarity_residual(&tpsi);
    if unitary >= s.tol_composed {
        return Err(Error::NotUnitary(unitary));
    }
    let cm = lin_anti(&tpsi, &fr.c_theta);
    let params = json!({"theta": to_json(theta), "psi_window": psi.window(8).iter().map(|z| cpair(*z)).collect::<Vec<_>>(), "seed": seed});
    let mut r = CheckReport::new("tto.intertwining_conjugation_symbol", params, s.tol_composed);
    r.residual("conjugation", conjugation_residual(&cm));
    let tbar = fr.shift.adjoint();
    r.residual("intertwines_shift", max_abs(&(lin_anti(&fr.shift, &cm) - anti_lin(&cm, &tbar))));
    let mut corpus = Corpus::new(seed, "intertwining-symbols");
    for _ in 0..4 {
        let phi = corpus.analytic(s.grid, 3)?;
        let tp = tto_matrix(&phi, &fr.basis)?.entries;
        let tpb = tto_matrix(&phi.conj_j(), &fr.basis)?.entries;
        r.residual("intertwines_analytic_symbols", max_abs(&(lin_anti(&tp, &cm) - anti_lin(&cm, &tpb))));
    }
    let second = anti_lin(&fr.c_theta, &tto_matrix(&psi.conj_j(), &fr.basis)?.entries);
    r.residual("second_form", max_abs(&(&cm - second)));

    let l = anti_anti(&cm, &fr.c_theta);
    r.residual("commutes_with_truncated_shift", max_abs(&(&fr.shift * &l - &l * &fr.shift)));
    let fit = extract_analytic_symbol(&l, &fr.basis)?;
    r.residual("symbol_fit", fit.fit_residual);
    r.residual("symbol_error", fit.psi.distance(&fr.basis.project(psi)?)?);

    // The extraction itself, on a generic analytic symbol.
    let phi = corpus.analytic(s.grid, 4)?;
    let generic = extract_analytic_symbol(&tto_matrix(&phi, &fr.basis)?.entries, &fr.basis)?;
    r.residual("generic_symbol_error", generic.psi.distance(&fr.basis.project(&phi)?)?);
    r.diagnostic("unitarity", unitary);
    Ok(r.finish())
}

/// Equivalence integrity on a seeded candidate set: conjugations of the form
/// `A_ψ C_θ` with unitary `A_ψ` and conjugations `W C_θ W*` for random
/// unitaries `W`. Returns the number of candidates whose intertwining test
/// and symbol-form test disagree, and how many satisfy both.
pub fn intertwining_integrity(s: &Settings, theta: &BlaschkeProduct, seed: u64) -> Result<(usize, usize)> {
    let fr = ModelSpaceFrame::new(theta, s.grid)?;
    let d = fr.basis.dim();
    let mut corpus = Corpus::new(seed, "intertwining-candidates");
    let mut cands = Vec::new();
    for _ in 0..2 {
        let lam = corpus.unimodular();
        cands.push(fr.c_theta.map(|z| z * lam));
    }
    for _ in 0..2 {
        let w = random_unitary(&mut corpus, d);
        cands.push(lin_anti(&w, &anti_lin(&fr.c_theta, &w.adjoint())));
    }
    let mut disagreements = 0;
    let mut both = 0;
    for cm in &cands {
        let (a, b) = intertwining_sides_in(s, &fr, cm)?;
        disagreements += (a != b) as usize;
        both += (a && b) as usize;
    }
    Ok((disagreements, both))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn settings() -> Settings {
        Settings {
            grid: GridParams::new(1024, 400).unwrap(),
            ..Settings::default()
        }
    }

    fn bz(zeros: &[C64]) -> BlaschkeProduct {
        BlaschkeProduct::from_zeros(zeros.to_vec()).unwrap()
    }

    #[test]
    fn report_pass_rule() {
        let mut r = CheckReport::new("x", Value::Null, 1e-9);
        assert!(!r.clone().finish().pass, "no residuals means no pass");
        r.residual("a", 1e-12);
        r.flag("b", false);
        assert!(r.clone().finish().pass);
        r.residual("a", 1e-3);
        assert!(!r.clone().finish().pass);
        let mut q = CheckReport::new("y", Value::Null, 1.0);
        q.residual("floor_ratio", floor_ratio(1e-3, 0.0));
        assert!(!q.finish().pass);
    }

    #[test]
    fn construct_beta_examples() {
        let z2 = BlaschkeProduct::z_power(2);
        let z1 = BlaschkeProduct::z_power(1);
        let b = construct_beta(&z2, &z1).unwrap();
        assert!(b.equal_up_to_unimodular(&z2).is_some());

        let (a, bb) = (c(0.0, 0.5), c(0.3, 0.2));
        let alpha = bz(&[a, bb]);
        let theta = bz(&[a, bb.conj()]);
        let beta = construct_beta(&alpha, &theta).unwrap();
        assert!(beta.equal_up_to_unimodular(&theta).is_some());

        assert!(matches!(
            construct_beta(&z1, &bz(&[c(0.5, 0.0)])),
            Err(Error::NotConstructible(_))
        ));
    }

    #[test]
    fn enumerate_small_cases() {
        assert_eq!(enumerate_betas(&BlaschkeProduct::z_power(2)).unwrap().len(), 1);
        let (a, b) = (c(0.0, 0.5), c(0.3, 0.2));
        let four = enumerate_betas(&bz(&[a, b])).unwrap();
        assert_eq!(four.len(), 4);
        for beta in &four {
            assert!(sharp_product(beta)
                .equal_up_to_unimodular(&sharp_product(&bz(&[a, b])))
                .is_some());
        }
        assert!(enumerate_betas(&BlaschkeProduct::one()).is_err());
    }

    #[test]
    fn containment_examples() {
        let s = settings();
        let one = BlaschkeProduct::one();
        let z = BlaschkeProduct::z_power(1);
        let v = mz_conjugation_containment(&s, &BlaschkeProduct::z_power(2), &one, &z, &BlaschkeProduct::z_power(3)).unwrap();
        assert!(v.divisible && v.contained, "{v:?}");
        let v = mz_conjugation_containment(&s, &bz(&[c(0.5, 0.0)]), &one, &z, &BlaschkeProduct::z_power(2)).unwrap();
        assert!(!v.divisible && !v.contained && v.leakage > 1e-3, "{v:?}");
    }

    #[test]
    fn commuting_containment_examples() {
        let s = settings();
        let one = BlaschkeProduct::one();
        let alpha = bz(&[c(0.2, 0.3)]);
        // β = α, θ# = α: C = J*.
        let r = verify_commuting_containment(&s, &alpha, &alpha.sharp(), &alpha, &one).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.diagnostics["quotient_degree"], 0.0);
        // β = α·b_{0.5i}: not a conjugation.
        let beta = alpha.multiply(&bz(&[c(0.0, 0.5)]));
        let r = verify_commuting_containment(&s, &alpha, &beta.sharp(), &beta, &one).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.diagnostics["involution"] > 1e-3);
        // γ = z, α = z, β = z², θ# = z².
        let z = BlaschkeProduct::z_power(1);
        let r = verify_commuting_containment(&s, &z, &BlaschkeProduct::z_power(2), &BlaschkeProduct::z_power(2), &z).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(verify_commuting_containment(&s, &z, &z, &bz(&[c(0.5, 0.0)]), &one).is_err());
    }

    #[test]
    fn involution_criterion_examples() {
        let s = settings();
        let alpha = bz(&[c(0.0, 0.5), c(0.3, 0.2)]);
        let f = involution_faces(&s, &alpha, &alpha, 1).unwrap();
        assert!(f.agree(1e-9) && f.involution < 1e-10, "{f:?}");
        let theta = bz(&[c(0.0, 0.5), c(0.3, -0.2)]);
        let f = involution_faces(&s, &alpha, &theta, 1).unwrap();
        assert!(f.agree(1e-9) && f.involution < 1e-9, "{f:?}");
        let f = involution_faces(&s, &BlaschkeProduct::z_power(1), &bz(&[c(0.5, 0.0)]), 1).unwrap();
        assert!(f.agree(1e-9) && f.involution > 1e-3, "{f:?}");
    }

    #[test]
    fn swap_pair_validation_and_pass() {
        let s = settings();
        assert!(swap_pair(&s, c(0.0, 0.5), c(0.0, 0.5), 1).is_err());
        assert!(swap_pair(&s, c(0.5, 0.0), c(0.3, 0.2), 1).is_err());
        let r = swap_pair(&s, c(0.0, 0.5), c(0.3, 0.2), 1).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn shift_invariant_negative_branch() {
        let s = settings();
        let r = verify_shift_invariant_map(&s, &BlaschkeProduct::z_power(1), &bz(&[c(0.5, 0.0)]), 3).unwrap();
        assert_eq!(r.params["admissible"], false);
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn demos_refuse_zero_trials() {
        let s = settings();
        let z = BlaschkeProduct::z_power(1);
        assert!(demo_no_mz_conjugation_between(&s, &z, &z, 0, 7).is_err());
        assert!(demo_no_h2_preserving_mz_conjugation(&s, 0, 7).is_err());
        let r = demo_no_mz_conjugation_between(&s, &z, &z, 30, 7).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn tto_checks_on_small_cases() {
        let s = settings();
        let r = verify_commuting_tto_decomposition(&s, &BlaschkeProduct::z_power(2), C64::new(1.0, 0.0)).unwrap();
        assert!(r.pass, "{r:?}");
        let theta = bz(&[c(0.5, 0.0), c(-0.3, 0.0)]);
        let r = verify_commuting_tto_decomposition(&s, &theta, c(0.0, 1.0)).unwrap();
        assert!(r.pass, "{r:?}");
        let r = verify_self_sharp_rigidity(&s, &BlaschkeProduct::z_power(3), 4).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(verify_self_sharp_rigidity(&s, &bz(&[c(0.1, 0.3)]), 4).is_err());
        let lam = LaurentFunction::constant(s.grid, C64::from_polar(1.0, 0.4));
        let r = verify_intertwining_tto_symbol(&s, &theta, &lam, 5).unwrap();
        assert!(r.pass, "{r:?}");
        let z = LaurentFunction::monomial(s.grid, 1).unwrap();
        assert!(matches!(
            verify_intertwining_tto_symbol(&s, &theta, &z, 5),
            Err(Error::NotUnitary(_))
        ));
    }
}
