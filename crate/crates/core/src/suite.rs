//! The certification suite: a fixed registry of checks, each a pure function
//! of the run configuration. Sweeps draw their inputs from a per-check seeded
//! stream, so a report is a deterministic function of `(config, seed)`.
//! Checks may run on worker threads; the report keeps registry order.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::blaschke::BlaschkeProduct;
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::fourier::{GridParams, LaurentFunction, C64};
use crate::modelspace::algebra::{anti_anti, anti_lin, conjugation_residual, lin_anti, max_abs};
use crate::modelspace::{
    algebraic_projection, kernel_k0, kernel_k0_tilde, membership_theta_h2, restrict_with, truncated_shift,
    tto_matrix, ModelSpaceBasis,
};
use crate::operators::{
    build_c_theta, build_ckl, build_j, build_jstar, build_m, build_mpsi_j, build_mpsi_jstar, interior, is_c_symmetric,
    product_block, random_probes, recover_symbol, AntilinearMap, ConjugationKind, Factor, OperatorChain,
};
use crate::theorems::{
    self, apply_c, apply_c_jstar_c, commuting_h2_rigidity, construct_beta, enumerate_betas, floor_ratio,
    grid_conjugation_residuals, sharp_product, sharp_product_residual, symbol_band, window, CheckReport, Settings,
    PROBE_SUPPORT,
};

/// Everything a suite run depends on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub settings: Settings,
    pub seed: u64,
    /// Degree cap for each random inner function.
    pub max_degree: usize,
    /// Demonstrations run `10 × trials` random candidates.
    pub trials: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            settings: Settings::default(),
            seed: 0x5eed,
            max_degree: 6,
            trials: 100,
        }
    }
}

type Runner = fn(&SuiteConfig) -> Result<CheckReport>;

/// One registered check.
pub struct CheckSpec {
    pub id: &'static str,
    pub summary: &'static str,
    run: Runner,
}

impl CheckSpec {
    /// Runs the check; an evaluation error becomes a failing report.
    pub fn run(&self, cfg: &SuiteConfig) -> CheckReport {
        match (self.run)(cfg) {
            Ok(r) => r,
            Err(e) => CheckReport::failed(self.id, sweep_params(cfg, 0), cfg.settings.tol_composed, &e).finish(),
        }
    }
}

macro_rules! checks {
    ($( $id:literal => $f:ident : $summary:literal ),* $(,)?) => {
        &[ $( CheckSpec { id: $id, summary: $summary, run: $f } ),* ]
    };
}

static REGISTRY: &[CheckSpec] = checks![
    "fourier.parseval" => fourier_parseval: "coefficient and quadrature norms and inner products agree",
    "fourier.reflections" => fourier_reflections: "J and # are exact involutive antilinear isometries with the expected shift rules",
    "fourier.symmetric_inner_constant" => fourier_symmetric_inner_constant: "a symmetric inner function is constant",
    "fourier.projection" => fourier_projection: "P₊ is an idempotent self-adjoint projection",
    "blaschke.lattice" => blaschke_lattice: "divisibility, quotients, gcd and # on zero multisets",
    "blaschke.grid_consistency" => blaschke_grid_consistency: "grid samples match direct evaluation and are unimodular",
    "ops.conjugation_axioms" => ops_conjugation_axioms: "J, J*, C_θ, M_ψJ, M_ψJ*, C_kl and C_βJ*C_α are conjugations",
    "ops.multiplier_identities" => ops_multiplier_identities: "M_φJ = JM_conj(φ) and M_φJ* = J*M_φ#",
    "ops.c_theta_products" => ops_c_theta_products: "C_βC_α = M_{β·conj(α)} and C_βM_γ = M_conj(γ)C_β",
    "ops.gamma_twisted_conjugation" => ops_gamma_twisted_conjugation: "M_γC_αM_conj(γ) is a conjugation",
    "ops.symbol_recovery" => ops_symbol_recovery: "conjugations are classified and reconstructed from ψ = C(1)",
    "ops.c_symmetry" => ops_c_symmetry: "C-symmetry of multiplication operators",
    "ops.h2_preserving_commuting" => ops_h2_preserving_commuting: "an M_z-commuting conjugation preserving H² is λJ*",
    "ops.no_h2_preserving_mz_conjugation" => ops_no_h2_preserving_mz_conjugation: "no M_z-conjugation preserves H² (demonstration)",
    "model.basis" => model_basis: "Takenaka–Malmquist bases are orthonormal and span K_θ",
    "model.projection" => model_projection: "basis projection matches the algebraic projection formula",
    "model.kernels" => model_kernels: "reproducing kernel at 0 and its conjugate kernel",
    "model.sharp_model_space" => model_sharp_model_space: "J*(K_α) = K_α#",
    "model.c_theta_preserves" => model_c_theta_preserves: "C_θ restricts to a conjugation on K_θ",
    "conj.containment_equivalence" => conj_containment_equivalence: "C_β(γK_α) ⊂ K_θ iff γα ≤ β ≤ γθ",
    "conj.commuting_containment_rigidity" => conj_commuting_containment_rigidity: "commuting conjugations γK_α → K_θ and their rigidity",
    "conj.involution_criterion" => conj_involution_criterion: "C_θJ*C_α is an involution iff αα# = θθ#",
    "conj.beta_construction" => conj_beta_construction: "β exists exactly when θθ# ≤ αα#",
    "conj.beta_enumeration" => conj_beta_enumeration: "all β with ββ# = αα#",
    "conj.shift_invariant_map" => conj_shift_invariant_map: "commuting conjugations from αH² into θH²",
    "conj.swap_pair_example" => conj_swap_pair_example: "swapping a zero for its conjugate",
    "conj.no_mz_conjugation_between_shift_invariant" => conj_no_mz_conjugation_between_shift_invariant: "no M_z-conjugation maps αH² into θH² (demonstration)",
    "tto.sarason_symmetry" => tto_sarason_symmetry: "truncated Toeplitz operators are C_θ-symmetric",
    "tto.sharp_intertwining" => tto_sharp_intertwining: "J*A_φ#^θ# = A_φ^θJ*",
    "tto.commuting_conjugation_decomposition" => tto_commuting_conjugation_decomposition: "commuting conjugations K_θ → K_θ# are λJ*",
    "tto.self_sharp_rigidity" => tto_self_sharp_rigidity: "for θ# = θ, commuting conjugations on K_θ are λJ*",
    "tto.intertwining_conjugation_symbol" => tto_intertwining_conjugation_symbol: "intertwining conjugations are A_ψC_θ with unitary A_ψ",
];

pub fn registry() -> &'static [CheckSpec] {
    REGISTRY
}

pub fn find(id: &str) -> Option<&'static CheckSpec> {
    REGISTRY.iter().find(|c| c.id == id)
}

/// Runs the registry (or the single check `only`) in registry order.
pub fn run_all(cfg: &SuiteConfig, only: Option<&str>) -> Result<Vec<CheckReport>> {
    let selected: Vec<&CheckSpec> = match only {
        Some(id) => vec![find(id).ok_or_else(|| Error::Parameter(format!("unknown check id {id:?}")))?],
        None => REGISTRY.iter().collect(),
    };
    Ok(selected.par_iter().map(|c| c.run(cfg)).collect())
}

/// Runs one check on explicit inputs rather than its seeded sweep.
pub fn run_with_params(id: &str, params: &Value, cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let seed = cfg.seed;
    match id {
        "conj.containment_equivalence" => theorems::verify_mz_conjugation_containment(
            s,
            &field(params, "beta")?,
            &field_or_one(params, "gamma")?,
            &field(params, "alpha")?,
            &field(params, "theta")?,
        ),
        "conj.commuting_containment_rigidity" => theorems::verify_commuting_containment(
            s,
            &field(params, "alpha")?,
            &field(params, "theta")?,
            &field(params, "beta")?,
            &field_or_one(params, "gamma")?,
        ),
        "conj.involution_criterion" => {
            theorems::involution_criterion(s, &field(params, "alpha")?, &field(params, "theta")?, seed)
        }
        "conj.shift_invariant_map" => {
            theorems::verify_shift_invariant_map(s, &field(params, "alpha")?, &field(params, "theta")?, seed)
        }
        "conj.swap_pair_example" => theorems::swap_pair(s, field(params, "a")?, field(params, "b")?, seed),
        "conj.no_mz_conjugation_between_shift_invariant" => theorems::demo_no_mz_conjugation_between(
            s,
            &field(params, "alpha")?,
            &field(params, "theta")?,
            10 * cfg.trials,
            seed,
        ),
        "tto.commuting_conjugation_decomposition" => theorems::verify_commuting_tto_decomposition(
            s,
            &field(params, "theta")?,
            field::<[f64; 2]>(params, "lambda").map(|[re, im]| C64::new(re, im))?,
        ),
        "tto.self_sharp_rigidity" => theorems::verify_self_sharp_rigidity(s, &field(params, "theta")?, seed),
        "tto.intertwining_conjugation_symbol" => {
            let [re, im] = field::<[f64; 2]>(params, "lambda")?;
            let psi = LaurentFunction::constant(s.grid, C64::new(re, im));
            theorems::verify_intertwining_tto_symbol(s, &field(params, "theta")?, &psi, seed)
        }
        _ if find(id).is_some() => Err(Error::Parameter(format!(
            "check {id} runs only as a seeded sweep and takes no parameters"
        ))),
        _ => Err(Error::Parameter(format!("unknown check id {id:?}"))),
    }
}

fn field<T: serde::de::DeserializeOwned>(params: &Value, name: &str) -> Result<T> {
    let v = params
        .get(name)
        .ok_or_else(|| Error::Malformed(format!("missing field {name:?}")))?;
    T::deserialize(v).map_err(|e| Error::Malformed(format!("field {name:?}: {e}")))
}

fn field_or_one(params: &Value, name: &str) -> Result<BlaschkeProduct> {
    match params.get(name) {
        None => Ok(BlaschkeProduct::one()),
        Some(_) => field(params, name),
    }
}

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

fn sweep_params(cfg: &SuiteConfig, instances: usize) -> Value {
    json!({"seed": cfg.seed, "instances": instances, "max_degree": cfg.max_degree})
}

fn corpus(cfg: &SuiteConfig, id: &str) -> Corpus {
    Corpus::new(cfg.seed, id)
}

fn deg(c: &mut Corpus, cfg: &SuiteConfig, hi: usize) -> usize {
    c.degree(1, hi.min(cfg.max_degree).max(1))
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// Window matrix of an antilinear map given on the grid: column `j` is the
/// image of `z^{j−half}`.
fn antilinear_from_fn(
    grid: GridParams,
    half: usize,
    apply: impl Fn(&LaurentFunction) -> Result<LaurentFunction>,
) -> Result<AntilinearMap> {
    let d = 2 * half + 1;
    let mut m = DMatrix::zeros(d, d);
    for j in 0..d {
        let img = apply(&LaurentFunction::monomial(grid, j as i64 - half as i64)?)?;
        for (i, v) in img.window(half).into_iter().enumerate() {
            m[(i, j)] = v;
        }
    }
    AntilinearMap::from_matrix(half, m)
}

fn random_lambda_product(c: &mut Corpus, d: usize, avoid: &mut Vec<C64>) -> BlaschkeProduct {
    c.blaschke(d, avoid)
}

// ---------------------------------------------------------------------------
// fourier
// ---------------------------------------------------------------------------

fn fourier_parseval(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let mut c = corpus(cfg, "fourier.parseval");
    let n = 20;
    let mut r = CheckReport::new("fourier.parseval", sweep_params(cfg, n), s.tol_construct);
    for _ in 0..n {
        let d = c.degree(1, 12);
        let f = c.trig(s.grid, d)?;
        let g = c.trig(s.grid, d)?;
        let quad = f.samples().iter().map(|z| z.norm_sqr()).sum::<f64>() / s.grid.size() as f64;
        r.residual("norm", (f.norm().powi(2) - quad).abs());
        r.residual("inner_product", (f.inner_product(&g)? - f.quadrature_inner_product(&g)?).norm());
        let back = LaurentFunction::from_samples(s.grid, f.samples())?;
        r.residual("sample_round_trip", back.max_coeff_distance(&f)?);
    }
    Ok(r.finish())
}

fn fourier_reflections(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let g = s.grid;
    let mut c = corpus(cfg, "fourier.reflections");
    let n = 20;
    let mut r = CheckReport::new("fourier.reflections", sweep_params(cfg, n), s.tol_construct);
    let z = LaurentFunction::monomial(g, 1)?;
    let zi = LaurentFunction::monomial(g, -1)?;
    for _ in 0..n {
        let f = c.trig(g, 6)?;
        let h = c.trig(g, 6)?;
        r.residual("j_involution", f.conj_j().conj_j().max_coeff_distance(&f)?);
        r.residual("sharp_involution", f.sharp().sharp().max_coeff_distance(&f)?);
        r.residual(
            "j_isometry",
            (f.conj_j().inner_product(&h.conj_j())? - h.inner_product(&f)?).norm(),
        );
        r.residual(
            "sharp_isometry",
            (f.sharp().inner_product(&h.sharp())? - h.inner_product(&f)?).norm(),
        );
        r.residual(
            "sharp_multiplicative",
            f.multiply(&h)?.sharp().max_coeff_distance(&f.sharp().multiply(&h.sharp())?)?,
        );
        r.residual(
            "sharp_commutes_with_z",
            z.multiply(&f)?.sharp().max_coeff_distance(&z.multiply(&f.sharp())?)?,
        );
        r.residual(
            "j_intertwines_z",
            z.multiply(&f)?.conj_j().max_coeff_distance(&zi.multiply(&f.conj_j())?)?,
        );
        // f#(z_j) = conj(f(conj z_j)), and conj(z_j) = z_{M−j}.
        let m = g.size();
        let fs = f.sharp();
        let sampled = (0..m)
            .map(|j| (fs.samples()[j] - f.samples()[(m - j) % m].conj()).norm())
            .fold(0.0, f64::max);
        r.residual("sharp_samples", sampled);
    }
    Ok(r.finish())
}

fn fourier_symmetric_inner_constant(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let mut c = corpus(cfg, "fourier.symmetric_inner_constant");
    let n = 20;
    let mut r = CheckReport::new("fourier.symmetric_inner_constant", sweep_params(cfg, n), 1.0);
    let mut smallest = f64::INFINITY;
    for i in 0..n {
        let mut avoid = Vec::new();
        let b = if i % 2 == 0 {
            let d = deg(&mut c, cfg, 6);
            random_lambda_product(&mut c, d, &mut avoid)
        } else {
            let pairs = c.degree(0, cfg.max_degree / 2);
            let reals = if pairs == 0 { 1 } else { c.degree(0, 1) };
            c.self_sharp(pairs, reals, &mut avoid)
        };
        smallest = smallest.min(b.to_grid(s.grid)?.is_symmetric(s.tol_construct).residual);
        let k = BlaschkeProduct::constant(c.unimodular())?.to_grid(s.grid)?;
        r.flag("constant_not_symmetric", !k.is_symmetric(s.tol_construct).holds);
    }
    r.residual("floor_ratio", floor_ratio(s.demo_floor, smallest));
    r.diagnostic("smallest_asymmetry", smallest);
    Ok(r.finish())
}

fn fourier_projection(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let g = s.grid;
    let mut c = corpus(cfg, "fourier.projection");
    let n = 20;
    let mut r = CheckReport::new("fourier.projection", sweep_params(cfg, n), s.tol_construct);
    let sym = LaurentFunction::from_terms(g, &[(1, one()), (-1, one())])?;
    r.residual("example", sym.project_h2().max_coeff_distance(&LaurentFunction::monomial(g, 1)?)?);
    for _ in 0..n {
        let f = c.trig(g, 8)?;
        let h = c.trig(g, 8)?;
        let p = f.project_h2();
        r.residual("idempotent", p.project_h2().max_coeff_distance(&p)?);
        r.residual(
            "self_adjoint",
            (p.inner_product(&h)? - f.inner_product(&h.project_h2())?).norm(),
        );
        r.residual(
            "pythagoras",
            (f.norm().powi(2) - p.norm().powi(2) - f.negative_part_norm().powi(2)).abs(),
        );
    }
    Ok(r.finish())
}

// ---------------------------------------------------------------------------
// blaschke
// ---------------------------------------------------------------------------

fn blaschke_lattice(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let mut c = corpus(cfg, "blaschke.lattice");
    let n = 40;
    let mut r = CheckReport::new("blaschke.lattice", sweep_params(cfg, n), s.tol_construct);
    for _ in 0..n {
        let mut avoid = Vec::new();
        let shared = c.degree(0, 2);
        let common = c.zeros(shared, &mut avoid);
        let da = c.degree(0, cfg.max_degree.saturating_sub(shared));
        let dt = c.degree(0, cfg.max_degree.saturating_sub(shared));
        let mut za = common.clone();
        za.extend(c.zeros(da, &mut avoid));
        let mut zt = common.clone();
        zt.extend(c.zeros(dt, &mut avoid));
        let a = BlaschkeProduct::new(c.unimodular(), za)?;
        let t = BlaschkeProduct::new(c.unimodular(), zt)?;
        let gcd = a.gcd(&t);
        r.flag("gcd_degree", gcd.degree() != shared);
        r.flag("gcd_divides", !(gcd.divides(&a) && gcd.divides(&t)));
        let prod = a.multiply(&t);
        let back = prod
            .divide(&t)
            .ok_or_else(|| Error::Invariant("θ does not divide αθ".into()))?;
        r.residual("quotient", if back.approx_eq(&a, 1e-12) { 0.0 } else { 1.0 });
        r.flag("sharp_involution", !a.sharp().sharp().approx_eq(&a, 1e-12));
        let ss = sharp_product(&a);
        r.flag("sharp_product_self_sharp", ss.sharp().equal_up_to_unimodular(&ss).is_none());
        r.flag("divides_reflexive", !a.divides(&a));
        if da > 0 && dt > 0 {
            r.flag("foreign_zero_does_not_divide", a.divides(&t));
        }
    }
    Ok(r.finish())
}

fn blaschke_grid_consistency(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let g = s.grid;
    let mut c = corpus(cfg, "blaschke.grid_consistency");
    let n = 20;
    let mut r = CheckReport::new("blaschke.grid_consistency", sweep_params(cfg, n), s.tol_construct);
    for _ in 0..n {
        let mut avoid = Vec::new();
        let d1 = deg(&mut c, cfg, 6);
        let d2 = deg(&mut c, cfg, 6);
        let a = c.blaschke(d1, &mut avoid);
        let b = c.blaschke(d2, &mut avoid);
        let ag = a.to_grid(g)?;
        let mut direct: f64 = 0.0;
        for j in (0..g.size()).step_by(7) {
            direct = direct.max((ag.samples()[j] - a.evaluate(g.node(j))?).norm());
        }
        r.residual("samples_match_evaluation", direct);
        r.residual("unimodular", ag.is_unimodular(s.tol_construct).residual);
        r.residual("constant_term", (ag.coeff(0) - a.value_at_zero()).norm());
        r.residual("analytic", ag.negative_part_norm());
        r.residual(
            "product",
            theorems::sup_distance(&a.multiply(&b).to_grid(g)?, &ag.multiply(&b.to_grid(g)?)?)?,
        );
        r.residual(
            "sharp",
            theorems::sup_distance(&a.sharp().to_grid(g)?, &ag.sharp())?,
        );
    }
    Ok(r.finish())
}

// ---------------------------------------------------------------------------
// operators
// ---------------------------------------------------------------------------

fn ops_conjugation_axioms(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let g = s.grid;
    let mut c = corpus(cfg, "ops.conjugation_axioms");
    let n = 20;
    let probe_count = 101;
    let mut r = CheckReport::new(
        "ops.conjugation_axioms",
        json!({"seed": cfg.seed, "instances": n, "probes": probe_count}),
        s.tol_construct,
    );
    for i in 0..n {
        let mut avoid = Vec::new();
        let (label, res) = match i % 7 {
            0 => {
                let half = window(s, 0)?;
                let p = random_probes(half, PROBE_SUPPORT, probe_count, c.rng());
                ("j", build_j(half).conjugation_residuals(&p))
            }
            1 => {
                let half = window(s, 0)?;
                let p = random_probes(half, PROBE_SUPPORT, probe_count, c.rng());
                let lam = c.unimodular();
                ("jstar", build_jstar(half).scale(lam).conjugation_residuals(&p))
            }
            2 => {
                let d = deg(&mut c, cfg, 6);
                let theta = c.blaschke(d, &mut avoid);
                let half = window(s, symbol_band(&theta.to_grid(g)?) + 1)?;
                let p = random_probes(half, PROBE_SUPPORT, probe_count, c.rng());
                ("c_theta", build_c_theta(&theta, g, half)?.conjugation_residuals(&p))
            }
            3 => {
                let d = c.degree(1, 3);
                let psi = c.phase(g, d)?;
                let half = window(s, symbol_band(&psi))?;
                let p = random_probes(half, PROBE_SUPPORT, probe_count, c.rng());
                ("mpsi_j", build_mpsi_j(&psi, half, s.tol_construct)?.conjugation_residuals(&p))
            }
            4 => {
                let d = c.degree(1, 3);
                let psi = c.symmetric_phase(g, d)?;
                let half = window(s, symbol_band(&psi))?;
                let p = random_probes(half, PROBE_SUPPORT, probe_count, c.rng());
                let (m, sym) = build_mpsi_jstar(&psi, half, s.tol_construct)?;
                r.residual("mpsi_jstar_symmetry", sym.residual);
                ("mpsi_jstar", m.conjugation_residuals(&p))
            }
            5 => {
                let half = window(s, 0)?;
                let k = c.degree(0, 4) as i64 - 2;
                let l = k + c.degree(1, 4) as i64;
                let p = random_probes(half, PROBE_SUPPORT, probe_count, c.rng());
                ("c_kl", build_ckl(k, l, half)?.conjugation_residuals(&p))
            }
            _ => {
                // C_β J* C_α with ββ# = αα#, applied on the grid.
                let d = deg(&mut c, cfg, 6);
                let alpha = c.blaschke(d, &mut avoid);
                let betas = enumerate_betas(&alpha)?;
                let pick = c.degree(0, betas.len() - 1);
                let beta = betas[pick].with_lambda(c.unimodular())?;
                let (a, b) = (alpha.to_grid(g)?, beta.to_grid(g)?);
                let probes: Vec<LaurentFunction> = (0..probe_count)
                    .map(|_| c.probe(g, PROBE_SUPPORT))
                    .collect::<Result<_>>()?;
                let (involution, isometry) = grid_conjugation_residuals(&probes, |f| apply_c_jstar_c(&b, &a, f))?;
                ("c_beta_jstar_c_alpha", crate::operators::ConjugationResiduals { involution, isometry })
            }
        };
        r.residual(&format!("{label}_involution"), res.involution);
        r.residual(&format!("{label}_isometry"), res.isometry);
    }
    Ok(r.finish())
}

fn ops_multiplier_identities(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let g = s.grid;
    let mut c = corpus(cfg, "ops.multiplier_identities");
    let n = 20;
    let mut r = CheckReport::new("ops.multiplier_identities", sweep_params(cfg, n), s.tol_construct);
    for _ in 0..n {
        let d = c.degree(1, 6);
        let phi = c.trig(g, d)?;
        let half = window(s, 2 * d)?;
        let rr = half - d - 1;
        let m = build_m(&phi, half)?;
        let mbar = build_m(&phi.conj_j(), half)?;
        let msharp = build_m(&phi.sharp(), half)?;
        let j = build_j(half);
        let js = build_jstar(half);
        // M_φ J = J M_conj(φ): as antilinear matrices, M·P_J and P_J·conj(M̄).
        let lhs = m.compose_antilinear(&j);
        let rhs = j.compose_linear(&mbar);
        r.residual("m_phi_j", lhs.distance(&rhs, rr)?);
        let lhs = m.compose_antilinear(&js);
        let rhs = js.compose_linear(&msharp);
        r.residual("m_phi_jstar", lhs.distance(&rhs, rr)?);
        let z = build_m(&LaurentFunction::monomial(g, 1)?, half)?;
        let zbar = build_m(&LaurentFunction::monomial(g, -1)?, half)?;
        r.residual("mz_j", z.compose_antilinear(&j).distance(&j.compose_linear(&zbar), rr)?);
        r.residual("mz_jstar", z.compose_antilinear(&js).distance(&js.compose_linear(&z), rr)?);
    }
    Ok(r.finish())
}

fn ops_c_theta_products(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let g = s.grid;
    let mut c = corpus(cfg, "ops.c_theta_products");
    let n = 10;
    let mut r = CheckReport::new("ops.c_theta_products", sweep_params(cfg, n), s.tol_construct);
    for _ in 0..n {
        let mut avoid = Vec::new();
        let (da, db, dg) = (c.degree(1, 3), c.degree(1, 3), c.degree(1, 3));
        let alpha = c.blaschke(da, &mut avoid);
        let beta = c.blaschke(db, &mut avoid);
        let gamma = c.blaschke(dg, &mut avoid);
        let (ag, bg, gg) = (alpha.to_grid(g)?, beta.to_grid(g)?, gamma.to_grid(g)?);
        let band = symbol_band(&ag).max(symbol_band(&bg)).max(symbol_band(&gg)) + 1;
        let half = window(s, 2 * band)?;
        let rr = half - band - 1;
        let ca = build_c_theta(&alpha, g, half)?;
        let cb = build_c_theta(&beta, g, half)?;
        // anti∘anti: P_β·conj(P_α).
        let prod = product_block(cb.matrix(), &ca.matrix().map(|z| z.conj()), half, rr)?;
        let want = build_m(&bg.multiply(&ag.conj_j())?, half)?;
        r.residual("c_beta_c_alpha", max_abs(&(prod - interior(want.matrix(), half, rr)?)));
        // C_β M_γ = M_conj(γ) C_β: P_β·conj(M_γ) against M_γ̄·P_β.
        let mg = build_m(&gg, half)?;
        let mgbar = build_m(&gg.conj_j(), half)?;
        let lhs = product_block(cb.matrix(), &mg.matrix().map(|z| z.conj()), half, rr)?;
        let rhs = product_block(mgbar.matrix(), cb.matrix(), half, rr)?;
        r.residual("c_beta_m_gamma", max_abs(&(lhs - rhs)));
    }
    Ok(r.finish())
}

fn ops_gamma_twisted_conjugation(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let g = s.grid;
    let mut c = corpus(cfg, "ops.gamma_twisted_conjugation");
    let n = 6;
    let mut r = CheckReport::new("ops.gamma_twisted_conjugation", sweep_params(cfg, n), s.tol_construct);
    for _ in 0..n {
        let mut avoid = Vec::new();
        let (da, dg) = (c.degree(1, 3), c.degree(1, 2));
        let alpha = c.blaschke(da, &mut avoid);
        let gamma = c.blaschke(dg, &mut avoid);
        let (ag, gg) = (alpha.to_grid(g)?, gamma.to_grid(g)?);
        let (ba, bgm) = (symbol_band(&ag), symbol_band(&gg));
        let half = window(s, 2 * (ba + 2 * bgm + 1))?;
        let chain = OperatorChain::new(vec![
            Factor::Linear(build_m(&gg, half)?),
            Factor::Antilinear(build_c_theta(&alpha, g, half)?),
            Factor::Linear(build_m(&gg.conj_j(), half)?),
        ])?;
        let probes = random_probes(half, PROBE_SUPPORT, 24, c.rng());
        let res = chain.conjugation_residuals(&probes)?;
        r.residual("involution", res.involution);
        r.residual("isometry", res.isometry);
        r.residual("intertwines_z", chain.shift_residual(&probes, -1));
    }
    Ok(r.finish())
}

fn ops_symbol_recovery(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let g = s.grid;
    let tol = s.tol_composed;
    let mut c = corpus(cfg, "ops.symbol_recovery");
    let per_class = 50;
    let mut r = CheckReport::new(
        "ops.symbol_recovery",
        json!({"seed": cfg.seed, "per_class": per_class}),
        tol,
    );
    for i in 0..per_class {
        // M_z-conjugations.
        let mut avoid = Vec::new();
        let a = match i % 3 {
            0 => {
                let d = deg(&mut c, cfg, 6);
                let theta = c.blaschke(d, &mut avoid);
                let half = window(s, symbol_band(&theta.to_grid(g)?) + 1)?;
                build_c_theta(&theta, g, half)?
            }
            1 => {
                let d = c.degree(1, 3);
                let psi = c.phase(g, d)?;
                build_mpsi_j(&psi, window(s, symbol_band(&psi))?, s.tol_construct)?
            }
            _ => {
                let (d1, d2) = (c.degree(1, 3), c.degree(1, 3));
                let b1 = c.blaschke(d1, &mut avoid);
                let b2 = c.blaschke(d2, &mut avoid);
                let psi = b1.to_grid(g)?.multiply(&b2.to_grid(g)?.conj_j())?;
                build_mpsi_j(&psi, window(s, symbol_band(&psi))?, s.tol_construct)?
            }
        };
        let rec = recover_symbol(&a, g, tol)?;
        r.flag("class_mismatch", rec.kind != ConjugationKind::MzConjugation);
        r.residual("reconstruction", rec.reconstruction_residual);
        r.residual("unimodular", rec.unimodular.residual);

        // M_z-commuting conjugations.
        let mut avoid = Vec::new();
        let a = match i % 3 {
            0 => build_jstar(window(s, 0)?).scale(c.unimodular()),
            1 => {
                let d = c.degree(1, 3);
                let psi = c.symmetric_phase(g, d)?;
                build_mpsi_jstar(&psi, window(s, symbol_band(&psi))?, s.tol_construct)?.0
            }
            _ => {
                let d = c.degree(1, 3);
                let alpha = c.blaschke(d, &mut avoid);
                let betas = enumerate_betas(&alpha)?;
                let pick = c.degree(0, betas.len() - 1);
                let beta = betas[pick].with_lambda(c.unimodular())?;
                let (ag, bg) = (alpha.to_grid(g)?, beta.to_grid(g)?);
                let half = window(s, symbol_band(&ag) + symbol_band(&bg))?;
                antilinear_from_fn(g, half, |f| apply_c_jstar_c(&bg, &ag, f))?
            }
        };
        let rec = recover_symbol(&a, g, tol)?;
        r.flag("class_mismatch", rec.kind != ConjugationKind::MzCommuting);
        r.residual("reconstruction", rec.reconstruction_residual);
        r.residual("unimodular", rec.unimodular.residual);
        r.residual("symmetric", rec.symmetric.residual);
    }
    let half = window(s, 0)?;
    for (k, l) in [(0, 1), (0, 2), (-1, 3), (2, 5)] {
        let rec = recover_symbol(&build_ckl(k, l, half)?, g, tol)?;
        r.flag("transposition_not_neither", rec.kind != ConjugationKind::Neither);
    }
    Ok(r.finish())
}

fn ops_c_symmetry(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let g = s.grid;
    let mut c = corpus(cfg, "ops.c_symmetry");
    let n = 10;
    let mut r = CheckReport::new("ops.c_symmetry", sweep_params(cfg, n), s.tol_construct);
    let mut smallest = f64::INFINITY;
    for _ in 0..n {
        let d = c.degree(1, 4);
        let phi = c.trig(g, d)?;
        let half = window(s, 2 * d)?;
        let rr = half - d - 1;
        let m = build_m(&phi, half)?;
        r.residual("j_symmetric", is_c_symmetric(&m, &build_j(half), rr)?);
        let mz = build_m(&LaurentFunction::monomial(g, 1)?, half)?;
        smallest = smallest.min(is_c_symmetric(&mz, &build_jstar(half), rr)?);
    }
    // J* commutes with M_z rather than symmetrizing it.
    r.count("jstar_symmetrizes_shift", (smallest < s.demo_floor) as usize);
    r.diagnostic("smallest_jstar_defect", smallest);
    Ok(r.finish())
}

fn ops_h2_preserving_commuting(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let g = s.grid;
    let mut c = corpus(cfg, "ops.h2_preserving_commuting");
    let n = 24;
    let mut r = CheckReport::new("ops.h2_preserving_commuting", sweep_params(cfg, n), 1e-8);
    let mut preserving = 0;
    for i in 0..n {
        let mut avoid = Vec::new();
        let a = match i % 4 {
            0 => build_jstar(window(s, 0)?).scale(c.unimodular()),
            1 => {
                let d = c.degree(1, 3);
                let psi = c.symmetric_phase(g, d)?;
                build_mpsi_jstar(&psi, window(s, symbol_band(&psi))?, s.tol_construct)?.0
            }
            k => {
                // C_βJ*C_α; β = λα# gives λJ*.
                let d = c.degree(1, 3);
                let alpha = c.blaschke(d, &mut avoid);
                let beta = if k == 2 {
                    alpha.sharp().with_lambda(c.unimodular())?
                } else {
                    let betas = enumerate_betas(&alpha)?;
                    let pick = c.degree(0, betas.len() - 1);
                    betas[pick].clone()
                };
                let (ag, bg) = (alpha.to_grid(g)?, beta.to_grid(g)?);
                let half = window(s, symbol_band(&ag) + symbol_band(&bg))?;
                antilinear_from_fn(g, half, |f| apply_c_jstar_c(&bg, &ag, f))?
            }
        };
        let rig = commuting_h2_rigidity(s, &a)?;
        let preserves = rig.preservation < 1e-8;
        let constant = rig.nonconstancy < 1e-8;
        r.flag("preservation_vs_constant", preserves != constant);
        if preserves {
            preserving += 1;
            r.residual("preserving_nonconstancy", rig.nonconstancy);
        }
    }
    r.diagnostic("preserving", preserving as f64);
    Ok(r.finish())
}

fn ops_no_h2_preserving_mz_conjugation(cfg: &SuiteConfig) -> Result<CheckReport> {
    theorems::demo_no_h2_preserving_mz_conjugation(&cfg.settings, 10 * cfg.trials, cfg.seed)
}

// ---------------------------------------------------------------------------
// model spaces
// ---------------------------------------------------------------------------

fn model_basis(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let g = s.grid;
    let mut c = corpus(cfg, "model.basis");
    let n = 20;
    let mut r = CheckReport::new("model.basis", sweep_params(cfg, n), s.tol_construct);
    for i in 0..n {
        let mut avoid = Vec::new();
        let theta = if i % 4 == 3 {
            // repeated zeros
            let a = c.zero(&avoid);
            BlaschkeProduct::from_zeros(vec![a, a, c.zero(&[a])])?
        } else {
            let d = deg(&mut c, cfg, 6);
            c.blaschke(d, &mut avoid)
        };
        let b = ModelSpaceBasis::new(&theta, g)?;
        r.flag("dimension", b.dim() != theta.degree());
        r.residual("gram", b.gram_residual()?);
        r.residual("orthogonal_to_theta_h2", b.orthogonality_residual()?);
        let t = theta.to_grid(g)?;
        for e in b.functions() {
            r.residual("analytic", e.negative_part_norm());
            // e ⊥ θH² ⇔ conj(θ)·e has no coefficients at n ≥ 0.
            r.residual("orthogonal_to_theta_multiples", t.conj_j().multiply(e)?.project_h2().norm());
        }
    }
    let z3 = ModelSpaceBasis::new(&BlaschkeProduct::z_power(3), g)?;
    let t = truncated_shift(&z3)?.entries;
    let want = DMatrix::from_fn(3, 3, |i, j| if i == j + 1 { one() } else { C64::new(0.0, 0.0) });
    r.residual("truncated_shift_z3", max_abs(&(t - want)));
    let id = tto_matrix(&LaurentFunction::constant(g, one()), &z3)?.entries;
    r.residual("identity_symbol", max_abs(&(id - DMatrix::identity(3, 3))));
    Ok(r.finish())
}

fn model_projection(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let g = s.grid;
    let mut c = corpus(cfg, "model.projection");
    let n = 20;
    let mut r = CheckReport::new("model.projection", sweep_params(cfg, n), s.tol_composed);
    for _ in 0..n {
        let mut avoid = Vec::new();
        let d = deg(&mut c, cfg, 6);
        let theta = c.blaschke(d, &mut avoid);
        let b = ModelSpaceBasis::new(&theta, g)?;
        let f = c.probe(g, 10)?;
        let p = b.project(&f)?;
        r.residual("matches_algebraic", p.distance(&algebraic_projection(&f, &theta)?)?);
        r.residual("idempotent", b.project(&p)?.distance(&p)?);
    }
    Ok(r.finish())
}

fn model_kernels(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let g = s.grid;
    let mut c = corpus(cfg, "model.kernels");
    let n = 20;
    let mut r = CheckReport::new("model.kernels", sweep_params(cfg, n), s.tol_construct);
    for _ in 0..n {
        let mut avoid = Vec::new();
        let d = deg(&mut c, cfg, 6);
        let alpha = c.blaschke(d, &mut avoid);
        let b = ModelSpaceBasis::new(&alpha, g)?;
        let k0 = kernel_k0(&alpha, g)?;
        let kt = kernel_k0_tilde(&alpha, g)?;
        r.residual("k0_in_model_space", b.leakage(&k0)?);
        r.residual("k0_tilde_in_model_space", b.leakage(&kt)?);
        r.residual("conjugate_kernel", apply_c(&alpha.to_grid(g)?, &k0)?.distance(&kt)?);
        let coords: Vec<C64> = (0..b.dim()).map(|_| c.complex()).collect();
        let f = b.combine(&coords)?;
        r.residual("reproduces_value_at_zero", (f.inner_product(&k0)? - f.coeff(0)).norm());
    }
    Ok(r.finish())
}

fn model_sharp_model_space(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let g = s.grid;
    let mut c = corpus(cfg, "model.sharp_model_space");
    let n = 20;
    let mut r = CheckReport::new("model.sharp_model_space", sweep_params(cfg, n), s.tol_construct);
    let mut smallest = f64::INFINITY;
    for _ in 0..n {
        let mut avoid = Vec::new();
        let d = deg(&mut c, cfg, 6);
        let alpha = c.blaschke(d, &mut avoid);
        let ka = ModelSpaceBasis::new(&alpha, g)?;
        let ks = ModelSpaceBasis::new(&alpha.sharp(), g)?;
        r.residual("jstar_into_k_alpha_sharp", restrict_with(ka.functions(), &ks, |f| Ok(f.sharp()))?.leakage);
        r.residual("jstar_onto", restrict_with(ks.functions(), &ka, |f| Ok(f.sharp()))?.leakage);
        let a = c.zero(&[]);
        let kb = ModelSpaceBasis::new(&BlaschkeProduct::factor(a)?, g)?;
        smallest = smallest.min(restrict_with(kb.functions(), &kb, |f| Ok(f.sharp()))?.leakage);
    }
    r.count("nonreal_factor_preserved", (smallest < s.demo_floor) as usize);
    r.diagnostic("smallest_nonreal_leakage", smallest);
    Ok(r.finish())
}

fn model_c_theta_preserves(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let g = s.grid;
    let mut c = corpus(cfg, "model.c_theta_preserves");
    let n = 20;
    let mut r = CheckReport::new("model.c_theta_preserves", sweep_params(cfg, n), s.tol_construct);
    for _ in 0..n {
        let mut avoid = Vec::new();
        let d = deg(&mut c, cfg, 6);
        let theta = c.blaschke(d, &mut avoid);
        let b = ModelSpaceBasis::new(&theta, g)?;
        let t = theta.to_grid(g)?;
        let res = restrict_with(b.functions(), &b, |f| apply_c(&t, f))?;
        r.residual("leakage", res.leakage);
        r.residual("conjugation", conjugation_residual(&res.matrix));
    }
    // θ = z²: C(1) = z, C(z) = 1 and C A_z C = A_z*.
    let z2 = BlaschkeProduct::z_power(2);
    let b = ModelSpaceBasis::new(&z2, g)?;
    let t = z2.to_grid(g)?;
    let cm = restrict_with(b.functions(), &b, |f| apply_c(&t, f))?.matrix;
    let az = truncated_shift(&b)?.entries;
    let cac = anti_anti(&anti_lin(&cm, &az), &cm);
    let want = DMatrix::from_row_slice(2, 2, &[C64::new(0.0, 0.0), one(), C64::new(0.0, 0.0), C64::new(0.0, 0.0)]);
    r.residual("z_squared_example", max_abs(&(cac - want)));
    Ok(r.finish())
}

// ---------------------------------------------------------------------------
// conjugations between model spaces and shift-invariant subspaces
// ---------------------------------------------------------------------------

fn conj_containment_equivalence(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let mut c = corpus(cfg, "conj.containment_equivalence");
    let n = 100;
    let mut r = CheckReport::new("conj.containment_equivalence", sweep_params(cfg, n), s.tol_composed);
    let mut smallest_violation = f64::INFINITY;
    let mut positives = 0;
    for i in 0..n {
        let mut avoid = Vec::new();
        let da = c.degree(1, 3.min(cfg.max_degree));
        let alpha = c.blaschke(da, &mut avoid);
        let extra_deg = c.degree(0, cfg.max_degree.saturating_sub(da).min(3));
        let extra = c.blaschke(extra_deg, &mut avoid);
        let theta = alpha.multiply(&extra);
        let dg = c.degree(0, 2);
        let gamma = c.blaschke(dg, &mut avoid);
        let take = c.degree(0, extra.degree());
        let part = BlaschkeProduct::from_zeros(c.choose(extra.zeros(), take))?;
        let good = gamma.multiply(&alpha).multiply(&part).with_lambda(c.unimodular())?;
        let beta = if i % 2 == 0 {
            good
        } else if c.coin() {
            // a foreign zero that γθ does not have
            let foreign = c.zero(&avoid);
            good.multiply(&BlaschkeProduct::factor(foreign)?)
        } else {
            // drop one zero of γα
            let zs = good.zeros();
            let drop = c.degree(0, gamma.degree() + alpha.degree() - 1);
            let target = gamma.multiply(&alpha).zeros()[drop];
            let idx = zs.iter().position(|z| (z - target).norm() < 1e-12).unwrap_or(0);
            let mut kept = zs.to_vec();
            kept.remove(idx);
            BlaschkeProduct::new(good.lambda(), kept)?
        };
        let v = theorems::mz_conjugation_containment(s, &beta, &gamma, &alpha, &theta)?;
        r.flag("verdict_disagreement", v.contained != v.divisible);
        if i % 2 == 0 {
            r.flag("positive_not_divisible", !v.divisible);
            positives += 1;
        } else {
            r.flag("violation_divisible", v.divisible);
            smallest_violation = smallest_violation.min(v.leakage);
        }
    }
    r.count("violations_inside_margin", (smallest_violation < s.demo_floor) as usize);
    r.diagnostic("positives", positives as f64);
    r.diagnostic("smallest_violation_leakage", smallest_violation);
    Ok(r.finish())
}

fn conj_commuting_containment_rigidity(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let mut c = corpus(cfg, "conj.commuting_containment_rigidity");
    let n = 30;
    let mut r = CheckReport::new("conj.commuting_containment_rigidity", sweep_params(cfg, n), s.tol_composed);
    let mut rejected = 0;
    for i in 0..n {
        let mut avoid = Vec::new();
        let da = c.degree(1, 2);
        let alpha = c.blaschke(da, &mut avoid);
        let (gamma, q) = match i % 5 {
            0 => (BlaschkeProduct::one(), BlaschkeProduct::constant(c.unimodular())?),
            1 => {
                let d = c.degree(1, 2);
                (BlaschkeProduct::one(), c.blaschke(d, &mut avoid))
            }
            2 => {
                let reals = c.coin() as usize;
                (BlaschkeProduct::one(), c.self_sharp(1, reals, &mut avoid))
            }
            3 => {
                let d = c.degree(1, 2);
                let gamma = c.blaschke(d, &mut avoid);
                let q = gamma.sharp();
                (gamma, q)
            }
            _ => {
                let (d1, d2) = (c.degree(1, 2), c.degree(1, 2));
                (c.blaschke(d1, &mut avoid), c.blaschke(d2, &mut avoid))
            }
        };
        let beta = gamma.multiply(&alpha).multiply(&q);
        let ed = c.degree(0, 1);
        let extra = c.blaschke(ed, &mut avoid);
        let theta = alpha.multiply(&q).multiply(&extra).sharp();
        let rep = theorems::verify_commuting_containment(s, &alpha, &theta, &beta, &gamma)?;
        r.absorb(&rep);
        if gamma.is_constant() && !q.is_constant() && rep.diagnostics["involution"] >= s.tol_composed {
            rejected += 1;
        }
    }
    r.diagnostic("rejected_nonconstant_quotients", rejected as f64);
    Ok(r.finish())
}

fn conj_involution_criterion(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let mut c = corpus(cfg, "conj.involution_criterion");
    let n = 100;
    let mut r = CheckReport::new("conj.involution_criterion", sweep_params(cfg, n), s.tol_composed);
    let mut positives = 0;
    for i in 0..n {
        let mut avoid = Vec::new();
        let (alpha, theta) = match i % 5 {
            0 => {
                if i == 0 {
                    theorems::swap_pair_products(C64::new(0.0, 0.5), C64::new(0.3, 0.2))?
                } else {
                    let zs = c.zeros(2, &mut avoid);
                    theorems::swap_pair_products(zs[0], zs[1])?
                }
            }
            1 => {
                let d = deg(&mut c, cfg, 6);
                let alpha = c.blaschke(d, &mut avoid);
                let betas = enumerate_betas(&alpha)?;
                let pick = c.degree(0, betas.len() - 1);
                let theta = betas[pick].with_lambda(c.unimodular())?;
                (alpha, theta)
            }
            2 => {
                let d = deg(&mut c, cfg, 6);
                let alpha = c.blaschke(d, &mut avoid);
                let theta = if c.coin() { alpha.clone() } else { alpha.sharp() };
                (alpha, theta)
            }
            3 => {
                let (d1, d2) = (deg(&mut c, cfg, 6), deg(&mut c, cfg, 6));
                (c.blaschke(d1, &mut avoid), c.blaschke(d2, &mut avoid))
            }
            _ => {
                // one zero replaced by a foreign one
                let d = deg(&mut c, cfg, 6);
                let alpha = c.blaschke(d, &mut avoid);
                let mut zs = alpha.zeros().to_vec();
                zs[0] = c.zero(&avoid);
                (alpha, BlaschkeProduct::from_zeros(zs)?)
            }
        };
        let f = theorems::involution_faces(s, &alpha, &theta, cfg.seed ^ i as u64)?;
        r.flag("disagreement", !f.agree(s.tol_composed));
        positives += (f.involution < s.tol_composed) as usize;
    }
    r.diagnostic("involutions", positives as f64);
    Ok(r.finish())
}

fn conj_beta_construction(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let g = s.grid;
    let mut c = corpus(cfg, "conj.beta_construction");
    let n = 100;
    let mut r = CheckReport::new("conj.beta_construction", sweep_params(cfg, n), s.tol_composed);
    let mut built = 0;
    for i in 0..n {
        let mut avoid = Vec::new();
        let d = deg(&mut c, cfg, 6);
        let alpha = c.blaschke(d, &mut avoid);
        let k = c.degree(1, d);
        let mut zs: Vec<C64> = c
            .choose(alpha.zeros(), k)
            .into_iter()
            .map(|a| if c.coin() { a } else { a.conj() })
            .collect();
        if i % 2 == 1 {
            if c.coin() || zs.len() < 2 {
                zs.push(c.zero(&avoid));
            } else {
                // both a and conj(a), with a a simple zero of α
                zs[1] = zs[0].conj();
            }
        }
        let theta = BlaschkeProduct::new(c.unimodular(), zs)?;
        let admissible = membership_theta_h2(
            &sharp_product(&alpha).to_grid(g)?,
            &sharp_product(&theta),
            s.tol_composed,
        )?
        .holds;
        match construct_beta(&alpha, &theta) {
            Ok(beta) => {
                built += 1;
                r.flag("built_but_not_admissible", !admissible);
                r.flag("theta_divides_beta", !theta.divides(&beta));
                r.residual("sharp_products", sharp_product_residual(&beta, &alpha, g)?);
                let listed = enumerate_betas(&alpha)?
                    .iter()
                    .any(|b| b.equal_up_to_unimodular(&beta).is_some());
                r.flag("beta_enumerated", !listed);
            }
            Err(Error::NotConstructible(_)) => r.flag("refused_but_admissible", admissible),
            Err(e) => return Err(e),
        }
    }
    r.diagnostic("constructed", built as f64);
    Ok(r.finish())
}

fn conj_beta_enumeration(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let g = s.grid;
    let mut c = corpus(cfg, "conj.beta_enumeration");
    let n = 20;
    let mut r = CheckReport::new("conj.beta_enumeration", sweep_params(cfg, n), s.tol_composed);
    for i in 0..n {
        let mut avoid = Vec::new();
        let alpha = match i % 3 {
            0 => {
                let d = deg(&mut c, cfg, 6);
                c.blaschke(d, &mut avoid)
            }
            1 => {
                // repeated and conjugate-paired zeros
                let a = c.zero(&avoid);
                BlaschkeProduct::from_zeros(vec![a, a, a.conj()])?
            }
            _ => {
                let pairs = c.degree(1, 2);
                c.self_sharp(pairs, 1, &mut avoid)
            }
        };
        let betas = enumerate_betas(&alpha)?;
        let aa = sharp_product(&alpha).to_grid(g)?;
        for (j, beta) in betas.iter().enumerate() {
            r.residual("sharp_products", theorems::sup_distance(&sharp_product(beta).to_grid(g)?, &aa)?);
            r.flag("duplicate", betas[..j].iter().any(|b| b.equal_up_to_unimodular(beta).is_some()));
            let rebuilt = construct_beta(&alpha, beta)?;
            r.flag("construct_round_trip", rebuilt.equal_up_to_unimodular(beta).is_none());
        }
        r.flag("contains_alpha", !betas.iter().any(|b| b.equal_up_to_unimodular(&alpha).is_some()));
        r.flag(
            "contains_alpha_sharp",
            !betas.iter().any(|b| b.equal_up_to_unimodular(&alpha.sharp()).is_some()),
        );
    }
    Ok(r.finish())
}

fn conj_shift_invariant_map(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let g = s.grid;
    let mut c = corpus(cfg, "conj.shift_invariant_map");
    let n = 12;
    let mut r = CheckReport::new("conj.shift_invariant_map", sweep_params(cfg, n), s.tol_composed);
    let mut demos = 0;
    for i in 0..n {
        let mut avoid = Vec::new();
        let d = c.degree(1, 4.min(cfg.max_degree));
        let alpha = c.blaschke(d, &mut avoid);
        let theta = match i % 4 {
            0 => alpha.clone(),
            1 => alpha.sharp(),
            2 => {
                let k = c.degree(1, d);
                let zs: Vec<C64> = c
                    .choose(alpha.zeros(), k)
                    .into_iter()
                    .map(|a| if c.coin() { a } else { a.conj() })
                    .collect();
                BlaschkeProduct::new(c.unimodular(), zs)?
            }
            _ => {
                let mut zs = alpha.zeros().to_vec();
                zs.push(c.zero(&avoid));
                BlaschkeProduct::from_zeros(zs)?
            }
        };
        let rep = theorems::verify_shift_invariant_map(s, &alpha, &theta, cfg.seed ^ i as u64)?;
        if rep.params["admissible"] == json!(false) {
            demos += 1;
            r.diagnostic_max("demo_floor_ratio", rep.residuals["floor_ratio"]);
        } else {
            r.absorb(&rep);
        }
        r.flag("instance_failed", !rep.pass);
        if i % 4 == 1 {
            // θ = α#: the conjugation is a constant multiple of J*.
            let beta = construct_beta(&alpha, &theta)?;
            let lam = alpha
                .sharp()
                .equal_up_to_unimodular(&beta)
                .ok_or_else(|| Error::Invariant("β is not a multiple of α#".into()))?;
            let (ag, bg) = (alpha.to_grid(g)?, beta.to_grid(g)?);
            let f = c.probe(g, PROBE_SUPPORT)?;
            let got = apply_c_jstar_c(&bg, &ag, &f)?;
            r.residual("sharp_case_is_lambda_jstar", got.distance(&f.sharp().scale(lam))?);
        }
    }
    r.diagnostic("demonstrations", demos as f64);
    Ok(r.finish())
}

fn conj_swap_pair_example(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let mut c = corpus(cfg, "conj.swap_pair_example");
    let n = 4;
    let mut r = CheckReport::new(
        "conj.swap_pair_example",
        json!({"seed": cfg.seed, "instances": n, "a": [0.0, 0.5], "b": [0.3, 0.2]}),
        s.tol_construct,
    );
    for i in 0..n {
        let (a, b) = if i == 0 {
            (C64::new(0.0, 0.5), C64::new(0.3, 0.2))
        } else {
            let zs = c.zeros(2, &mut Vec::new());
            (zs[0], zs[1])
        };
        let rep = theorems::swap_pair(s, a, b, cfg.seed ^ i as u64)?;
        r.absorb(&rep);
    }
    Ok(r.finish())
}

fn conj_no_mz_conjugation_between_shift_invariant(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let mut c = corpus(cfg, "conj.no_mz_conjugation_between_shift_invariant");
    let mut avoid = Vec::new();
    let (d1, d2) = (deg(&mut c, cfg, 6), deg(&mut c, cfg, 6));
    let alpha = c.blaschke(d1, &mut avoid);
    let theta = c.blaschke(d2, &mut avoid);
    let mut r = theorems::demo_no_mz_conjugation_between(s, &alpha, &theta, 10 * cfg.trials, cfg.seed)?;
    r.params["max_degree"] = json!(cfg.max_degree);
    Ok(r)
}

// ---------------------------------------------------------------------------
// truncated Toeplitz operators
// ---------------------------------------------------------------------------

fn tto_sarason_symmetry(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let g = s.grid;
    let mut c = corpus(cfg, "tto.sarason_symmetry");
    let (thetas, symbols) = (10, 20);
    let mut r = CheckReport::new(
        "tto.sarason_symmetry",
        json!({"seed": cfg.seed, "thetas": thetas, "symbols": symbols}),
        s.tol_composed,
    );
    for _ in 0..thetas {
        let mut avoid = Vec::new();
        let d = deg(&mut c, cfg, 6);
        let theta = c.blaschke(d, &mut avoid);
        let b = ModelSpaceBasis::new(&theta, g)?;
        let t = theta.to_grid(g)?;
        let cm = restrict_with(b.functions(), &b, |f| apply_c(&t, f))?.matrix;
        for j in 0..symbols {
            let phi = if j % 2 == 0 { c.analytic(g, 4)? } else { c.trig(g, 4)? };
            let a = tto_matrix(&phi, &b)?.entries;
            let cac = anti_anti(&anti_lin(&cm, &a), &cm);
            r.residual("c_theta_symmetric", max_abs(&(cac - a.adjoint())));
        }
    }
    Ok(r.finish())
}

fn tto_sharp_intertwining(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let g = s.grid;
    let mut c = corpus(cfg, "tto.sharp_intertwining");
    let n = 10;
    let mut r = CheckReport::new("tto.sharp_intertwining", sweep_params(cfg, n), s.tol_composed);
    for _ in 0..n {
        let mut avoid = Vec::new();
        let d = deg(&mut c, cfg, 6);
        let theta = c.blaschke(d, &mut avoid);
        let k = ModelSpaceBasis::new(&theta, g)?;
        let ks = ModelSpaceBasis::new(&theta.sharp(), g)?;
        // J*: K_θ# → K_θ
        let rj = restrict_with(ks.functions(), &k, |f| Ok(f.sharp()))?;
        r.residual("leakage", rj.leakage);
        for _ in 0..3 {
            let phi = c.trig(g, 4)?;
            let a = tto_matrix(&phi, &k)?.entries;
            let a_sharp = tto_matrix(&phi.sharp(), &ks)?.entries;
            // A_φ^θ J* = J* A_φ#^θ# as maps K_θ# → K_θ.
            r.residual("intertwining", max_abs(&(lin_anti(&a, &rj.matrix) - anti_lin(&rj.matrix, &a_sharp))));
        }
    }
    Ok(r.finish())
}

fn tto_commuting_conjugation_decomposition(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let mut c = corpus(cfg, "tto.commuting_conjugation_decomposition");
    let n = 10;
    let mut r = CheckReport::new("tto.commuting_conjugation_decomposition", sweep_params(cfg, n), s.tol_composed);
    for _ in 0..n {
        let mut avoid = Vec::new();
        let d = deg(&mut c, cfg, 6);
        let theta = c.blaschke(d, &mut avoid);
        let rep = theorems::verify_commuting_tto_decomposition(s, &theta, c.unimodular())?;
        r.absorb(&rep);
    }
    Ok(r.finish())
}

fn tto_self_sharp_rigidity(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let mut c = corpus(cfg, "tto.self_sharp_rigidity");
    let n = 10;
    let mut r = CheckReport::new("tto.self_sharp_rigidity", sweep_params(cfg, n), s.tol_composed);
    for i in 0..n {
        let mut avoid = Vec::new();
        let pairs = c.degree(0, (cfg.max_degree / 2).min(2));
        let reals = if pairs == 0 { c.degree(1, 2) } else { c.degree(0, 1) };
        let theta = c.self_sharp(pairs, reals, &mut avoid);
        let rep = theorems::verify_self_sharp_rigidity(s, &theta, cfg.seed ^ i as u64)?;
        r.absorb(&rep);
    }
    Ok(r.finish())
}

fn tto_intertwining_conjugation_symbol(cfg: &SuiteConfig) -> Result<CheckReport> {
    let s = &cfg.settings;
    let g = s.grid;
    let mut c = corpus(cfg, "tto.intertwining_conjugation_symbol");
    let n = 10;
    let mut r = CheckReport::new("tto.intertwining_conjugation_symbol", sweep_params(cfg, n), s.tol_composed);
    let mut both = 0;
    for i in 0..n {
        let mut avoid = Vec::new();
        let d = deg(&mut c, cfg, 6);
        let theta = c.blaschke(d, &mut avoid);
        let lam = LaurentFunction::constant(g, c.unimodular());
        // λ + θ·h has the same compression as λ.
        let psi = if i % 2 == 0 {
            lam
        } else {
            let h = c.analytic(g, 2)?;
            lam.add(&theta.to_grid(g)?.multiply(&h)?)?
        };
        let rep = theorems::verify_intertwining_tto_symbol(s, &theta, &psi, cfg.seed ^ i as u64)?;
        r.absorb(&rep);
        let (disagree, ok) = theorems::intertwining_integrity(s, &theta, cfg.seed ^ i as u64)?;
        r.count("integrity_disagreements", disagree);
        both += ok;
    }
    r.diagnostic("candidates_satisfying_both", both as f64);
    Ok(r.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn registry_ids_are_unique_and_plentiful() {
        let ids: BTreeSet<&str> = registry().iter().map(|c| c.id).collect();
        assert_eq!(ids.len(), registry().len());
        assert!(ids.len() >= 25);
    }

    #[test]
    fn unknown_ids_are_rejected() {
        let cfg = SuiteConfig::default();
        assert!(run_all(&cfg, Some("no.such.check")).is_err());
        assert!(run_with_params("no.such.check", &json!({}), &cfg).is_err());
        assert!(run_with_params("fourier.parseval", &json!({}), &cfg).is_err());
    }

    #[test]
    fn params_dispatch_reports_malformed_fields() {
        let cfg = SuiteConfig::default();
        let err = run_with_params("conj.involution_criterion", &json!({"alpha": {"lambda": [1.0, 0.0]}}), &cfg)
            .unwrap_err();
        assert!(matches!(err, Error::Malformed(_)), "{err}");
    }
}
