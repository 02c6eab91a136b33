//! Worked examples with hand-computed or independently derived answers.

use conjulab::blaschke::BlaschkeProduct;
use conjulab::fourier::{GridParams, LaurentFunction, C64};
use conjulab::modelspace::{membership_theta_h2, restrict_with, ModelSpaceBasis};
use conjulab::operators::{build_ckl, build_j, build_jstar, build_m, commutes_with_mz, is_c_symmetric};
use conjulab::theorems::{apply_c, construct_beta, enumerate_betas, Settings};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn grid() -> GridParams {
    GridParams::new(1024, 300).unwrap()
}

fn lf(terms: &[(i64, C64)]) -> LaurentFunction {
    LaurentFunction::from_terms(grid(), terms).unwrap()
}

#[test]
fn reflections_on_small_polynomials() {
    let f = lf(&[(0, c(0.0, 1.0)), (1, c(2.0, 0.0))]);
    let want = lf(&[(0, c(0.0, -1.0)), (-1, c(2.0, 0.0))]);
    assert!(f.conj_j().max_coeff_distance(&want).unwrap() < 1e-15);
    let iz = lf(&[(1, c(0.0, 1.0))]);
    let want = lf(&[(1, c(0.0, -1.0))]);
    assert!(iz.sharp().max_coeff_distance(&want).unwrap() < 1e-15);
}

#[test]
fn projection_and_symmetry_examples() {
    let f = lf(&[(1, c(1.0, 0.0)), (-1, c(1.0, 0.0))]);
    assert!(f.project_h2().max_coeff_distance(&lf(&[(1, c(1.0, 0.0))])).unwrap() < 1e-15);
    assert!(f.is_symmetric(1e-12).holds);
    assert!(!lf(&[(1, c(1.0, 0.0)), (-1, c(-1.0, 0.0))]).is_symmetric(1e-12).holds);
    assert!(!lf(&[(0, c(1.0, 0.0)), (1, c(1.0, 0.0))]).is_unimodular(1e-6).holds);
}

#[test]
fn blaschke_constant_term() {
    let b = BlaschkeProduct::factor(c(0.5, 0.0)).unwrap().to_grid(grid()).unwrap();
    assert!((b.coeff(0) - c(0.5, 0.0)).norm() < 1e-14);
    let z2 = BlaschkeProduct::z_power(2).to_grid(grid()).unwrap();
    assert!(z2.max_coeff_distance(&lf(&[(2, c(1.0, 0.0))])).unwrap() < 1e-15);
}

#[test]
fn transposition_conjugation() {
    let h = 8;
    let a = build_ckl(0, 1, h).unwrap();
    let mut v = vec![c(0.0, 0.0); 2 * h + 1];
    let (a0, a1, a2) = (c(1.0, 2.0), c(-0.5, 0.3), c(0.2, -0.7));
    v[h] = a0;
    v[h + 1] = a1;
    v[h + 2] = a2;
    let out = a.apply(&v);
    assert_eq!((out[h], out[h + 1], out[h + 2]), (a1.conj(), a0.conj(), a2.conj()));
    assert!(commutes_with_mz(&build_ckl(0, 2, h).unwrap(), h - 1).unwrap() > 0.5);
}

#[test]
fn c_symmetry_examples() {
    let h = 12;
    let mz = build_m(&lf(&[(1, c(1.0, 0.0))]), h).unwrap();
    assert!(is_c_symmetric(&mz, &build_j(h), h - 2).unwrap() < 1e-15);
    assert!(is_c_symmetric(&mz, &build_jstar(h), h - 2).unwrap() > 1.0);
}

#[test]
fn c_z_squared_on_constants() {
    // C_{z²}(c) = conj(c)·z, which lies in K_{z³}.
    let t = BlaschkeProduct::z_power(2).to_grid(grid()).unwrap();
    let k = c(0.3, -0.8);
    let img = apply_c(&t, &LaurentFunction::constant(grid(), k)).unwrap();
    assert!(img.max_coeff_distance(&lf(&[(1, k.conj())])).unwrap() < 1e-15);
    let b = ModelSpaceBasis::new(&BlaschkeProduct::z_power(3), grid()).unwrap();
    assert!(b.leakage(&img).unwrap() < 1e-14);
}

#[test]
fn membership_examples() {
    let theta = BlaschkeProduct::from_zeros(vec![c(0.2, 0.4)]).unwrap();
    let f = theta.to_grid(grid()).unwrap().shift(3);
    assert!(membership_theta_h2(&f, &theta, 1e-12).unwrap().holds);
    let one = LaurentFunction::constant(grid(), c(1.0, 0.0));
    let v = membership_theta_h2(&one, &BlaschkeProduct::z_power(1), 1e-12).unwrap();
    assert!((v.residual - 1.0).abs() < 1e-14);
}

#[test]
fn jstar_moves_nonreal_model_spaces() {
    let a = c(0.3, 0.4);
    let k = ModelSpaceBasis::new(&BlaschkeProduct::factor(a).unwrap(), grid()).unwrap();
    let ks = ModelSpaceBasis::new(&BlaschkeProduct::factor(a.conj()).unwrap(), grid()).unwrap();
    assert!(restrict_with(k.functions(), &ks, |f| Ok(f.sharp())).unwrap().leakage < 1e-12);
    assert!(restrict_with(k.functions(), &k, |f| Ok(f.sharp())).unwrap().leakage > 0.1);
}

#[test]
fn beta_examples() {
    let z2 = BlaschkeProduct::z_power(2);
    let beta = construct_beta(&z2, &BlaschkeProduct::z_power(1)).unwrap();
    assert!(beta.approx_eq(&z2, 1e-12));
    assert_eq!(enumerate_betas(&z2).unwrap().len(), 1);
    // ψ = β·conj(α#) is symmetric for the constructed β.
    let alpha = BlaschkeProduct::from_zeros(vec![c(0.0, 0.5), c(0.3, 0.2)]).unwrap();
    let theta = BlaschkeProduct::from_zeros(vec![c(0.3, -0.2)]).unwrap();
    let beta = construct_beta(&alpha, &theta).unwrap();
    let s = Settings::default();
    let psi = beta
        .to_grid(s.grid)
        .unwrap()
        .multiply(&alpha.sharp().to_grid(s.grid).unwrap().conj_j())
        .unwrap();
    assert!(psi.is_symmetric(1e-10).holds);
    assert!(psi.is_unimodular(1e-10).holds);
}
