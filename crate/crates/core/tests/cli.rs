use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

const Z2: &str = r#"{"lambda": [1.0, 0.0], "zeros": [[0.0, 0.0, 2]]}"#;
const Z1: &str = r#"{"lambda": [1.0, 0.0], "zeros": [[0.0, 0.0, 1]]}"#;

fn conjulab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conjulab"))
        .args(args)
        .env_remove("CONJULAB_SEED")
        .output()
        .expect("binary runs")
}

fn config(body: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(body.as_bytes()).unwrap();
    f
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn lists_at_least_25_checks() {
    let out = conjulab(&["verify-all", "--list-checks"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).lines().count() >= 25);
}

#[test]
fn band_beyond_half_grid_is_a_config_error() {
    let cfg = config(r#"{"grid_log2": 12, "band": 2048}"#);
    let out = conjulab(&["verify-all", "--config", cfg.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_or_missing_config_is_a_config_error() {
    let cfg = config("{not json");
    assert_eq!(conjulab(&["verify-all", "--config", cfg.path().to_str().unwrap()]).status.code(), Some(2));
    let cfg = config(r#"{"seeds": 3}"#);
    assert_eq!(conjulab(&["verify-all", "--config", cfg.path().to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(conjulab(&["verify-all", "--config", "/nonexistent/conjulab.json"]).status.code(), Some(2));
    let cfg = config(r#"{"trials": 0}"#);
    assert_eq!(conjulab(&["verify-all", "--config", cfg.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn unreachable_demo_floor_fails_the_demonstration() {
    let cfg = config(r#"{"demo_floor": 10.0, "trials": 5}"#);
    let out = conjulab(&[
        "verify-all",
        "--config",
        cfg.path().to_str().unwrap(),
        "--check",
        "conj.no_mz_conjugation_between_shift_invariant",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report[0]["pass"], false);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(conjulab(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(conjulab(&["verify-all", "--check", "no.such.check"]).status.code(), Some(2));
    assert_eq!(conjulab(&["check", "fourier.parseval", "--params", "{}"]).status.code(), Some(2));
}

#[test]
fn construct_beta_on_the_z_squared_pair() {
    let out = conjulab(&["construct-beta", Z2, Z1]);
    assert_eq!(out.status.code(), Some(0));
    let beta = stdout_json(&out);
    assert_eq!(beta["zeros"], serde_json::json!([[0.0, 0.0, 2]]));
    // θθ# does not divide αα#.
    let real = r#"{"lambda": [1.0, 0.0], "zeros": [[0.5, 0.0, 1]]}"#;
    assert_eq!(conjulab(&["construct-beta", Z1, real]).status.code(), Some(1));
}

#[test]
fn malformed_blaschke_json_names_the_field() {
    let out = conjulab(&["enumerate-betas", r#"{"lambda": [1.0, 0.0], "zeros": [[1.5, 0.0, 1]]}"#]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("zeros[0]"));
    assert_eq!(conjulab(&["enumerate-betas", r#"{"zeros": []}"#]).status.code(), Some(2));
}

#[test]
fn enumerate_betas_on_z_squared_is_a_single_class() {
    let out = conjulab(&["enumerate-betas", Z2]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out).as_array().unwrap().len(), 1);
}

#[test]
fn swap_pair_command() {
    let out = conjulab(&["swap-pair", "0.5i", "0.3+0.2i"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["pass"], true);
    assert_eq!(conjulab(&["swap-pair", "0.5i", "0.5i"]).status.code(), Some(2));
    assert_eq!(conjulab(&["swap-pair", "0.5", "0.3+0.2i"]).status.code(), Some(2));
    assert_eq!(conjulab(&["swap-pair", "0.5q", "0.3+0.2i"]).status.code(), Some(2));
}

#[test]
fn check_with_explicit_parameters() {
    let params = format!(r#"{{"beta": {Z2}, "alpha": {Z1}, "theta": {{"lambda": [1.0, 0.0], "zeros": [[0.0, 0.0, 3]]}}}}"#);
    let out = conjulab(&["check", "conj.containment_equivalence", "--params", &params]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["check_id"], "conj.containment_equivalence");
}

#[test]
fn seed_comes_from_the_environment_when_not_given() {
    let out = Command::new(env!("CARGO_BIN_EXE_conjulab"))
        .args(["check", "fourier.parseval"])
        .env("CONJULAB_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["params"]["seed"], 5);
    let out = Command::new(env!("CARGO_BIN_EXE_conjulab"))
        .args(["check", "fourier.parseval", "--seed", "6"])
        .env("CONJULAB_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(stdout_json(&out)["params"]["seed"], 6);
}
