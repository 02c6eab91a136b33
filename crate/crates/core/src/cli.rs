//! Command-line driver. Exit codes: 0 when every check passes, 1 when a
//! check fails (or a requested object does not exist), 2 on usage,
//! configuration or input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::fourier::{GridParams, C64};
use crate::suite::{self, SuiteConfig};
use crate::theorems::{self, CheckReport, Settings};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Run configuration as read from `--config`; every field is optional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub grid_log2: u32,
    pub band: usize,
    pub tol_construct: f64,
    pub tol_composed: f64,
    pub demo_floor: f64,
    pub seed: u64,
    pub max_degree: usize,
    pub trials: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let s = SuiteConfig::default();
        Self {
            grid_log2: 12,
            band: 1024,
            tol_construct: s.settings.tol_construct,
            tol_composed: s.settings.tol_composed,
            demo_floor: s.settings.demo_floor,
            seed: s.seed,
            max_degree: s.max_degree,
            trials: s.trials,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Checks the invariants and builds the suite configuration.
    pub fn to_suite(&self) -> Result<SuiteConfig> {
        if !(3..=22).contains(&self.grid_log2) {
            return Err(Error::InvalidGrid(format!("grid_log2 = {} is outside 3..=22", self.grid_log2)));
        }
        let size = 1usize << self.grid_log2;
        let limit = size / 2 - 1;
        if self.band == 0 || self.band > limit {
            return Err(Error::InvalidGrid(format!(
                "band = {} must lie in 1..={limit} for a grid of {size} points",
                self.band
            )));
        }
        for (name, v) in [
            ("tol_construct", self.tol_construct),
            ("tol_composed", self.tol_composed),
            ("demo_floor", self.demo_floor),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Parameter(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !(1..=6).contains(&self.max_degree) {
            return Err(Error::Parameter(format!("max_degree = {} is outside 1..=6", self.max_degree)));
        }
        if self.trials == 0 {
            return Err(Error::Parameter("trials must be ≥ 1".into()));
        }
        Ok(SuiteConfig {
            settings: Settings {
                grid: GridParams::new(size, self.band)?,
                tol_construct: self.tol_construct,
                tol_composed: self.tol_composed,
                demo_floor: self.demo_floor,
            },
            seed: self.seed,
            max_degree: self.max_degree,
            trials: self.trials,
        })
    }
}

#[derive(Debug, Parser)]
#[command(name = "conjulab", version, about = "Numerical checks for conjugations, model spaces and truncated Toeplitz operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed; overrides the configuration file.
    #[arg(long, env = "CONJULAB_SEED")]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the registered checks and write a JSON report.
    VerifyAll {
        #[command(flatten)]
        common: Common,
        /// Write the report here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Run only this check.
        #[arg(long)]
        check: Option<String>,
        /// Print the registered check ids and exit.
        #[arg(long)]
        list_checks: bool,
    },
    /// Build β with θ ≤ β and ββ# = αα#.
    ConstructBeta {
        /// α as JSON, or @path to a JSON file.
        alpha: String,
        /// θ as JSON, or @path to a JSON file.
        theta: String,
    },
    /// List every β with ββ# = αα#, one per class up to a constant.
    EnumerateBetas {
        /// α as JSON, or @path to a JSON file.
        alpha: String,
    },
    /// Run one check, on explicit parameters or as its seeded sweep.
    Check {
        id: String,
        /// Parameters as JSON, or @path to a JSON file.
        #[arg(long)]
        params: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// The zero-swap pair α = b_a·b_b, θ = b_a·b_conj(b), e.g. `0.5i 0.3+0.2i`.
    SwapPair {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[command(flatten)]
        common: Common,
    },
}

/// Parses `0.3`, `0.5i`, `-i`, `0.3+0.2i`, `-0.1-0.4i`.
pub fn parse_complex(text: &str) -> Result<C64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Malformed(format!("cannot parse {text:?} as a complex number"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return t.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    // Split at the last sign that is not the leading one or an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |s: &str| -> Result<f64> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => s.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(C64::new(re, imag(&body[k..])?))
        }
        None => Ok(C64::new(0.0, imag(body)?)),
    }
}

fn read_json_arg(arg: &str) -> Result<Value> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)?,
        None => arg.to_string(),
    };
    Ok(serde_json::from_str(&text)?)
}

fn read_blaschke(arg: &str, name: &str) -> Result<BlaschkeProduct> {
    let v = read_json_arg(arg)?;
    serde_json::from_value(v).map_err(|e| Error::Malformed(format!("{name}: {e}")))
}

fn suite_config(common: &Common) -> Result<SuiteConfig> {
    let mut rc = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = common.seed {
        rc.seed = seed;
    }
    rc.to_suite()
}

fn print_json(v: &impl Serialize) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn report_exit(reports: &[CheckReport]) -> i32 {
    if reports.iter().all(|r| r.pass) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn summary(reports: &[CheckReport]) {
    let mut err = std::io::stderr().lock();
    for r in reports {
        let _ = writeln!(err, "{} {}", if r.pass { "PASS" } else { "FAIL" }, r.check_id);
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    let _ = writeln!(err, "{} checks, {} failed", reports.len(), failed);
}

fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::VerifyAll {
            common,
            report,
            check,
            list_checks,
        } => {
            if list_checks {
                for c in suite::registry() {
                    println!("{}\t{}", c.id, c.summary);
                }
                return Ok(EXIT_PASS);
            }
            let cfg = suite_config(&common)?;
            let reports = suite::run_all(&cfg, check.as_deref())?;
            match report {
                Some(path) => {
                    let mut text = serde_json::to_string_pretty(&reports)?;
                    text.push('\n');
                    std::fs::write(path, text)?;
                }
                None => print_json(&reports)?,
            }
            summary(&reports);
            Ok(report_exit(&reports))
        }
        Command::ConstructBeta { alpha, theta } => {
            let alpha = read_blaschke(&alpha, "alpha")?;
            let theta = read_blaschke(&theta, "theta")?;
            match theorems::construct_beta(&alpha, &theta) {
                Ok(beta) => {
                    print_json(&beta)?;
                    Ok(EXIT_PASS)
                }
                Err(e @ Error::NotConstructible(_)) => {
                    eprintln!("{e}");
                    Ok(EXIT_FAIL)
                }
                Err(e) => Err(e),
            }
        }
        Command::EnumerateBetas { alpha } => {
            let alpha = read_blaschke(&alpha, "alpha")?;
            print_json(&theorems::enumerate_betas(&alpha)?)?;
            Ok(EXIT_PASS)
        }
        Command::Check { id, params, common } => {
            let cfg = suite_config(&common)?;
            let report = match params {
                Some(p) => suite::run_with_params(&id, &read_json_arg(&p)?, &cfg)?,
                None => suite::run_all(&cfg, Some(&id))?.remove(0),
            };
            print_json(&report)?;
            Ok(report_exit(std::slice::from_ref(&report)))
        }
        Command::SwapPair { a, b, common } => {
            let cfg = suite_config(&common)?;
            let report = theorems::swap_pair(&cfg.settings, parse_complex(&a)?, parse_complex(&b)?, cfg.seed)?;
            print_json(&report)?;
            Ok(report_exit(std::slice::from_ref(&report)))
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        let cases = [
            ("0.5i", C64::new(0.0, 0.5)),
            ("0.3+0.2i", C64::new(0.3, 0.2)),
            ("-0.1-0.4i", C64::new(-0.1, -0.4)),
            ("0.25", C64::new(0.25, 0.0)),
            ("-i", C64::new(0.0, -1.0)),
            ("1e-1+2e-1i", C64::new(0.1, 0.2)),
        ];
        for (text, want) in cases {
            assert_eq!(parse_complex(text).unwrap(), want, "{text}");
        }
        for bad in ["", "i+", "0.3+", "x"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::default().to_suite().is_ok());
        let over = RunConfig {
            band: 2048,
            ..RunConfig::default()
        };
        assert!(over.to_suite().is_err());
        let zero = RunConfig {
            trials: 0,
            ..RunConfig::default()
        };
        assert!(zero.to_suite().is_err());
        let deg = RunConfig {
            max_degree: 7,
            ..RunConfig::default()
        };
        assert!(deg.to_suite().is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"bogus": 1}"#).is_err());
        let partial: RunConfig = serde_json::from_str(r#"{"seed": 9}"#).unwrap();
        assert_eq!(partial.seed, 9);
        assert_eq!(partial.band, 1024);
    }
}
