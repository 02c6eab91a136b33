//! Seeded random inputs for the checks.
//!
//! Every check draws from its own ChaCha8 stream, keyed by the run seed and a
//! hash of the check name, so adding or reordering checks never changes the
//! inputs of another one. Zeros are kept at modulus `0.05..=0.6` and at least
//! [`MIN_SEPARATION`] apart (from each other and from each other's
//! conjugates), which keeps divisibility verdicts unambiguous and coefficient
//! tails short.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blaschke::BlaschkeProduct;
use crate::error::Result;
use crate::fourier::{GridParams, LaurentFunction, C64};

pub const MIN_RADIUS: f64 = 0.05;
pub const MAX_RADIUS: f64 = 0.6;
pub const MIN_SEPARATION: f64 = 0.08;

/// FNV-1a, used only to turn a check name into a stream number.
fn stream_of(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

pub struct Corpus {
    rng: ChaCha8Rng,
}

impl Corpus {
    pub fn new(seed: u64, name: &str) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_of(name));
        Self { rng }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn unimodular(&mut self) -> C64 {
        C64::from_polar(1.0, self.rng.gen_range(0.0..std::f64::consts::TAU))
    }

    pub fn complex(&mut self) -> C64 {
        C64::new(self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0))
    }

    fn separated(a: C64, avoid: &[C64]) -> bool {
        avoid
            .iter()
            .all(|b| (a - b).norm() >= MIN_SEPARATION && (a - b.conj()).norm() >= MIN_SEPARATION)
    }

    /// A nonreal zero, separated from `avoid`, from the conjugates of `avoid`
    /// and from its own conjugate.
    pub fn zero(&mut self, avoid: &[C64]) -> C64 {
        loop {
            let r = self.rng.gen_range(MIN_RADIUS..=MAX_RADIUS);
            let a = C64::from_polar(r, self.rng.gen_range(0.0..std::f64::consts::TAU));
            if a.im.abs() >= MIN_SEPARATION / 2.0 && Self::separated(a, avoid) {
                return a;
            }
        }
    }

    /// A real zero separated from `avoid` and their conjugates.
    pub fn real_zero(&mut self, avoid: &[C64]) -> C64 {
        loop {
            let a = C64::new(self.rng.gen_range(-MAX_RADIUS..=MAX_RADIUS), 0.0);
            if a.re.abs() >= MIN_RADIUS && Self::separated(a, avoid) {
                return a;
            }
        }
    }

    /// `k` fresh nonreal zeros; they are appended to `avoid` as they are drawn.
    pub fn zeros(&mut self, k: usize, avoid: &mut Vec<C64>) -> Vec<C64> {
        (0..k)
            .map(|_| {
                let a = self.zero(avoid);
                avoid.push(a);
                a
            })
            .collect()
    }

    /// A product of the given degree with fresh zeros and a random constant.
    pub fn blaschke(&mut self, degree: usize, avoid: &mut Vec<C64>) -> BlaschkeProduct {
        let zeros = self.zeros(degree, avoid);
        let lambda = self.unimodular();
        BlaschkeProduct::new(lambda, zeros).expect("corpus zeros lie in the disk")
    }

    /// A product with `θ# = θ`: conjugate pairs, real zeros and `λ = ±1`.
    pub fn self_sharp(&mut self, pairs: usize, reals: usize, avoid: &mut Vec<C64>) -> BlaschkeProduct {
        let mut zeros = Vec::new();
        for a in self.zeros(pairs, avoid) {
            zeros.push(a);
            zeros.push(a.conj());
        }
        for _ in 0..reals {
            let a = self.real_zero(avoid);
            avoid.push(a);
            zeros.push(a);
        }
        let lambda = if self.rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        BlaschkeProduct::new(C64::new(lambda, 0.0), zeros).expect("corpus zeros lie in the disk")
    }

    /// Random sub-multiset split `α = u·v`, returned as `(u, v)` with the
    /// constant carried by `u`.
    pub fn split(&mut self, alpha: &BlaschkeProduct) -> (BlaschkeProduct, BlaschkeProduct) {
        let mut u = Vec::new();
        let mut v = Vec::new();
        for &a in alpha.zeros() {
            if self.rng.gen_bool(0.5) {
                u.push(a);
            } else {
                v.push(a);
            }
        }
        (
            BlaschkeProduct::new(alpha.lambda(), u).expect("sub-multiset of valid zeros"),
            BlaschkeProduct::from_zeros(v).expect("sub-multiset of valid zeros"),
        )
    }

    /// Random sub-multiset of the given zeros, of exactly `k` elements.
    pub fn choose(&mut self, zeros: &[C64], k: usize) -> Vec<C64> {
        let mut idx: Vec<usize> = (0..zeros.len()).collect();
        idx.shuffle(&mut self.rng);
        idx.truncate(k);
        idx.sort_unstable();
        idx.into_iter().map(|i| zeros[i]).collect()
    }

    /// A real trigonometric polynomial `h = Σ_{|n|≤deg} h_n z^n`,
    /// `h_{−n} = conj(h_n)`, with coefficients of size about `scale`.
    pub fn real_trig(&mut self, grid: GridParams, degree: usize, scale: f64) -> Result<LaurentFunction> {
        let mut terms = vec![(0, C64::new(scale * self.rng.gen_range(-1.0..1.0), 0.0))];
        for n in 1..=degree as i64 {
            let c = self.complex() * scale;
            terms.push((n, c));
            terms.push((-n, c.conj()));
        }
        LaurentFunction::from_terms(grid, &terms)
    }

    /// `exp(i·h)` for a random real trigonometric polynomial `h`.
    pub fn phase(&mut self, grid: GridParams, degree: usize) -> Result<LaurentFunction> {
        let scale = self.rng.gen_range(0.2..1.0);
        let h = self.real_trig(grid, degree, scale)?;
        exp_i(&h)
    }

    /// `exp(i·h)` with `h` real and symmetric (real cosine coefficients), so
    /// the phase is symmetric and unimodular.
    pub fn symmetric_phase(&mut self, grid: GridParams, degree: usize) -> Result<LaurentFunction> {
        let scale = self.rng.gen_range(0.2..1.0);
        let mut terms = vec![(0, C64::new(scale * self.rng.gen_range(-1.0..1.0), 0.0))];
        for n in 1..=degree as i64 {
            let c = C64::new(scale * self.rng.gen_range(-1.0..1.0), 0.0);
            terms.push((n, c));
            terms.push((-n, c));
        }
        exp_i(&LaurentFunction::from_terms(grid, &terms)?)
    }

    /// Analytic polynomial `Σ_{n=0}^{deg} c_n z^n` with random coefficients.
    pub fn analytic(&mut self, grid: GridParams, degree: usize) -> Result<LaurentFunction> {
        let terms: Vec<(i64, C64)> = (0..=degree as i64).map(|n| (n, self.complex())).collect();
        LaurentFunction::from_terms(grid, &terms)
    }

    /// Trigonometric polynomial with both analytic and antianalytic parts.
    pub fn trig(&mut self, grid: GridParams, degree: usize) -> Result<LaurentFunction> {
        let d = degree as i64;
        let terms: Vec<(i64, C64)> = (-d..=d).map(|n| (n, self.complex())).collect();
        LaurentFunction::from_terms(grid, &terms)
    }

    /// Unit-norm probe with random coefficients on `|n| ≤ support`.
    pub fn probe(&mut self, grid: GridParams, support: usize) -> Result<LaurentFunction> {
        let f = self.trig(grid, support)?;
        let n = f.norm();
        Ok(f.scale(C64::new(1.0 / n, 0.0)))
    }

    /// Unit-norm probe in `H²` with random coefficients on `0..=support`.
    pub fn analytic_probe(&mut self, grid: GridParams, support: usize) -> Result<LaurentFunction> {
        let f = self.analytic(grid, support)?;
        let n = f.norm();
        Ok(f.scale(C64::new(1.0 / n, 0.0)))
    }

    pub fn degree(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }
}

/// Pointwise `exp(i·h)`, resampled on the grid.
pub fn exp_i(h: &LaurentFunction) -> Result<LaurentFunction> {
    let samples: Vec<C64> = h
        .samples()
        .iter()
        .map(|s| (C64::new(0.0, 1.0) * s).exp())
        .collect();
    LaurentFunction::from_samples(h.grid(), &samples)
}
