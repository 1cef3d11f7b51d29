//! Seeded synthetic series: random walks, and walks with one subsequence
//! copied to a second non-overlapping spot under additive noise.

use std::io::{self, Write};

use anyhow::{ensure, Result};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Deterministic generator; the same seed always yields the same stream.
pub struct Rng {
    inner: ChaCha8Rng,
    spare: Option<f64>,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { inner: ChaCha8Rng::seed_from_u64(seed), spare: None }
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box-Muller, consuming two uniforms per pair.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // 1 - u keeps the logarithm away from zero.
        let r = (-2.0 * (1.0 - self.uniform()).ln()).sqrt();
        let theta = core::f64::consts::TAU * self.uniform();
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }

    pub fn below(&mut self, bound: usize) -> usize {
        (self.inner.next_u64() % bound as u64) as usize
    }
}

/// Cumulative sum of unit-normal steps.
pub fn random_walk(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = Rng::new(seed);
    let mut out = Vec::with_capacity(n);
    let mut level = 0.0;
    for _ in 0..n {
        level += rng.normal();
        out.push(level);
    }
    out
}

/// Random walk with `x[a..a+l]` copied to `b`, each copied value perturbed
/// uniformly within `±noise`. Returns the series and the planted pair
/// `(a, b)` with `a < b` and `b - a >= l`.
pub fn planted_motif(n: usize, l: usize, seed: u64, noise: f64) -> Result<(Vec<f64>, (usize, usize))> {
    ensure!(l >= 1, "subsequence length must be positive");
    ensure!(n >= 2 * l, "series of length {n} cannot hold two non-overlapping length-{l} blocks");
    ensure!(noise.is_finite() && noise >= 0.0, "noise amplitude must be finite and non-negative");
    let mut x = random_walk(n, seed);
    let mut rng = Rng::new(seed ^ 0x706c616e745f6d74); // independent placement stream
    let top = n - l + 1;
    let mut a = 0;
    let mut b = n - l;
    for _ in 0..10_000 {
        let ca = rng.below(top);
        let cb = rng.below(top);
        if ca.abs_diff(cb) >= l {
            a = ca.min(cb);
            b = ca.max(cb);
            break;
        }
    }
    for r in 0..l {
        let jitter = noise * (2.0 * rng.uniform() - 1.0);
        x[b + r] = x[a + r] + jitter;
    }
    Ok((x, (a, b)))
}

/// One value per line, shortest round-trip decimal form.
pub fn write_series(out: &mut dyn Write, values: &[f64]) -> io::Result<()> {
    let mut buf = String::new();
    for v in values {
        buf.push_str(&format!("{v}\n"));
    }
    out.write_all(buf.as_bytes())
}
