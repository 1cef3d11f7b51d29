//! Domain types: time series, search configuration, sliding statistics,
//! motif results and search counters.
//!
//! All indices in this crate are 0-based; the CLI converts to 1-based
//! positions at the output boundary.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::time::Duration;

use crate::error::{Error, Result};
use crate::math;

/// Default absolute tolerance for distance comparisons and tie detection.
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// Standard deviations below this are treated as zero when z-normalizing.
pub(crate) const DEGENERATE_STD: f64 = 1e-12;

/// How subsequences are presented to the distance kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Raw,
    ZNorm,
}

/// An immutable univariate series of finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    name: Option<String>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::TooShort { n: 0, min: 1 });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(TimeSeries { values, name: None })
    }

    pub fn with_name(values: Vec<f64>, name: String) -> Result<Self> {
        let mut ts = Self::new(values)?;
        ts.name = Some(name);
        Ok(ts)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Raw view of the subsequence starting at `start`.
    pub fn subsequence(&self, start: usize, len: usize) -> Result<&[f64]> {
        let n = self.values.len();
        if len == 0 || len > n {
            return Err(Error::BadSubseqLen { len, n });
        }
        let max = n - len;
        if start > max {
            return Err(Error::BadStart { start, max });
        }
        Ok(&self.values[start..start + len])
    }

    /// Materialized subsequence, z-normalized on demand. A subsequence whose
    /// standard deviation falls below 1e-12 z-normalizes to all zeros.
    pub fn subsequence_view(
        &self,
        start: usize,
        len: usize,
        mode: Normalization,
    ) -> Result<Vec<f64>> {
        let window = self.subsequence(start, len)?;
        match mode {
            Normalization::Raw => Ok(window.to_vec()),
            Normalization::ZNorm => {
                let mut out = window.to_vec();
                znormalize_in_place(&mut out);
                Ok(out)
            }
        }
    }

    /// Per-window mean and population standard deviation for every
    /// subsequence start, via compensated prefix sums.
    pub fn sliding_stats(&self, len: usize) -> Result<SlidingStats> {
        let n = self.values.len();
        if len == 0 || len > n {
            return Err(Error::BadSubseqLen { len, n });
        }
        let p1 = compensated_prefix(self.values.iter().copied());
        let p2 = compensated_prefix(self.values.iter().map(|v| v * v));
        let m = n - len + 1;
        let inv = 1.0 / len as f64;
        let mut means = Vec::with_capacity(m);
        let mut stds = Vec::with_capacity(m);
        for i in 0..m {
            let mean = (p1[i + len] - p1[i]) * inv;
            let var = ((p2[i + len] - p2[i]) * inv - mean * mean).max(0.0);
            means.push(mean);
            stds.push(math::sqrt(var));
        }
        Ok(SlidingStats { means, stds })
    }
}

pub(crate) fn znormalize_in_place(window: &mut [f64]) {
    let inv = 1.0 / window.len() as f64;
    let mean = window.iter().sum::<f64>() * inv;
    let var = window.iter().map(|v| math::sq(v - mean)).sum::<f64>() * inv;
    let std = math::sqrt(var.max(0.0));
    if std < DEGENERATE_STD {
        window.fill(0.0);
    } else {
        let inv_std = 1.0 / std;
        for v in window.iter_mut() {
            *v = (*v - mean) * inv_std;
        }
    }
}

// Neumaier-compensated running sum; keeps prefix differences accurate on
// long series where plain accumulation would drift.
fn compensated_prefix(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut out = vec![0.0];
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
        out.push(sum + comp);
    }
    out
}

/// Sliding means and population standard deviations, one per subsequence start.
#[derive(Debug, Clone, PartialEq)]
pub struct SlidingStats {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl SlidingStats {
    pub fn len(&self) -> usize {
        self.means.len()
    }

    pub fn is_empty(&self) -> bool {
        self.means.is_empty()
    }
}

/// Search parameters. Ties between equal-distance pairs are always broken
/// toward the lexicographically smallest `(i, j)` with `i < j`; the policy is
/// fixed and not configurable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub subseq_len: usize,
    pub window: usize,
    pub normalization: Normalization,
    pub epsilon: f64,
}

impl SearchConfig {
    pub fn new(subseq_len: usize, window: usize) -> Self {
        SearchConfig {
            subseq_len,
            window,
            normalization: Normalization::Raw,
            epsilon: DEFAULT_EPSILON,
        }
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    /// Checks the configuration against a series of length `n`. At least one
    /// non-overlapping pair must exist, which requires `n >= 2 * subseq_len`.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.subseq_len < 4 || self.subseq_len > n {
            return Err(Error::BadSubseqLen { len: self.subseq_len, n });
        }
        if n < 2 * self.subseq_len {
            return Err(Error::TooShort { n, min: 2 * self.subseq_len });
        }
        if self.window > self.subseq_len - 1 {
            return Err(Error::BadWindow { window: self.window, max: self.subseq_len - 1 });
        }
        if !self.epsilon.is_finite() || self.epsilon < 0.0 {
            return Err(Error::BadEpsilon { value: self.epsilon });
        }
        Ok(())
    }

    pub fn positions(&self, n: usize) -> usize {
        n - self.subseq_len + 1
    }

    /// Number of non-trivial pairs `(i, j)` with `j >= i + subseq_len`.
    pub fn total_pairs(&self, n: usize) -> u64 {
        let m = self.positions(n);
        if m <= self.subseq_len {
            return 0;
        }
        let k = (m - self.subseq_len) as u64;
        k * (k + 1) / 2
    }
}

/// Pruning outcome of one hierarchy level.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelPruneStat {
    /// Downsampling factor of the level.
    pub level: usize,
    /// Smallest lower bound among positions still alive when the level ran.
    pub lbmp_min: Option<f64>,
    pub newly_pruned: usize,
    pub total_pruned: usize,
}

/// Wall-clock time per phase; `None` when timing is unavailable.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhaseTimings {
    pub phase1: Option<Duration>,
    pub phase2: Option<Duration>,
}

/// Counters describing how much work the search did and how much it avoided.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchStats {
    /// Number of subsequence positions, `n - L + 1`.
    pub positions: usize,
    /// Non-trivial pair count over all positions.
    pub total_pairs: u64,
    /// Fraction of positions pruned by the end of phase one.
    pub pruned_fraction: f64,
    pub levels: Vec<LevelPruneStat>,
    /// Pairs that entered the phase-two bound cascade.
    pub phase2_pairs: u64,
    pub lb_kim_calls: u64,
    pub lb_keogh_calls: u64,
    /// Full DTW evaluations in phase two.
    pub dtw_calls: u64,
    /// DTW evaluations spent on the seed pair and per-level confirmations.
    pub confirm_dtw_calls: u64,
    /// Positions pruned during phase two after best-so-far improvements.
    pub repruned: u64,
    pub timings: PhaseTimings,
}

impl SearchStats {
    pub(crate) fn empty(positions: usize, total_pairs: u64) -> Self {
        SearchStats {
            positions,
            total_pairs,
            pruned_fraction: 0.0,
            levels: Vec::new(),
            phase2_pairs: 0,
            lb_kim_calls: 0,
            lb_keogh_calls: 0,
            dtw_calls: 0,
            confirm_dtw_calls: 0,
            repruned: 0,
            timings: PhaseTimings::default(),
        }
    }
}

/// The best non-overlapping subsequence pair of a search. `first < second`
/// and `second - first >= L`; `distance` is the DTW distance of exactly this
/// pair.
#[derive(Debug, Clone, PartialEq)]
pub struct MotifResult {
    pub first: usize,
    pub second: usize,
    pub distance: f64,
    pub stats: SearchStats,
}
