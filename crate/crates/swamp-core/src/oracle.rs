//! Brute-force references for testing and cross-checking. The dynamic
//! program here is written from scratch over a full bordered cost table and
//! deliberately shares no code with the distance module, so a bug in the
//! optimized kernels cannot cancel out against the same bug here.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{sq, sqrt};
use crate::mprofile::Profile;
use crate::parallel::par_map_indexed;
use crate::series::{MotifResult, SearchConfig, SearchStats, TimeSeries};

/// All-pairs scans are refused above this series length unless forced.
pub const BRUTE_FORCE_LIMIT: usize = 20_000;

#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    /// Run even when the series is longer than [`BRUTE_FORCE_LIMIT`].
    pub force: bool,
    /// Worker threads for the pair scan; 1 keeps it strictly sequential.
    pub threads: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { force: false, threads: 1 }
    }
}

/// Banded DTW over a full `(L+1) x (L+1)` cost table whose border stays at
/// infinity, so out-of-band reads need no special cases. The table is reused
/// across calls; each call resets exactly the cells it wrote.
///
/// When the running row minimum exceeds `cutoff`, the call abandons and
/// returns that row minimum's root: a value that is `> cutoff` yet still a
/// lower bound on the true distance. Abandoning can therefore never discard
/// a pair whose true distance is within the cutoff.
pub(crate) struct ReferenceDtw {
    table: Vec<f64>,
    side: usize,
}

impl ReferenceDtw {
    pub(crate) fn new(len: usize) -> Self {
        let side = len + 1;
        let mut table = vec![f64::INFINITY; side * side];
        table[0] = 0.0;
        ReferenceDtw { table, side }
    }

    pub(crate) fn dist(&mut self, a: &[f64], b: &[f64], w: usize, cutoff: f64) -> f64 {
        let n = a.len();
        debug_assert_eq!(n, b.len());
        debug_assert_eq!(n + 1, self.side);
        let side = self.side;
        let cut_sq = if cutoff.is_finite() { cutoff * cutoff } else { f64::INFINITY };
        let mut rows_done = 0;
        let mut out = None;
        for i in 1..=n {
            let lo = if i > w { i - w } else { 1 };
            let hi = (i + w).min(n);
            let base = i * side;
            let mut row_min = f64::INFINITY;
            for j in lo..=hi {
                let up = self.table[base - side + j];
                let diag = self.table[base - side + j - 1];
                let left = self.table[base + j - 1];
                let cell = sq(a[i - 1] - b[j - 1]) + up.min(diag).min(left);
                self.table[base + j] = cell;
                row_min = row_min.min(cell);
            }
            rows_done = i;
            if row_min > cut_sq {
                out = Some(sqrt(row_min));
                break;
            }
        }
        let out = out.unwrap_or_else(|| sqrt(self.table[n * side + n]));
        for i in 1..=rows_done {
            let lo = if i > w { i - w } else { 1 };
            let hi = (i + w).min(n);
            for j in lo..=hi {
                self.table[i * side + j] = f64::INFINITY;
            }
        }
        out
    }
}

/// Subsequence accessor that hides the normalization mode from the scans.
enum Views<'a> {
    Raw(&'a [f64], usize),
    Z(Vec<Vec<f64>>),
}

impl<'a> Views<'a> {
    fn build(ts: &'a TimeSeries, cfg: &SearchConfig) -> Result<Views<'a>> {
        let l = cfg.subseq_len;
        let m = ts.len() - l + 1;
        match cfg.normalization {
            crate::Normalization::Raw => Ok(Views::Raw(ts.values(), l)),
            crate::Normalization::ZNorm => {
                let mut z = Vec::with_capacity(m);
                for i in 0..m {
                    z.push(ts.subsequence_view(i, l, cfg.normalization)?);
                }
                Ok(Views::Z(z))
            }
        }
    }

    fn get(&self, i: usize) -> &[f64] {
        match self {
            Views::Raw(x, l) => &x[i..i + l],
            Views::Z(z) => &z[i],
        }
    }
}

fn check_size(n: usize, force: bool) -> Result<()> {
    if n > BRUTE_FORCE_LIMIT && !force {
        return Err(Error::TooLarge { n, limit: BRUTE_FORCE_LIMIT });
    }
    Ok(())
}

/// Speed hint for the profile scan: for each start, some non-trivial partner
/// whose raw squared Euclidean distance is small, found by rolling sums along
/// the diagonals. The choice only steers which pairs get their full distance
/// computed first; a bad partner costs time, never correctness, so neither
/// the rolling drift nor the raw-space metric needs any care here.
fn ed_partner_hint(x: &[f64], l: usize, m: usize) -> Vec<usize> {
    let mut best = vec![f64::INFINITY; m];
    let mut partner = vec![usize::MAX; m];
    for k in l..m {
        let mut s: f64 = (0..l).map(|t| sq(x[t] - x[k + t])).sum();
        let mut i = 0;
        loop {
            let j = i + k;
            if s < best[i] {
                best[i] = s;
                partner[i] = j;
            }
            if s < best[j] {
                best[j] = s;
                partner[j] = i;
            }
            i += 1;
            if i + k >= m {
                break;
            }
            s += sq(x[i + l - 1] - x[i + k + l - 1]) - sq(x[i - 1] - x[i + k - 1]);
            if s < 0.0 {
                s = 0.0;
            }
        }
    }
    partner
}

/// Exact DTW matrix profile by evaluating every non-trivial pair.
///
/// No lower bounds are involved; the only shortcuts are a seeding pass that
/// fills each entry with the true distance to a hinted partner, and the
/// per-pair abandon against the pair's current entries. Entries only ever
/// decrease and abandoned pairs lie strictly above both of theirs, so neither
/// shortcut can change any final entry (see [`ReferenceDtw::dist`]).
pub fn brute_force_dtw_mp(ts: &TimeSeries, cfg: &SearchConfig) -> Result<Profile> {
    brute_force_dtw_mp_with(ts, cfg, OracleOptions::default())
}

pub fn brute_force_dtw_mp_with(
    ts: &TimeSeries,
    cfg: &SearchConfig,
    opts: OracleOptions,
) -> Result<Profile> {
    cfg.validate(ts.len())?;
    check_size(ts.len(), opts.force)?;
    let l = cfg.subseq_len;
    let w = cfg.window;
    let m = ts.len() - l + 1;
    let views = Views::build(ts, cfg)?;

    if opts.threads <= 1 {
        let mut dp = ReferenceDtw::new(l);
        let mut dist = vec![f64::INFINITY; m];
        let mut nn = vec![usize::MAX; m];
        for (i, &p) in ed_partner_hint(ts.values(), l, m).iter().enumerate() {
            if p == usize::MAX {
                continue;
            }
            let cut = dist[i].max(dist[p]);
            let d = dp.dist(views.get(i), views.get(p), w, cut);
            if d < dist[i] || (d == dist[i] && p < nn[i]) {
                dist[i] = d;
                nn[i] = p;
            }
            if d < dist[p] || (d == dist[p] && i < nn[p]) {
                dist[p] = d;
                nn[p] = i;
            }
        }
        for i in 0..m {
            for j in i + l..m {
                let cut = dist[i].max(dist[j]);
                let d = dp.dist(views.get(i), views.get(j), w, cut);
                if d < dist[i] || (d == dist[i] && j < nn[i]) {
                    dist[i] = d;
                    nn[i] = j;
                }
                if d < dist[j] || (d == dist[j] && i < nn[j]) {
                    dist[j] = d;
                    nn[j] = i;
                }
            }
        }
        return Ok(Profile { distances: dist, nn_index: nn });
    }

    let row = |i: usize| -> (f64, usize) {
        let mut dp = ReferenceDtw::new(l);
        let mut best = f64::INFINITY;
        let mut best_j = usize::MAX;
        for j in 0..m {
            if i.abs_diff(j) < l {
                continue;
            }
            let d = dp.dist(views.get(i), views.get(j), w, best);
            if d < best || (d == best && j < best_j) {
                best = d;
                best_j = j;
            }
        }
        (best, best_j)
    };
    let entries = par_map_indexed(m, opts.threads, row);
    let (distances, nn_index) = entries.into_iter().unzip();
    Ok(Profile { distances, nn_index })
}

/// Best pair over every non-trivial `(i, j)` with the same tie rule as the
/// optimized search: among pairs within `epsilon` of the smallest distance,
/// the lexicographically smallest `(i, j)` wins and its own distance is
/// reported.
pub fn brute_force_motif(ts: &TimeSeries, cfg: &SearchConfig) -> Result<MotifResult> {
    brute_force_motif_with(ts, cfg, OracleOptions::default())
}

pub fn brute_force_motif_with(
    ts: &TimeSeries,
    cfg: &SearchConfig,
    opts: OracleOptions,
) -> Result<MotifResult> {
    cfg.validate(ts.len())?;
    check_size(ts.len(), opts.force)?;
    let l = cfg.subseq_len;
    let w = cfg.window;
    let eps = cfg.epsilon;
    let m = ts.len() - l + 1;
    let views = Views::build(ts, cfg)?;

    let mut ties: Vec<(f64, usize, usize)> = Vec::new();
    let mut best = f64::INFINITY;
    let mut calls = 0u64;
    if opts.threads <= 1 {
        let mut dp = ReferenceDtw::new(l);
        for i in 0..m {
            for j in i + l..m {
                let cut = best + eps;
                let d = dp.dist(views.get(i), views.get(j), w, cut);
                calls += 1;
                if d <= cut {
                    best = best.min(d);
                    ties.push((d, i, j));
                    if ties.len() > 4096 {
                        let keep = best + eps;
                        ties.retain(|&(d, _, _)| d <= keep);
                    }
                }
            }
        }
    } else {
        let row = |i: usize| -> (Vec<(f64, usize, usize)>, u64) {
            let mut dp = ReferenceDtw::new(l);
            let mut local = Vec::new();
            let mut row_best = f64::INFINITY;
            let mut row_calls = 0u64;
            for j in i + l..m {
                let cut = row_best + eps;
                let d = dp.dist(views.get(i), views.get(j), w, cut);
                row_calls += 1;
                if d <= cut {
                    row_best = row_best.min(d);
                    local.push((d, i, j));
                }
            }
            (local, row_calls)
        };
        for (local, row_calls) in par_map_indexed(m, opts.threads, row) {
            calls += row_calls;
            for t in local {
                best = best.min(t.0);
                ties.push(t);
            }
        }
    }

    let keep = best + eps;
    ties.retain(|&(d, _, _)| d <= keep);
    let &(d, i, j) = ties
        .iter()
        .min_by(|a, b| (a.1, a.2).cmp(&(b.1, b.2)))
        .expect("validated config admits at least one pair");
    let mut stats = SearchStats::empty(m, cfg.total_pairs(ts.len()));
    stats.dtw_calls = calls;
    Ok(MotifResult { first: i, second: j, distance: d, stats })
}
