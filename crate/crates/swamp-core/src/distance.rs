//! Full-resolution distance kernels: Euclidean distance, warping envelopes,
//! LB_KimFL, LB_Keogh with early abandoning, and band-constrained DTW with
//! row-minimum early abandoning.
//!
//! All kernels accumulate squared deviations and take a single square root at
//! the return boundary. An abandoning kernel given `abandon_at` may return any
//! value strictly greater than the threshold once the result is proven to
//! exceed it.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{sq, sqrt};

/// Warping envelope of a sequence: `lower[i] <= q[i] <= upper[i]`, where the
/// bounds are the sliding min/max over a window of radius `window`, clamped
/// at the sequence boundaries.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
    pub window: usize,
}

impl Envelope {
    pub fn len(&self) -> usize {
        self.upper.len()
    }

    pub fn is_empty(&self) -> bool {
        self.upper.is_empty()
    }
}

/// Sliding min/max envelope in O(n) via monotonic deques.
pub fn compute_envelope(q: &[f64], window: usize) -> Result<Envelope> {
    let n = q.len();
    if n == 0 {
        return Err(Error::TooShort { n: 0, min: 1 });
    }
    if window > n - 1 {
        return Err(Error::BadWindow { window, max: n - 1 });
    }
    let mut upper = Vec::with_capacity(n);
    let mut lower = Vec::with_capacity(n);
    let mut max_dq: VecDeque<usize> = VecDeque::new();
    let mut min_dq: VecDeque<usize> = VecDeque::new();
    let mut next = 0usize;
    for i in 0..n {
        let hi = (i + window).min(n - 1);
        while next <= hi {
            while max_dq.back().is_some_and(|&b| q[b] <= q[next]) {
                max_dq.pop_back();
            }
            max_dq.push_back(next);
            while min_dq.back().is_some_and(|&b| q[b] >= q[next]) {
                min_dq.pop_back();
            }
            min_dq.push_back(next);
            next += 1;
        }
        let lo = i.saturating_sub(window);
        while *max_dq.front().unwrap() < lo {
            max_dq.pop_front();
        }
        while *min_dq.front().unwrap() < lo {
            min_dq.pop_front();
        }
        upper.push(q[*max_dq.front().unwrap()]);
        lower.push(q[*min_dq.front().unwrap()]);
    }
    Ok(Envelope { upper, lower, window })
}

pub fn euclidean(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    let sum: f64 = a.iter().zip(b).map(|(&x, &y)| sq(x - y)).sum();
    Ok(sqrt(sum))
}

/// First/last-point lower bound: both endpoints are matched to each other in
/// every admissible warping path, so their cost is unavoidable.
pub fn lb_kim_fl(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    let n = a.len();
    if n < 2 {
        return Err(Error::TooShort { n, min: 2 });
    }
    Ok(sqrt(sq(a[0] - b[0]) + sq(a[n - 1] - b[n - 1])))
}

/// One-directional LB_Keogh: how far `c` falls outside the envelope of the
/// query. Early abandons once the running sum of squares exceeds the
/// threshold.
// TODO: optional max(lb(a->b), lb(b->a)) tightening for the phase-two cascade.
pub fn lb_keogh(env: &Envelope, c: &[f64], abandon_at: Option<f64>) -> Result<f64> {
    if env.len() != c.len() {
        return Err(Error::LengthMismatch { left: env.len(), right: c.len() });
    }
    let cutoff = abandon_at.map(|t| t * t);
    let mut sum = 0.0;
    for ((&v, &up), &lo) in c.iter().zip(&env.upper).zip(&env.lower) {
        if v > up {
            sum += sq(v - up);
        } else if v < lo {
            sum += sq(lo - v);
        } else {
            continue;
        }
        if let Some(cut) = cutoff {
            if sum > cut {
                return Ok(sqrt(sum));
            }
        }
    }
    Ok(sqrt(sum))
}

/// Reusable DP rows for [`dtw_with_scratch`]; confine one instance to one
/// worker.
#[derive(Debug, Default)]
pub struct DtwScratch {
    prev: Vec<f64>,
    cur: Vec<f64>,
}

impl DtwScratch {
    pub fn new() -> Self {
        Self::default()
    }

    fn ensure(&mut self, n: usize) {
        if self.prev.len() < n {
            self.prev.resize(n, f64::INFINITY);
            self.cur.resize(n, f64::INFINITY);
        }
    }
}

/// Band-constrained DTW distance; allocates its own scratch.
pub fn dtw(a: &[f64], b: &[f64], window: usize, abandon_at: Option<f64>) -> Result<f64> {
    let mut scratch = DtwScratch::new();
    dtw_with_scratch(a, b, window, abandon_at, &mut scratch)
}

/// DTW under a Sakoe-Chiba band of absolute radius `window`: the minimal sum
/// of squared pointwise costs over monotone paths with `|i - j| <= window`,
/// square-rooted at the end. With `abandon_at`, returns early once every cell
/// of some DP row exceeds the squared threshold.
pub fn dtw_with_scratch(
    a: &[f64],
    b: &[f64],
    window: usize,
    abandon_at: Option<f64>,
    scratch: &mut DtwScratch,
) -> Result<f64> {
    let n = a.len();
    if n != b.len() {
        return Err(Error::LengthMismatch { left: n, right: b.len() });
    }
    if n == 0 {
        return Err(Error::TooShort { n: 0, min: 1 });
    }
    if window > n - 1 {
        return Err(Error::BadWindow { window, max: n - 1 });
    }
    scratch.ensure(n);
    let cutoff = abandon_at.map(|t| t * t);
    let prev = &mut scratch.prev;
    let cur = &mut scratch.cur;

    // Row 0: a[0] matched against b[0..=window], cumulative along j.
    let hi0 = window.min(n - 1);
    let mut acc = 0.0;
    let mut row_min = f64::INFINITY;
    for j in 0..=hi0 {
        acc += sq(a[0] - b[j]);
        cur[j] = acc;
        row_min = row_min.min(acc);
    }
    if let Some(cut) = cutoff {
        if row_min > cut {
            return Ok(sqrt(row_min));
        }
    }
    core::mem::swap(prev, cur);
    let mut prev_lo = 0usize;
    let mut prev_hi = hi0;

    for i in 1..n {
        let lo = i.saturating_sub(window);
        let hi = (i + window).min(n - 1);
        row_min = f64::INFINITY;
        for j in lo..=hi {
            // Cells outside the previous row's band, and the cell left of the
            // band start, are infinite-cost; never read stale buffer entries.
            let up = if j <= prev_hi { prev[j] } else { f64::INFINITY };
            let diag = if j >= 1 && j - 1 >= prev_lo && j - 1 <= prev_hi {
                prev[j - 1]
            } else {
                f64::INFINITY
            };
            let left = if j > lo { cur[j - 1] } else { f64::INFINITY };
            let best = up.min(diag).min(left);
            let cell = sq(a[i] - b[j]) + best;
            cur[j] = cell;
            row_min = row_min.min(cell);
        }
        if let Some(cut) = cutoff {
            if row_min > cut {
                return Ok(sqrt(row_min));
            }
        }
        core::mem::swap(prev, cur);
        prev_lo = lo;
        prev_hi = hi;
    }
    Ok(sqrt(prev[n - 1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::walk;
    use alloc::vec;


    // Plain quadratic DP over the full matrix, written recursively enough to
    // not resemble the banded two-row kernel.
    fn naive_dtw(a: &[f64], b: &[f64], w: usize) -> f64 {
        let n = a.len();
        let mut dp = vec![vec![f64::INFINITY; n + 1]; n + 1];
        dp[0][0] = 0.0;
        for i in 1..=n {
            for j in 1..=n {
                if i.abs_diff(j) > w {
                    continue;
                }
                let cost = (a[i - 1] - b[j - 1]) * (a[i - 1] - b[j - 1]);
                let best = dp[i - 1][j - 1].min(dp[i - 1][j]).min(dp[i][j - 1]);
                dp[i][j] = cost + best;
            }
        }
        dp[n][n].sqrt()
    }

    #[test]
    fn euclidean_basics() {
        assert_eq!(euclidean(&[3.0, 1.0, 4.0], &[3.0, 1.0, 4.0]).unwrap(), 0.0);
        let d = euclidean(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-12);
        assert!(euclidean(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn euclidean_equals_zero_window_dtw() {
        let a = walk(1, 64);
        let b = walk(2, 64);
        let e = euclidean(&a, &b).unwrap();
        let d = dtw(&a, &b, 0, None).unwrap();
        assert!((e - d).abs() < 1e-12);
    }

    #[test]
    fn envelope_examples() {
        let env = compute_envelope(&[0.0, 0.0, 0.0], 1).unwrap();
        assert_eq!(env.upper, vec![0.0, 0.0, 0.0]);
        assert_eq!(env.lower, vec![0.0, 0.0, 0.0]);

        let env = compute_envelope(&[1.0, 5.0, 2.0], 1).unwrap();
        assert_eq!(env.upper, vec![5.0, 5.0, 5.0]);
        assert_eq!(env.lower, vec![1.0, 1.0, 2.0]);
    }

    #[test]
    fn envelope_matches_naive_window_scan() {
        let q = walk(3, 256);
        let w = 10;
        let env = compute_envelope(&q, w).unwrap();
        for i in 0..q.len() {
            let lo = i.saturating_sub(w);
            let hi = (i + w).min(q.len() - 1);
            let mx = q[lo..=hi].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mn = q[lo..=hi].iter().cloned().fold(f64::INFINITY, f64::min);
            assert_eq!(env.upper[i], mx);
            assert_eq!(env.lower[i], mn);
            assert!(env.lower[i] <= q[i] && q[i] <= env.upper[i]);
        }
    }

    #[test]
    fn lb_keogh_basics() {
        let env = compute_envelope(&[0.0, 0.0, 0.0], 1).unwrap();
        assert_eq!(lb_keogh(&env, &[0.0, 0.0, 0.0], None).unwrap(), 0.0);
        assert_eq!(lb_keogh(&env, &[1.0, 0.0, 0.0], None).unwrap(), 1.0);
    }

    #[test]
    fn lb_kim_fl_formula() {
        assert_eq!(lb_kim_fl(&[1.0, 7.0], &[1.0, 7.0]).unwrap(), 0.0);
        let d = lb_kim_fl(&[0.0, 1.0, 2.0], &[1.0, 1.0, 1.0]).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn dtw_two_point_paths() {
        // Three admissible paths; the cheapest covers both costs once.
        let d = dtw(&[0.0, 0.0], &[1.0, 1.0], 1, None).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(dtw(&[4.0, 2.0, 9.0], &[4.0, 2.0, 9.0], 2, None).unwrap(), 0.0);
    }

    #[test]
    fn dtw_matches_naive_full_dp() {
        for seed in 0..6 {
            let a = walk(seed * 2 + 10, 64);
            let b = walk(seed * 2 + 11, 64);
            for w in [0usize, 1, 5, 13, 63] {
                let fast = dtw(&a, &b, w, None).unwrap();
                let slow = naive_dtw(&a, &b, w);
                assert!(
                    (fast - slow).abs() < 1e-12,
                    "seed {seed} w {w}: {fast} vs {slow}"
                );
            }
        }
    }

    #[test]
    fn dtw_monotone_in_window() {
        let a = walk(20, 96);
        let b = walk(21, 96);
        let mut last = f64::INFINITY;
        for w in [0usize, 1, 2, 4, 8, 16, 32, 95] {
            let d = dtw(&a, &b, w, None).unwrap();
            assert!(d <= last + 1e-12);
            last = d;
        }
    }

    #[test]
    fn dtw_symmetric() {
        let a = walk(30, 80);
        let b = walk(31, 80);
        for w in [0usize, 3, 9] {
            let ab = dtw(&a, &b, w, None).unwrap();
            let ba = dtw(&b, &a, w, None).unwrap();
            assert!((ab - ba).abs() < 1e-12);
        }
    }

    #[test]
    fn abandoning_is_consistent_when_not_triggered() {
        for seed in 0..8 {
            let a = walk(seed + 40, 72);
            let b = walk(seed + 140, 72);
            let w = 6;
            let exact = dtw(&a, &b, w, None).unwrap();
            let kept = dtw(&a, &b, w, Some(exact + 0.5)).unwrap();
            assert_eq!(exact, kept);
            let abandoned = dtw(&a, &b, w, Some(exact * 0.5)).unwrap();
            assert!(abandoned > exact * 0.5);

            let env = compute_envelope(&a, w).unwrap();
            let lb = lb_keogh(&env, &b, None).unwrap();
            assert_eq!(lb, lb_keogh(&env, &b, Some(lb + 1.0)).unwrap());
            if lb > 0.0 {
                assert!(lb_keogh(&env, &b, Some(lb * 0.5)).unwrap() > lb * 0.5);
            }
        }
    }

    #[test]
    fn bound_chain_holds_on_sampled_pairs() {
        let series = walk(7, 2000);
        let l = 128;
        let w = 8;
        let mut violations = 0;
        for k in 0..200 {
            let i = (k * 37) % (series.len() - l);
            let j = (k * 89 + 700) % (series.len() - l);
            if i.abs_diff(j) < l {
                continue;
            }
            let a = &series[i..i + l];
            let b = &series[j..j + l];
            let d = dtw(a, b, w, None).unwrap();
            let e = euclidean(a, b).unwrap();
            let kim = lb_kim_fl(a, b).unwrap();
            let env = compute_envelope(a, w).unwrap();
            let keogh = lb_keogh(&env, b, None).unwrap();
            let tol = 1e-9 * (1.0 + d);
            if kim > d + tol || keogh > d + tol || d > e + tol {
                violations += 1;
            }
        }
        assert_eq!(violations, 0);
    }

    #[test]
    fn scratch_reuse_across_lengths() {
        let mut scratch = DtwScratch::new();
        let a = walk(50, 96);
        let b = walk(51, 96);
        let long = dtw_with_scratch(&a, &b, 5, None, &mut scratch).unwrap();
        assert!((long - dtw(&a, &b, 5, None).unwrap()).abs() < 1e-12);
        let short = dtw_with_scratch(&a[..20], &b[..20], 5, None, &mut scratch).unwrap();
        assert!((short - dtw(&a[..20], &b[..20], 5, None).unwrap()).abs() < 1e-12);
    }
}
