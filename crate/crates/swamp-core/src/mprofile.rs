//! Matrix-profile builders: the exact Euclidean-distance profile used to seed
//! the search, and per-level LB_Keogh profiles of the downsampled series.

use alloc::vec;
use alloc::vec::Vec;

use crate::distance::compute_envelope;
use crate::error::{Error, Result};
use crate::math::{sq, sqrt};
use crate::paa::{downsample_mask, sliding_mean};
use crate::parallel::par_map_indexed;
use crate::series::{Normalization, TimeSeries, DEGENERATE_STD};

/// Recompute a rolled diagonal term from scratch every this many steps.
const REFRESH_INTERVAL: usize = 4096;
/// Below this squared distance the rolled value is replaced by a direct
/// recomputation, so exact repeats come out as exactly zero.
const NEAR_ZERO_SQ: f64 = 1e-6;

/// Nearest-neighbor distances under some distance function, one entry per
/// subsequence start. Positions with no non-trivial candidate (possible when
/// `n < 3L - 1`) hold `f64::INFINITY` and `nn_index == usize::MAX`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub distances: Vec<f64>,
    pub nn_index: Vec<usize>,
}

impl Profile {
    /// Position of the smallest entry, ties toward the smaller index.
    pub fn argmin(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, &d) in self.distances.iter().enumerate() {
            if d.is_finite() && best.map_or(true, |b| d < self.distances[b]) {
                best = Some(i);
            }
        }
        best
    }
}

#[inline]
fn profile_update(dist: &mut [f64], nn: &mut [usize], at: usize, partner: usize, d: f64) {
    if d < dist[at] || (d == dist[at] && partner < nn[at]) {
        dist[at] = d;
        nn[at] = partner;
    }
}

/// Exact Euclidean-distance matrix profile with the trivial-match exclusion
/// `|i - j| >= L`, computed by rolling squared sums along each diagonal.
pub fn ed_matrix_profile(ts: &TimeSeries, l: usize, mode: Normalization) -> Result<Profile> {
    let x = ts.values();
    let n = x.len();
    if l == 0 || l > n {
        return Err(Error::BadSubseqLen { len: l, n });
    }
    if n < 2 * l {
        return Err(Error::TooShort { n, min: 2 * l });
    }
    let m = n - l + 1;
    let mut dist = vec![f64::INFINITY; m];
    let mut nn = vec![usize::MAX; m];
    match mode {
        Normalization::Raw => {
            let direct = |i: usize, k: usize| -> f64 {
                let mut s = 0.0;
                for r in 0..l {
                    s += sq(x[i + r] - x[i + k + r]);
                }
                s
            };
            for k in l..m {
                let mut s = direct(0, k);
                let d = sqrt(s.max(0.0));
                profile_update(&mut dist, &mut nn, 0, k, d);
                profile_update(&mut dist, &mut nn, k, 0, d);
                for i in 1..m - k {
                    s += sq(x[i + l - 1] - x[i + k + l - 1]) - sq(x[i - 1] - x[i + k - 1]);
                    if i % REFRESH_INTERVAL == 0 || s < NEAR_ZERO_SQ {
                        s = direct(i, k);
                    }
                    let d = sqrt(s.max(0.0));
                    profile_update(&mut dist, &mut nn, i, i + k, d);
                    profile_update(&mut dist, &mut nn, i + k, i, d);
                }
            }
        }
        Normalization::ZNorm => {
            let stats = ts.sliding_stats(l)?;
            let lf = l as f64;
            // Direct z-normalized squared distance, honoring the
            // degenerate-window rule on either side.
            let direct = |i: usize, j: usize| -> f64 {
                let (mi, si) = (stats.means[i], stats.stds[i]);
                let (mj, sj) = (stats.means[j], stats.stds[j]);
                let di = si < DEGENERATE_STD;
                let dj = sj < DEGENERATE_STD;
                if di && dj {
                    return 0.0;
                }
                if di || dj {
                    return lf;
                }
                let mut s = 0.0;
                for r in 0..l {
                    s += sq((x[i + r] - mi) / si - (x[j + r] - mj) / sj);
                }
                s
            };
            let dist_sq = |qt: f64, i: usize, j: usize| -> f64 {
                let (mi, si) = (stats.means[i], stats.stds[i]);
                let (mj, sj) = (stats.means[j], stats.stds[j]);
                let di = si < DEGENERATE_STD;
                let dj = sj < DEGENERATE_STD;
                if di && dj {
                    return 0.0;
                }
                if di || dj {
                    return lf;
                }
                let rho = ((qt - lf * mi * mj) / (lf * si * sj)).clamp(-1.0, 1.0);
                2.0 * lf * (1.0 - rho)
            };
            for k in l..m {
                let mut qt: f64 = (0..l).map(|r| x[r] * x[k + r]).sum();
                let mut s = dist_sq(qt, 0, k);
                if s < NEAR_ZERO_SQ {
                    s = direct(0, k);
                }
                let d = sqrt(s.max(0.0));
                profile_update(&mut dist, &mut nn, 0, k, d);
                profile_update(&mut dist, &mut nn, k, 0, d);
                for i in 1..m - k {
                    qt += x[i + l - 1] * x[i + k + l - 1] - x[i - 1] * x[i + k - 1];
                    if i % REFRESH_INTERVAL == 0 {
                        qt = (0..l).map(|r| x[i + r] * x[i + k + r]).sum();
                    }
                    let mut s = dist_sq(qt, i, i + k);
                    if s < NEAR_ZERO_SQ {
                        s = direct(i, i + k);
                    }
                    let d = sqrt(s.max(0.0));
                    profile_update(&mut dist, &mut nn, i, i + k, d);
                    profile_update(&mut dist, &mut nn, i + k, i, d);
                }
            }
        }
    }
    Ok(Profile { distances: dist, nn_index: nn })
}

/// One level of the pruning hierarchy: admissible DTW lower bounds at
/// downsampling factor `level`, expanded back to full resolution.
///
/// `lbmp[i]` lower-bounds the DTW distance from subsequence `i` to every
/// subsequence that was still alive when the level was computed; pruned
/// positions hold `f64::INFINITY`. `lb_index[i]` is the full-resolution start
/// of the frame that produced the bound. `frame_min` / `frame_nn` are the
/// per-frame values before expansion (`usize::MAX` marks "no candidate").
#[derive(Debug, Clone, PartialEq)]
pub struct LevelProfile {
    pub level: usize,
    pub lbmp: Vec<f64>,
    pub lb_index: Vec<usize>,
    pub frame_min: Vec<f64>,
    pub frame_nn: Vec<usize>,
}

/// Downsampled LB_Keogh matrix profile at factor `factor`, single-threaded.
pub fn lb_keogh_dsmp(
    ts: &TimeSeries,
    l: usize,
    factor: usize,
    window: usize,
    pruned: &[bool],
) -> Result<LevelProfile> {
    lb_keogh_dsmp_mt(ts, l, factor, window, pruned, 1)
}

/// Downsampled LB_Keogh matrix profile at factor `factor`.
///
/// A frame covers `factor` consecutive subsequence starts. The bound for a
/// frame pair is built from per-frame value intervals (sliding min/max of the
/// length-`factor` window means) and envelope extremes over the same spans,
/// which makes one expanded value a valid lower bound for EVERY start the
/// frame covers, aligned to the frame grid or not. At `factor == 1` this
/// degenerates to the plain LB_Keogh profile under the series-wide envelope.
pub fn lb_keogh_dsmp_mt(
    ts: &TimeSeries,
    l: usize,
    factor: usize,
    window: usize,
    pruned: &[bool],
    threads: usize,
) -> Result<LevelProfile> {
    let x = ts.values();
    let n = x.len();
    if l == 0 || l > n {
        return Err(Error::BadSubseqLen { len: l, n });
    }
    if n < 2 * l {
        return Err(Error::TooShort { n, min: 2 * l });
    }
    if window > l - 1 {
        return Err(Error::BadWindow { window, max: l - 1 });
    }
    if factor < 1 || factor > l {
        return Err(Error::BadFactor { factor, max: l });
    }
    let m = n - l + 1;
    if pruned.len() != m {
        return Err(Error::MaskLength { got: pruned.len(), want: m });
    }

    let env = compute_envelope(x, window)?;
    let means = sliding_mean(x, factor)?;
    let env_up = sliding_mean(&env.upper, factor)?;
    let env_lo = sliding_mean(&env.lower, factor)?;

    let l_d = (l / factor).max(1);
    let frames = (m - 1) / factor + 1;
    let mask = downsample_mask(pruned, factor);
    debug_assert_eq!(mask.len(), frames);

    // Column s aggregates window [s*factor, s*factor + factor) of each
    // sliding-mean array; frame q at offset r reads column q + r.
    let columns = frames - 1 + l_d;
    let mut cand_min = Vec::with_capacity(columns);
    let mut cand_max = Vec::with_capacity(columns);
    let mut query_up = Vec::with_capacity(columns);
    let mut query_lo = Vec::with_capacity(columns);
    for s in 0..columns {
        let t0 = s * factor;
        let t1 = (t0 + factor).min(means.len());
        debug_assert!(t0 < means.len());
        let mut mn = f64::INFINITY;
        let mut mx = f64::NEG_INFINITY;
        for &v in &means[t0..t1] {
            mn = mn.min(v);
            mx = mx.max(v);
        }
        cand_min.push(mn);
        cand_max.push(mx);
        let mut up = f64::NEG_INFINITY;
        for &v in &env_up[t0..t1] {
            up = up.max(v);
        }
        query_up.push(up);
        let mut lo = f64::INFINITY;
        for &v in &env_lo[t0..t1] {
            lo = lo.min(v);
        }
        query_lo.push(lo);
    }

    let scale = factor as f64;
    let frame_entry = |q: usize| -> (f64, usize) {
        if mask[q] {
            return (f64::INFINITY, usize::MAX);
        }
        let mut best_sum = f64::INFINITY;
        let mut best_c = usize::MAX;
        for c in 0..frames {
            if mask[c] || c.abs_diff(q) < l_d {
                continue;
            }
            let mut sum = 0.0;
            let mut complete = true;
            for r in 0..l_d {
                let gap = if cand_min[c + r] > query_up[q + r] {
                    cand_min[c + r] - query_up[q + r]
                } else if query_lo[q + r] > cand_max[c + r] {
                    query_lo[q + r] - cand_max[c + r]
                } else {
                    continue;
                };
                sum += gap * gap;
                if sum >= best_sum {
                    complete = false;
                    break;
                }
            }
            if complete && sum < best_sum {
                best_sum = sum;
                best_c = c;
            }
        }
        if best_c == usize::MAX {
            (f64::INFINITY, usize::MAX)
        } else {
            (sqrt(scale * best_sum), best_c)
        }
    };
    let entries = par_map_indexed(frames, threads, frame_entry);

    let mut lbmp = vec![f64::INFINITY; m];
    let mut lb_index = vec![0usize; m];
    for i in 0..m {
        let (val, c) = entries[i / factor];
        if pruned[i] {
            lb_index[i] = i;
            continue;
        }
        lbmp[i] = val;
        lb_index[i] = if c == usize::MAX { i } else { c * factor };
    }
    let (frame_min, frame_nn) = entries.into_iter().unzip();
    Ok(LevelProfile { level: factor, lbmp, lb_index, frame_min, frame_nn })
}

/// Full-resolution LB_Keogh profile in z-normalized space: each query gets
/// its own envelope over the z-normalized subsequence, candidates are
/// z-normalized on the fly. Used as the single hierarchy level in znorm mode,
/// where aggregate downsampling has no admissible counterpart.
pub fn lb_keogh_profile_znorm(
    ts: &TimeSeries,
    l: usize,
    window: usize,
    pruned: &[bool],
    threads: usize,
) -> Result<LevelProfile> {
    let x = ts.values();
    let n = x.len();
    if l == 0 || l > n {
        return Err(Error::BadSubseqLen { len: l, n });
    }
    if n < 2 * l {
        return Err(Error::TooShort { n, min: 2 * l });
    }
    if window > l - 1 {
        return Err(Error::BadWindow { window, max: l - 1 });
    }
    let m = n - l + 1;
    if pruned.len() != m {
        return Err(Error::MaskLength { got: pruned.len(), want: m });
    }
    let stats = ts.sliding_stats(l)?;

    let row = |i: usize| -> (f64, usize) {
        if pruned[i] {
            return (f64::INFINITY, usize::MAX);
        }
        let mut zq = Vec::with_capacity(l);
        let (mi, si) = (stats.means[i], stats.stds[i]);
        if si < DEGENERATE_STD {
            zq.resize(l, 0.0);
        } else {
            zq.extend(x[i..i + l].iter().map(|&v| (v - mi) / si));
        }
        let env = compute_envelope(&zq, window).expect("window validated");
        let mut best_sum = f64::INFINITY;
        let mut best_c = usize::MAX;
        for c in 0..m {
            if pruned[c] || c.abs_diff(i) < l {
                continue;
            }
            let (mc, sc) = (stats.means[c], stats.stds[c]);
            let degenerate = sc < DEGENERATE_STD;
            let inv = if degenerate { 0.0 } else { 1.0 / sc };
            let mut sum = 0.0;
            let mut complete = true;
            for r in 0..l {
                let zc = if degenerate { 0.0 } else { (x[c + r] - mc) * inv };
                let dev = if zc > env.upper[r] {
                    zc - env.upper[r]
                } else if zc < env.lower[r] {
                    env.lower[r] - zc
                } else {
                    continue;
                };
                sum += dev * dev;
                if sum >= best_sum {
                    complete = false;
                    break;
                }
            }
            if complete && sum < best_sum {
                best_sum = sum;
                best_c = c;
            }
        }
        if best_c == usize::MAX {
            (f64::INFINITY, usize::MAX)
        } else {
            (sqrt(best_sum), best_c)
        }
    };
    let entries = par_map_indexed(m, threads, row);

    let mut lbmp = Vec::with_capacity(m);
    let mut lb_index = Vec::with_capacity(m);
    for (i, &(val, c)) in entries.iter().enumerate() {
        lbmp.push(val);
        lb_index.push(if c == usize::MAX { i } else { c });
    }
    let (frame_min, frame_nn) = entries.into_iter().unzip();
    Ok(LevelProfile { level: 1, lbmp, lb_index, frame_min, frame_nn })
}
