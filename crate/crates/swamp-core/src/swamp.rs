//! The two-phase motif search orchestrator.
//!
//! Phase one seeds an upper bound from the Euclidean matrix-profile motif,
//! then walks a coarse-to-fine hierarchy of downsampled LB_Keogh profiles,
//! pruning every position whose lower bound exceeds the best distance seen so
//! far. Phase two scans the survivors in ascending lower-bound order through
//! LB_KimFL, early-abandoning LB_Keogh and early-abandoning DTW, which yields
//! the exact best pair because every skip is justified by an admissible bound.

use alloc::vec;
use alloc::vec::Vec;
use core::time::Duration;

use crate::distance::{compute_envelope, dtw_with_scratch, lb_keogh, lb_kim_fl, DtwScratch};
use crate::error::Result;
use crate::mprofile::{ed_matrix_profile, lb_keogh_dsmp_mt, lb_keogh_profile_znorm, LevelProfile, Profile};
use crate::series::{
    LevelPruneStat, MotifResult, Normalization, PhaseTimings, SearchConfig, SearchStats,
    TimeSeries, DEGENERATE_STD,
};

/// Order in which phase two visits the surviving positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OuterOrder {
    /// Ascending final lower bound; allows stopping at the first position
    /// whose bound exceeds the best distance. The default.
    LowerBound,
    /// Seeded random order. Exists to demonstrate that visit order changes
    /// counters but never the result.
    Shuffled(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwampOptions {
    /// Worker threads for the per-level scans; 1 keeps everything sequential.
    pub threads: usize,
    pub outer_order: OuterOrder,
    /// Keep the seed profile and every level profile in the outcome.
    pub keep_profiles: bool,
}

impl Default for SwampOptions {
    fn default() -> Self {
        SwampOptions { threads: 1, outer_order: OuterOrder::LowerBound, keep_profiles: false }
    }
}

/// What phase one learned: a concrete candidate pair whose true DTW distance
/// upper-bounds the motif distance, the positions proven unable to beat it,
/// and the finest-level bounds that drive the phase-two visit order.
#[derive(Debug, Clone)]
pub struct PhaseOneState {
    /// True DTW distance of `best_pair`; never an estimate.
    pub best_so_far: f64,
    pub best_pair: (usize, usize),
    pub pruned: Vec<bool>,
    /// The factor-1 level; `lbmp` orders phase two, `lb_index` names each
    /// position's bound-nearest neighbor.
    pub final_level: LevelProfile,
    pub levels: Vec<LevelPruneStat>,
    /// Seed DTW plus one confirmation DTW per level.
    pub confirm_dtw_calls: u64,
    pub(crate) ties: Vec<(f64, usize, usize)>,
    pub(crate) ed_profile: Option<Profile>,
    pub(crate) level_profiles: Vec<LevelProfile>,
    pub(crate) elapsed: Option<Duration>,
}

/// Search result plus the profiles retained under
/// [`SwampOptions::keep_profiles`].
#[derive(Debug, Clone)]
pub struct SwampOutcome {
    pub motif: MotifResult,
    pub ed_profile: Option<Profile>,
    pub level_profiles: Vec<LevelProfile>,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn shuffle(order: &mut [usize], seed: u64) {
    let mut state = seed;
    for i in (1..order.len()).rev() {
        let j = (splitmix64(&mut state) % (i as u64 + 1)) as usize;
        order.swap(i, j);
    }
}

#[cfg(feature = "std")]
fn now() -> Option<std::time::Instant> {
    Some(std::time::Instant::now())
}

#[cfg(not(feature = "std"))]
fn now() -> Option<()> {
    None
}

#[cfg(feature = "std")]
fn elapsed(start: &Option<std::time::Instant>) -> Option<Duration> {
    start.as_ref().map(|s| s.elapsed())
}

#[cfg(not(feature = "std"))]
fn elapsed(_start: &Option<()>) -> Option<Duration> {
    None
}

/// Subsequence accessor shared by both phases; `Raw` borrows straight from
/// the series, `ZNorm` normalizes into a caller-provided buffer.
struct Viewer<'a> {
    x: &'a [f64],
    l: usize,
    znorm: Option<crate::series::SlidingStats>,
}

impl<'a> Viewer<'a> {
    fn new(ts: &'a TimeSeries, cfg: &SearchConfig) -> Result<Viewer<'a>> {
        let znorm = match cfg.normalization {
            Normalization::Raw => None,
            Normalization::ZNorm => Some(ts.sliding_stats(cfg.subseq_len)?),
        };
        Ok(Viewer { x: ts.values(), l: cfg.subseq_len, znorm })
    }

    fn view<'b>(&'b self, i: usize, buf: &'b mut Vec<f64>) -> &'b [f64] {
        let raw = &self.x[i..i + self.l];
        match &self.znorm {
            None => raw,
            Some(stats) => {
                buf.clear();
                let (mean, std) = (stats.means[i], stats.stds[i]);
                if std < DEGENERATE_STD {
                    buf.resize(self.l, 0.0);
                } else {
                    buf.extend(raw.iter().map(|&v| (v - mean) / std));
                }
                buf
            }
        }
    }
}

/// Coarse-to-fine halving schedule ending at factor 1.
fn level_schedule(l: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = l;
    loop {
        out.push(d);
        if d == 1 {
            break;
        }
        d /= 2;
    }
    out
}

struct BestTracker {
    best: f64,
    pair: (usize, usize),
    eps: f64,
    ties: Vec<(f64, usize, usize)>,
}

impl BestTracker {
    /// Records a true DTW distance for a concrete pair. Returns whether the
    /// best distance improved.
    fn observe(&mut self, d: f64, i: usize, j: usize) -> bool {
        let improved = d < self.best;
        if d <= self.best + self.eps || improved {
            if improved {
                self.best = d;
                self.pair = (i, j);
            }
            self.ties.push((d, i, j));
            if self.ties.len() > 4096 {
                let keep = self.best + self.eps;
                self.ties.retain(|&(d, _, _)| d <= keep);
            }
        }
        improved
    }

    /// Lexicographically smallest pair within `eps` of the best distance,
    /// reported with its own distance.
    fn resolve(mut self) -> (f64, usize, usize) {
        let keep = self.best + self.eps;
        self.ties.retain(|&(d, _, _)| d <= keep);
        self.ties
            .into_iter()
            .min_by(|a, b| (a.1, a.2).cmp(&(b.1, b.2)))
            .expect("a validated search always observes at least one pair")
    }
}

/// Runs phase one with default options.
pub fn compute_dsmp(ts: &TimeSeries, cfg: &SearchConfig) -> Result<PhaseOneState> {
    compute_dsmp_with(ts, cfg, SwampOptions::default())
}

/// Runs phase one: seed, hierarchy, pruning. The returned state still holds
/// the tie candidates observed so far, which phase two extends.
pub fn compute_dsmp_with(
    ts: &TimeSeries,
    cfg: &SearchConfig,
    opts: SwampOptions,
) -> Result<PhaseOneState> {
    cfg.validate(ts.len())?;
    let started = now();
    let l = cfg.subseq_len;
    let w = cfg.window;
    let eps = cfg.epsilon;
    let m = ts.len() - l + 1;
    let viewer = Viewer::new(ts, cfg)?;
    let mut buf_a = Vec::new();
    let mut buf_b = Vec::new();
    let mut scratch = DtwScratch::default();

    // Seed: the Euclidean motif pair is cheap to find and its true DTW
    // distance is a valid upper bound from the start.
    let ed = ed_matrix_profile(ts, l, cfg.normalization)?;
    let seed_i = ed.argmin().expect("n >= 2L guarantees a non-trivial pair");
    let seed_j = ed.nn_index[seed_i];
    let (seed_i, seed_j) = (seed_i.min(seed_j), seed_i.max(seed_j));
    let d = {
        let a = viewer.view(seed_i, &mut buf_a);
        let b = viewer.view(seed_j, &mut buf_b);
        dtw_with_scratch(a, b, w, None, &mut scratch)?
    };
    let mut tracker =
        BestTracker { best: d, pair: (seed_i, seed_j), eps, ties: vec![(d, seed_i, seed_j)] };
    let mut confirm_dtw_calls = 1u64;

    let mut pruned = vec![false; m];
    let mut total_pruned = 0usize;
    let mut levels = Vec::new();
    let mut level_profiles = Vec::new();
    let schedule = match cfg.normalization {
        Normalization::Raw => level_schedule(l),
        // Aggregate downsampling has no admissible bound once every
        // subsequence is normalized on its own, so the hierarchy collapses
        // to the full-resolution level.
        Normalization::ZNorm => vec![1],
    };
    let mut final_level = None;
    for (idx, &factor) in schedule.iter().enumerate() {
        let profile = match cfg.normalization {
            Normalization::Raw => lb_keogh_dsmp_mt(ts, l, factor, w, &pruned, opts.threads)?,
            Normalization::ZNorm => lb_keogh_profile_znorm(ts, l, w, &pruned, opts.threads)?,
        };

        // Confirm: take the best frame pair the level proposes and measure
        // its true DTW distance; any concrete pair may lower the bound.
        let mut best_frame = None;
        for (q, &v) in profile.frame_min.iter().enumerate() {
            if v.is_finite() && best_frame.map_or(true, |(_, b)| v < b) {
                best_frame = Some((q, v));
            }
        }
        if let Some((q, _)) = best_frame {
            let c = profile.frame_nn[q];
            let span = |f: usize| (f * factor)..((f * factor + factor).min(m));
            let i_star = span(q).find(|&p| !pruned[p]);
            if let Some(i_star) = i_star {
                let p_star = span(c).find(|&p| !pruned[p] && p.abs_diff(i_star) >= l);
                if let Some(p_star) = p_star {
                    let (pi, pj) = (i_star.min(p_star), i_star.max(p_star));
                    let d = {
                        let a = viewer.view(pi, &mut buf_a);
                        let b = viewer.view(pj, &mut buf_b);
                        dtw_with_scratch(a, b, w, Some(tracker.best + eps), &mut scratch)?
                    };
                    confirm_dtw_calls += 1;
                    tracker.observe(d, pi, pj);
                }
            }
        }

        let mut lbmp_min = f64::INFINITY;
        let mut newly = 0usize;
        let cut = tracker.best + eps;
        for p in 0..m {
            if pruned[p] {
                continue;
            }
            let v = profile.lbmp[p];
            lbmp_min = lbmp_min.min(v);
            if v > cut {
                pruned[p] = true;
                newly += 1;
            }
        }
        total_pruned += newly;
        levels.push(LevelPruneStat {
            level: factor,
            lbmp_min: lbmp_min.is_finite().then_some(lbmp_min),
            newly_pruned: newly,
            total_pruned,
        });

        let last = idx + 1 == schedule.len();
        if opts.keep_profiles {
            level_profiles.push(profile.clone());
        }
        if last {
            final_level = Some(profile);
        }
    }

    Ok(PhaseOneState {
        best_so_far: tracker.best,
        best_pair: tracker.pair,
        pruned,
        final_level: final_level.expect("schedule is never empty"),
        levels,
        confirm_dtw_calls,
        ties: tracker.ties,
        ed_profile: opts.keep_profiles.then_some(ed),
        level_profiles,
        elapsed: elapsed(&started),
    })
}

/// Exact top-1 DTW motif with default options.
pub fn swamp_search(ts: &TimeSeries, cfg: &SearchConfig) -> Result<MotifResult> {
    Ok(swamp_search_with(ts, cfg, SwampOptions::default())?.motif)
}

/// Exact top-1 DTW motif. Visits surviving positions in the configured
/// order; every skipped pair is covered by an admissible lower bound above
/// the final distance, so ordering and pruning never change the result.
pub fn swamp_search_with(
    ts: &TimeSeries,
    cfg: &SearchConfig,
    opts: SwampOptions,
) -> Result<SwampOutcome> {
    let mut state = compute_dsmp_with(ts, cfg, opts)?;
    let started = now();
    let l = cfg.subseq_len;
    let w = cfg.window;
    let eps = cfg.epsilon;
    let m = ts.len() - l + 1;
    let viewer = Viewer::new(ts, cfg)?;
    let mut buf_a = Vec::new();
    let mut buf_b = Vec::new();
    let mut scratch = DtwScratch::default();

    let lbmp = &state.final_level.lbmp;
    let lb_nn = &state.final_level.lb_index;
    let pruned = &mut state.pruned;
    let phase1_pruned = pruned.iter().filter(|&&p| p).count();
    let mut tracker = BestTracker {
        best: state.best_so_far,
        pair: state.best_pair,
        eps,
        ties: core::mem::take(&mut state.ties),
    };

    let mut order: Vec<usize> = (0..m).filter(|&p| !pruned[p]).collect();
    let sorted = match opts.outer_order {
        OuterOrder::LowerBound => {
            order.sort_unstable_by(|&a, &b| lbmp[a].total_cmp(&lbmp[b]).then(a.cmp(&b)));
            true
        }
        OuterOrder::Shuffled(seed) => {
            shuffle(&mut order, seed);
            false
        }
    };

    let mut phase2_pairs = 0u64;
    let mut lb_kim_calls = 0u64;
    let mut lb_keogh_calls = 0u64;
    let mut dtw_calls = 0u64;
    let mut repruned = 0u64;
    for &i in &order {
        if pruned[i] {
            continue;
        }
        if lbmp[i] > tracker.best + eps {
            if sorted {
                break;
            }
            continue;
        }
        let anchor = viewer.view(i, &mut buf_a);
        let env = compute_envelope(anchor, w)?;
        // The level's bound-nearest neighbor is the likeliest improver, so
        // it goes first; the remaining forward candidates follow in order.
        let nn = lb_nn[i];
        let nn_first = nn >= i + l && nn < m;
        let inner = nn_first
            .then_some(nn)
            .into_iter()
            .chain((i + l..m).filter(|&j| !(nn_first && j == nn)));
        for j in inner {
            if pruned[j] {
                continue;
            }
            phase2_pairs += 1;
            let cut = tracker.best + eps;
            let cand = viewer.view(j, &mut buf_b);
            lb_kim_calls += 1;
            if lb_kim_fl(anchor, cand)? > cut {
                continue;
            }
            lb_keogh_calls += 1;
            if lb_keogh(&env, cand, Some(cut))? > cut {
                continue;
            }
            dtw_calls += 1;
            let d = dtw_with_scratch(anchor, cand, w, Some(cut), &mut scratch)?;
            if d <= cut && tracker.observe(d, i, j) {
                // A better pair shrinks the threshold; retire everything the
                // stored bounds now exclude.
                let cut = tracker.best + eps;
                for p in 0..m {
                    if !pruned[p] && lbmp[p] > cut {
                        pruned[p] = true;
                        repruned += 1;
                    }
                }
            }
        }
    }

    let (distance, first, second) = tracker.resolve();
    let stats = SearchStats {
        positions: m,
        total_pairs: cfg.total_pairs(ts.len()),
        pruned_fraction: phase1_pruned as f64 / m as f64,
        levels: core::mem::take(&mut state.levels),
        phase2_pairs,
        lb_kim_calls,
        lb_keogh_calls,
        dtw_calls,
        confirm_dtw_calls: state.confirm_dtw_calls,
        repruned,
        timings: PhaseTimings { phase1: state.elapsed, phase2: elapsed(&started) },
    };
    Ok(SwampOutcome {
        motif: MotifResult { first, second, distance, stats },
        ed_profile: state.ed_profile.take(),
        level_profiles: core::mem::take(&mut state.level_profiles),
    })
}
