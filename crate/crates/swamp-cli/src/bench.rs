//! Tightness-versus-cost measurement for the lower-bound family, over a
//! sample of non-trivial subsequence pairs. Tightness of a bound on a pair
//! is bound / dtw; the dtw row is pinned at 1.0 since a distance bounds
//! itself.

use std::hint::black_box;
use std::time::Instant;

use anyhow::{ensure, Context, Result};
use swamp_core::distance::{compute_envelope, dtw, lb_keogh, lb_kim_fl, Envelope};
use swamp_core::paa::{downsampled_envelope, lb_keogh_paa, paa, PaaSeries};
use swamp_core::{SearchConfig, TimeSeries};

use crate::gen::Rng;
use crate::report::BenchRow;

pub struct BenchParams {
    pub pairs: usize,
    pub seed: u64,
    /// Downsampling factors for the aggregate rows, coarsest first.
    pub levels: Vec<usize>,
    pub timed: bool,
}

/// Halving factors L, L/2, ..., 2; the factor-1 bound appears as its own
/// full-resolution row.
pub fn default_levels(l: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = l;
    while d >= 2 {
        out.push(d);
        d /= 2;
    }
    out
}

struct PairData {
    query: Vec<f64>,
    cand: Vec<f64>,
    env: Envelope,
    /// Per level: downsampled query envelope and candidate aggregate.
    levels: Vec<(PaaSeries, PaaSeries, PaaSeries)>,
    dtw: f64,
}

/// Mean compute time per call in nanoseconds. Each pair is called several
/// times back to back so the first, cold-cache call is amortized and the
/// figure reflects the bound's own cost; the repeat count is calibrated from
/// a warm pass so cheap bounds get long hot runs while expensive ones are
/// not over-sampled. The fastest of five sweeps is kept to shed scheduler
/// noise.
fn time_per_call(pairs: usize, mut f: impl FnMut(usize) -> f64) -> f64 {
    let start = Instant::now();
    for k in 0..pairs {
        black_box(f(k));
    }
    let warm = start.elapsed().as_secs_f64();
    let inner = ((0.01 / warm.max(1e-9)) as usize).clamp(1, 64);
    let mut best = f64::INFINITY;
    for _ in 0..5 {
        let start = Instant::now();
        for k in 0..pairs {
            for _ in 0..inner {
                black_box(f(k));
            }
        }
        best = best.min(start.elapsed().as_secs_f64() / (pairs * inner) as f64);
    }
    best * 1e9
}

pub fn bench_lb(ts: &TimeSeries, cfg: &SearchConfig, params: &BenchParams) -> Result<Vec<BenchRow>> {
    cfg.validate(ts.len())?;
    ensure!(params.pairs >= 1, "need at least one sampled pair");
    let l = cfg.subseq_len;
    let w = cfg.window;
    let m = ts.len() - l + 1;
    for &d in &params.levels {
        ensure!(
            (1..=l).contains(&d),
            "downsampling factor {d} is outside 1..={l}"
        );
    }

    // Positive-distance pairs only, so per-pair tightness is well defined.
    let mut rng = Rng::new(params.seed.wrapping_add(1));
    let mut data = Vec::with_capacity(params.pairs);
    let mut attempts = 0usize;
    while data.len() < params.pairs {
        attempts += 1;
        ensure!(
            attempts <= params.pairs * 1000,
            "could not sample {} non-degenerate pairs; the series may be constant",
            params.pairs
        );
        let i = rng.below(m);
        let j = rng.below(m);
        if i.abs_diff(j) < l {
            continue;
        }
        let query = ts
            .subsequence_view(i, l, cfg.normalization)
            .context("query view")?;
        let cand = ts
            .subsequence_view(j, l, cfg.normalization)
            .context("candidate view")?;
        let d = dtw(&query, &cand, w, None)?;
        if d < 1e-12 {
            continue;
        }
        let env = compute_envelope(&query, w)?;
        let mut levels = Vec::with_capacity(params.levels.len());
        for &factor in &params.levels {
            let (du, dl) = downsampled_envelope(&env, factor)?;
            let pc = paa(&cand, factor)?;
            levels.push((du, dl, pc));
        }
        data.push(PairData { query, cand, env, levels, dtw: d });
    }

    let mean = |f: &dyn Fn(&PairData) -> f64| -> f64 {
        data.iter().map(|p| f(p) / p.dtw).sum::<f64>() / data.len() as f64
    };
    let mut table = Vec::new();

    let kim = |p: &PairData| lb_kim_fl(&p.query, &p.cand).expect("lengths agree");
    table.push(BenchRow {
        bound: "lb_kim_fl".into(),
        level: None,
        tightness: mean(&kim),
        time_ns: params.timed.then(|| time_per_call(data.len(), |k| kim(&data[k]))),
    });

    for (li, &factor) in params.levels.iter().enumerate() {
        let row = |p: &PairData| {
            let (du, dl, pc) = &p.levels[li];
            lb_keogh_paa(du, dl, pc).expect("levels agree")
        };
        table.push(BenchRow {
            bound: "lb_keogh_paa".into(),
            level: Some(factor),
            tightness: mean(&row),
            time_ns: params.timed.then(|| time_per_call(data.len(), |k| row(&data[k]))),
        });
    }

    let keogh = |p: &PairData| lb_keogh(&p.env, &p.cand, None).expect("lengths agree");
    table.push(BenchRow {
        bound: "lb_keogh".into(),
        level: Some(1),
        tightness: mean(&keogh),
        time_ns: params.timed.then(|| time_per_call(data.len(), |k| keogh(&data[k]))),
    });

    let full = |p: &PairData| dtw(&p.query, &p.cand, w, None).expect("lengths agree");
    table.push(BenchRow {
        bound: "dtw".into(),
        level: None,
        tightness: 1.0,
        time_ns: params.timed.then(|| time_per_call(data.len(), |k| full(&data[k]))),
    });

    Ok(table)
}
