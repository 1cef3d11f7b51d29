//! JSON report types. Field layout is fixed: reports are meant to be diffed
//! byte-for-byte in tests, so nothing here may depend on iteration order or
//! thread count, and timings can be left out entirely.

use serde::{Deserialize, Serialize};
use swamp_core::{MotifResult, Normalization, SearchConfig, SearchStats};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDesc {
    /// `file:PATH`, `stdin`, `random-walk`, or `planted-motif`.
    pub source: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<f64>,
    /// 1-based planted pair, present for `planted-motif` input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planted: Option<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub length: usize,
    pub window: usize,
    pub mode: String,
    pub epsilon: f64,
}

impl ConfigEcho {
    pub fn from_config(cfg: &SearchConfig) -> Self {
        ConfigEcho {
            length: cfg.subseq_len,
            window: cfg.window,
            mode: match cfg.normalization {
                Normalization::Raw => "raw".into(),
                Normalization::ZNorm => "znorm".into(),
            },
            epsilon: cfg.epsilon,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotifEcho {
    /// 1-based start of the first subsequence.
    pub i: usize,
    /// 1-based start of the second subsequence.
    pub j: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelEcho {
    pub level: usize,
    pub lbmp_min: Option<f64>,
    pub newly_pruned: usize,
    pub total_pruned: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingsEcho {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase1_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase2_ms: Option<f64>,
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsEcho {
    pub positions: usize,
    pub total_pairs: u64,
    /// Fraction of positions pruned by the end of phase one.
    pub p: f64,
    pub pruned_per_level: Vec<LevelEcho>,
    pub phase2_pairs: u64,
    pub lb_kim_calls: u64,
    pub lb_keogh_calls: u64,
    pub dtw_calls: u64,
    pub confirm_dtw_calls: u64,
    pub repruned: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<TimingsEcho>,
}

impl StatsEcho {
    pub fn from_stats(stats: &SearchStats, with_timings: bool) -> Self {
        let timings = if with_timings {
            let p1 = stats.timings.phase1.map(|d| d.as_secs_f64() * 1e3);
            let p2 = stats.timings.phase2.map(|d| d.as_secs_f64() * 1e3);
            Some(TimingsEcho {
                phase1_ms: p1,
                phase2_ms: p2,
                total_ms: p1.unwrap_or(0.0) + p2.unwrap_or(0.0),
            })
        } else {
            None
        };
        StatsEcho {
            positions: stats.positions,
            total_pairs: stats.total_pairs,
            p: stats.pruned_fraction,
            pruned_per_level: stats
                .levels
                .iter()
                .map(|l| LevelEcho {
                    level: l.level,
                    lbmp_min: l.lbmp_min,
                    newly_pruned: l.newly_pruned,
                    total_pruned: l.total_pruned,
                })
                .collect(),
            phase2_pairs: stats.phase2_pairs,
            lb_kim_calls: stats.lb_kim_calls,
            lb_keogh_calls: stats.lb_keogh_calls,
            dtw_calls: stats.dtw_calls,
            confirm_dtw_calls: stats.confirm_dtw_calls,
            repruned: stats.repruned,
            timings,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub input: InputDesc,
    pub config: ConfigEcho,
    pub motif: MotifEcho,
    pub stats: StatsEcho,
    /// Files written under `--dump-profiles`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dumps: Option<Vec<String>>,
}

impl RunReport {
    pub fn new(
        input: InputDesc,
        cfg: &SearchConfig,
        motif: &MotifResult,
        with_timings: bool,
    ) -> Self {
        RunReport {
            input,
            config: ConfigEcho::from_config(cfg),
            motif: MotifEcho {
                i: motif.first + 1,
                j: motif.second + 1,
                distance: motif.distance,
            },
            stats: StatsEcho::from_stats(&motif.stats, with_timings),
            dumps: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// One row of the lower-bound tightness table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub bound: String,
    /// Downsampling factor where one applies.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    /// Mean of bound / dtw over the sampled pairs; 1.0 for the dtw row.
    pub tightness: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_ns: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub input: InputDesc,
    pub config: ConfigEcho,
    pub pairs: usize,
    pub table: Vec<BenchRow>,
}

impl BenchReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Headerless CSV, one value per line; infinities print as `inf`.
pub fn profile_csv(values: &[f64]) -> String {
    let mut out = String::new();
    for v in values {
        out.push_str(&format!("{v}\n"));
    }
    out
}
