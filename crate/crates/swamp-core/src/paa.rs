//! Piecewise aggregate approximation: frame means, downsampled envelopes,
//! the scaled downsampled LB_Keogh kernel, and conservative mask reduction.

use alloc::vec::Vec;

use crate::distance::Envelope;
use crate::error::{Error, Result};
use crate::math::{sq, sqrt};

/// A series reduced by factor `factor`: value `j` is the mean of source
/// points `[j * factor, (j + 1) * factor)`. A trailing remainder shorter than
/// `factor` is dropped, so every frame covers exactly `factor` points and the
/// `sqrt(factor)` lower-bound scaling stays admissible.
#[derive(Debug, Clone, PartialEq)]
pub struct PaaSeries {
    pub values: Vec<f64>,
    pub factor: usize,
    pub source_len: usize,
}

impl PaaSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn paa(source: &[f64], factor: usize) -> Result<PaaSeries> {
    let n = source.len();
    if factor < 1 || factor > n {
        return Err(Error::BadFactor { factor, max: n });
    }
    let inv = 1.0 / factor as f64;
    let values = source
        .chunks_exact(factor)
        .map(|frame| frame.iter().sum::<f64>() * inv)
        .collect();
    Ok(PaaSeries { values, factor, source_len: n })
}

/// PAA of the upper and lower envelopes separately. The envelope must come
/// from the full-resolution sequence; reducing first and enveloping second
/// would not stay above the warped values.
pub fn downsampled_envelope(env: &Envelope, factor: usize) -> Result<(PaaSeries, PaaSeries)> {
    let upper = paa(&env.upper, factor)?;
    let lower = paa(&env.lower, factor)?;
    Ok((upper, lower))
}

/// LB_Keogh on reduced envelopes and candidate, scaled by `sqrt(factor)` so
/// it still lower-bounds the DTW distance of the full-resolution pair.
pub fn lb_keogh_paa(upper: &PaaSeries, lower: &PaaSeries, cand: &PaaSeries) -> Result<f64> {
    if upper.len() != cand.len() || lower.len() != cand.len() {
        return Err(Error::LengthMismatch { left: upper.len(), right: cand.len() });
    }
    if upper.factor != cand.factor || lower.factor != cand.factor {
        return Err(Error::BadFactor { factor: cand.factor, max: upper.factor });
    }
    let mut sum = 0.0;
    for ((&v, &up), &lo) in cand.values.iter().zip(&upper.values).zip(&lower.values) {
        if v > up {
            sum += sq(v - up);
        } else if v < lo {
            sum += sq(lo - v);
        }
    }
    Ok(sqrt(cand.factor as f64 * sum))
}

/// Reduces a pruned mask by `factor`: a frame is pruned only when every
/// position it covers is pruned. Any other reduction could discard positions
/// that are still alive at full resolution.
pub fn downsample_mask(mask: &[bool], factor: usize) -> Vec<bool> {
    if factor <= 1 {
        return mask.to_vec();
    }
    mask.chunks(factor).map(|c| c.iter().all(|&b| b)).collect()
}

/// Means of every length-`factor` window (all starts, not just aligned ones).
pub fn sliding_mean(source: &[f64], factor: usize) -> Result<Vec<f64>> {
    let n = source.len();
    if factor < 1 || factor > n {
        return Err(Error::BadFactor { factor, max: n });
    }
    if factor == 1 {
        return Ok(source.to_vec());
    }
    let inv = 1.0 / factor as f64;
    let mut out = Vec::with_capacity(n - factor + 1);
    let mut sum: f64 = source[..factor].iter().sum();
    let mut comp = 0.0;
    out.push(sum * inv);
    for t in factor..n {
        // Neumaier-compensated rolling update keeps long windows from drifting.
        for v in [source[t], -source[t - factor]] {
            let s = sum + v;
            if sum.abs() >= v.abs() {
                comp += (sum - s) + v;
            } else {
                comp += (v - s) + sum;
            }
            sum = s;
        }
        out.push((sum + comp) * inv);
    }
    Ok(out)
}
