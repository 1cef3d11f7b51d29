//! Test-only helpers shared across module test suites.

use alloc::vec::Vec;

/// Deterministic splitmix64-driven random walk with unit-ish steps.
pub(crate) fn walk(seed: u64, n: usize) -> Vec<f64> {
    let mut x = seed;
    let mut level = 0.0;
    (0..n)
        .map(|_| {
            x = x.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = x;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            let u = ((z ^ (z >> 31)) >> 11) as f64 / (1u64 << 53) as f64;
            level += u - 0.5;
            level
        })
        .collect()
}
