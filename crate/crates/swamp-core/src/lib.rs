//! Exact DTW motif discovery for univariate time series.
//!
//! The search runs in two phases. Phase one builds a hierarchy of downsampled
//! LB_Keogh matrix profiles, coarsest resolution first, and prunes every
//! subsequence position whose lower bound already exceeds the best DTW
//! distance seen so far. Phase two scans the surviving positions in ascending
//! lower-bound order through a cascade of cheap bounds (LB_KimFL, then early
//! abandoning LB_Keogh, then early abandoning DTW) and returns the provably
//! best non-overlapping pair.
//!
//! The crate is `no_std`-compatible (with `alloc`); disable the default `std`
//! feature and enable `libm` for embedded targets. Multi-threaded scans are
//! only available with `std`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("swamp-core needs either the `std` or the `libm` feature");

mod error;
mod math;
mod parallel;
#[cfg(test)]
mod testutil;

pub mod distance;
pub mod mprofile;
pub mod oracle;
pub mod paa;
pub mod series;
pub mod swamp;

pub use error::{Error, Result};
pub use series::{
    MotifResult, Normalization, SearchConfig, SearchStats, SlidingStats, TimeSeries,
    DEFAULT_EPSILON,
};
pub use swamp::{
    compute_dsmp, compute_dsmp_with, swamp_search, swamp_search_with, OuterOrder, PhaseOneState,
    SwampOptions, SwampOutcome,
};
