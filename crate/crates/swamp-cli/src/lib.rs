//! Support library for the `swamp` binary: ingestion, generators, report
//! serialization, and the lower-bound benchmark. Split from `main.rs` so
//! integration tests can drive the pieces directly.

pub mod bench;
pub mod gen;
pub mod ingest;
pub mod report;
