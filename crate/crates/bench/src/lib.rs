//! Criterion benchmarks for the core crate; see `benches/geometry.rs`.
