//! Criterion benchmarks for the `atmot-core` kernels; see `benches/kernels.rs`.
