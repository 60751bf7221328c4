//! Criterion benchmarks for the segal-lab kernels; see `benches/kernels.rs`.
