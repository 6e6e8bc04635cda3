//! Criterion benchmarks for the numerical kernels of `fluctem-core`; see `benches/`.
