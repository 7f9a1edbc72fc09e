//! Criterion benchmarks for harmap-core live under `benches/`.
