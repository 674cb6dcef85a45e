//! Criterion benchmarks for drp-core live under `benches/`.
