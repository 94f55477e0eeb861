//! Criterion benchmarks for syncfn-core; see `benches/`.
