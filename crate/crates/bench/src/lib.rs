//! Criterion benchmarks for the copmix workspace. See `benches/`.
