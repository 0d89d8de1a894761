//! Criterion benchmarks for the maxcov solvers live in `benches/`.
