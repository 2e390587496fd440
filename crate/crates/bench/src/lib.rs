//! Criterion benchmarks for `dpnl-core`; see `benches/`.
