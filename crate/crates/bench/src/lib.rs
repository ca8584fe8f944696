//! Criterion benchmarks for `teamgame-core`; see `benches/`.
