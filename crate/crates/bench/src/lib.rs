//! Criterion benchmarks for leadrel; see `benches/pipeline.rs`.
