//! Criterion benchmarks for the proof and strategy pipelines; see
//! `benches/pipeline.rs`. Run with `cargo bench -p bpw-bench`.
