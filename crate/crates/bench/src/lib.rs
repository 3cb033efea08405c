//! Criterion benchmarks for `bmf-core`; see `benches/`. Run with
//! `cargo bench -p bmf-bench`.
