//! Benchmark support crate; see `benches/engine.rs`.
