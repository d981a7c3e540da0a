//! Criterion benchmarks for the interpreter and the evolutionary loop live
//! in `benches/`; this crate has no library code.
