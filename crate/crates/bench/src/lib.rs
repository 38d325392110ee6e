//! Empty library; this crate only hosts benchmarks.
