//! Benchmark harness and density enumeration behind the `rusforge` binary.

pub mod bench;
pub mod density;
