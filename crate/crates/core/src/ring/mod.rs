//! Exact arithmetic in ℤ[ω] and ℤ[√2], plus ring-valued matrices.

mod matrix;
mod root2;
pub(crate) mod serial;
mod zomega;

pub use matrix::RingUnitary;
pub(crate) use matrix::sqrt2_pow;
pub(crate) use root2::big_to_f64;
pub use root2::Root2Int;
pub use zomega::{CyclotomicInt, ParseRingError};
