//! Repeat-until-success Clifford+T synthesis for single-qubit z-rotations.

pub mod circuit;
pub mod error;
pub mod normeq;
pub mod pipeline;
pub mod relation;
pub mod ring;
pub mod rus2q;
pub mod synth1q;
pub mod verify;

pub use error::Error;
