//! Matrix support: sparse integer matrices, exact rational elimination and
//! symmetric eigen-decomposition.

pub mod exact;
mod sparse;
pub mod spectral;

pub use sparse::{IntMatrix, Triplet};
