//! Simplicial sets as finite-dimensional operator calculus.
//!
//! The crate builds truncated simplicial sets ([`sset`]), turns their face and
//! degeneracy maps into exact integer operators ([`hilbert`]), computes
//! homology by exact and spectral methods ([`homology`]), checks simplicial
//! quantum circuits ([`circuits`]), encodes simplices into bit registers
//! ([`encoding`]) and simulates the Grover and phase-estimation pipeline for
//! Betti numbers ([`qsim`]). The [`cli`] module holds the JSON front end used
//! by the `sqhom` binary.

pub mod circuits;
pub mod cli;
pub mod encoding;
pub mod error;
pub mod fixtures;
pub mod hilbert;
pub mod homology;
pub mod linalg;
pub mod qsim;
pub mod sset;

pub use error::{Error, Result};
