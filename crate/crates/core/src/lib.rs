//! Pattern Sturmian sequences and their discrete Schrödinger operators.
//!
//! The crate builds finite windows of circle-map, Toeplitz and sparse
//! sequences, measures their block and maximal pattern complexity, and
//! studies the operator `(Hψ)(n) = ψ(n+1) + ψ(n-1) + V(n)ψ(n)` through
//! transfer-matrix traces, band approximants, Lyapunov exponents and
//! Gordon-type solution bounds.

pub mod error;
pub mod gordon;
pub mod cocycle;
pub mod complexity;
pub mod sequences;
pub mod spectrum;

pub use error::{Error, Result};
