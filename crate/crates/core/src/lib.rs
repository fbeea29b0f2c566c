//! Exact harmonic analysis over finite fields and the rational function field F_q(t).
//!
//! Values are exact elements of Q(ζ_p). The crate covers exponential-sum
//! classes and their point-count specializations, jet-level test functions at
//! the places of P¹, the residue-pairing Fourier transform, the rational-point
//! functional with Poisson summation, and cyclic division algebras over F_q(t).

pub mod cyclic_algebra;
pub mod error;
pub mod globalfield;
pub mod localfield;
pub mod motivic;
pub mod parse;
pub mod poly;
pub mod scalars;
pub mod transform;

pub use error::{Error, Result};
