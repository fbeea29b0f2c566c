//! Test functions on completions of F_q(t): jet windows, the normalized
//! integral, level moves, the residue pairing and the local Fourier transform.

pub(crate) mod layout;
mod testfn;
mod window;

pub use layout::Block;
pub use testfn::{LocalTestFunction, TableValue};
pub use window::{JetVector, PlaceData, Window};

#[cfg(test)]
mod tests;
