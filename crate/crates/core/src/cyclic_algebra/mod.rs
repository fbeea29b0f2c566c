//! The cyclic algebra D_{g,t} over F_q(t), its expansion at t, reduced
//! invariants, invariant test functions and their Fourier transforms.

mod descriptor;
mod element;
mod invariant;
mod jet;
mod pairs;
mod ring;

pub use descriptor::AlgebraDescriptor;
pub use element::{AlgebraElement, CharPoly};
pub use invariant::{
    dual_exponent, invariant_fn, invariant_fns, random_jet, random_unit, AlgRecipe, AlgebraTestFunction, Pairing,
};
pub use jet::{AlgebraJet, AlgebraWindow, CharPolyJet};
pub use pairs::{
    matched_pair, matched_pair_l, standard_pairs, standard_recipes, theorem_a_report, MatchedPair, Provenance, TheoremAReport,
    TheoremARow,
};

/// x·y.
pub fn alg_mul(x: &AlgebraElement, y: &AlgebraElement) -> crate::error::Result<AlgebraElement> {
    x.mul(y)
}

/// The reduction of an element of S_0 to S_0/tS_0.
pub fn residue_algebra_class(x: &AlgebraElement) -> crate::error::Result<AlgebraJet> {
    if !x.s0_test() {
        return Err(crate::error::Error::Precondition("element is not in S_0".into()));
    }
    let n = x.descriptor().n();
    AlgebraJet::from_element(x, AlgebraWindow::from_t_window(n, 0, 1))
}

#[cfg(test)]
mod tests;
