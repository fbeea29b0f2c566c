//! The rational function field F_q(t) with ω = dt: places, divisors,
//! Riemann-Roch spaces, adelic test functions, the rational-point functional
//! and Poisson summation.

mod expansion;
mod place;
mod rational;
mod riemann_roch;
mod testfn;

pub use expansion::{from_digits, laurent_digits, residue, residue_trace_from_digits, Residue};
pub use place::{places_up_to, Divisor, Place};
pub use rational::{factor_monic, RationalFn};
pub use riemann_roch::rr_basis;
pub use testfn::{
    delta_k_counts, GlobalTestFunction, PoissonReport, PoissonBasisSummary, DEFAULT_MAX_ENUM,
};
