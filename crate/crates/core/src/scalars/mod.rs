//! Finite-field towers and exact additive-character values.

mod cyclotomic;
mod field;

pub use cyclotomic::{cyc_normalize, rational_power, CycScalar};
pub(crate) use field::prime_factors as prime_divisors;
pub use field::{
    extension, field_of_order, is_prime, make_field, prime_power, Extension, Fe, GaloisField,
    MAX_ORDER,
};

/// ψ(x) = ζ_p^{Tr(x)} with the trace taken down to F_p.
pub fn psi(field: &GaloisField, x: Fe) -> CycScalar {
    CycScalar::zeta_pow(field.characteristic(), field.absolute_trace(x))
}

#[cfg(test)]
mod tests;
