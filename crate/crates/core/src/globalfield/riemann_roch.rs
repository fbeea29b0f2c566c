//! Bases of Riemann-Roch spaces on P¹.

use std::sync::Arc;

use crate::poly::Poly;
use crate::scalars::{Fe, GaloisField};

use super::{Divisor, Place, RationalFn};

/// An F_q-basis of L(D) = {f : v_u(f) ≥ −D(u) for all u} ∪ {0}.
///
/// When D is effective at the finite places and D(∞) ≥ −1 the basis is the
/// partial-fraction one: t^k/π^j for k < deg π, 1 ≤ j ≤ D(π), and t^k for
/// k ≤ D(∞). Otherwise it is P·t^k/Q for k ≤ deg D, where Q collects the
/// allowed poles and P the forced zeros.
pub fn rr_basis(field: &Arc<GaloisField>, d: &Divisor) -> Vec<RationalFn> {
    let deg = d.degree();
    if deg < 0 {
        return Vec::new();
    }
    let n_inf = d.get(&Place::Infinity);
    let effective = d
        .iter()
        .all(|(p, &k)| p.is_infinity() || k >= 0);
    if effective && n_inf >= -1 {
        let mut out: Vec<RationalFn> = (0..=n_inf)
            .map(|k| RationalFn::from_poly(Poly::monomial(field, Fe::ONE, k as usize)))
            .collect();
        for (place, &k) in d.iter() {
            let Place::Finite(pi) = place else { continue };
            for j in 1..=k {
                let den = pi.pow(j as u32);
                for m in 0..pi.degree() {
                    out.push(RationalFn::new(Poly::monomial(field, Fe::ONE, m as usize), den.clone()));
                }
            }
        }
        return out;
    }
    let mut q = Poly::one(field);
    let mut p = Poly::one(field);
    for (place, &k) in d.iter() {
        let Place::Finite(pi) = place else { continue };
        if k > 0 {
            q = q.mul(&pi.pow(k as u32));
        } else {
            p = p.mul(&pi.pow((-k) as u32));
        }
    }
    (0..=deg)
        .map(|k| RationalFn::new(p.shift(k as usize), q.clone()))
        .collect()
}
