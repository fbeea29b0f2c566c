//! Laurent expansions and residues at places of P¹.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalars::{extension, Fe, GaloisField};

use super::{Place, RationalFn};

/// Power-series quotient a/b mod s^k; b(0) must be nonzero.
pub(crate) fn series_div(a: &Poly, b: &Poly, k: usize) -> Vec<Fe> {
    let f = a.field();
    let inv0 = f.inv(b.coeff(0));
    let mut out = vec![Fe::ZERO; k];
    for i in 0..k {
        let mut acc = a.coeff(i);
        for j in 1..=i.min(b.coeffs().len().saturating_sub(1)) {
            acc = f.sub(acc, f.mul(b.coeff(j), out[i - j]));
        }
        out[i] = f.mul(acc, inv0);
    }
    out
}

/// Digits of f at `place` for indices lo..hi, each as `deg place` coefficients
/// of a polynomial of degree below the place degree (constants at infinity).
pub fn laurent_digits(f: &RationalFn, place: &Place, lo: i64, hi: i64) -> Result<Vec<Vec<Fe>>> {
    let d = place.degree() as usize;
    let count = (hi - lo).max(0) as usize;
    if f.is_zero() || count == 0 {
        return Ok(vec![vec![Fe::ZERO; d]; count]);
    }
    let v = f.valuation(place);
    if v < lo {
        return Err(Error::PoleTooDeep { order: -v, allowed: -lo });
    }
    if v >= hi {
        return Ok(vec![vec![Fe::ZERO; d]; count]);
    }
    match place {
        Place::Finite(pi) => {
            let e = f.den().valuation(pi) as i64;
            let den1 = f.den().div_exact(&pi.pow(e as u32)).unwrap();
            let k = -lo - e;
            let a = if k >= 0 {
                f.num().mul(&pi.pow(k as u32))
            } else {
                f.num().div_exact(&pi.pow((-k) as u32)).expect("valuation bound")
            };
            let modulus = pi.pow(count as u32);
            let g = a.mul(&den1.inv_mod(&modulus).expect("coprime to the place")).rem(&modulus);
            Ok(g.digits(pi, count)
                .into_iter()
                .map(|dg| (0..d).map(|j| dg.coeff(j)).collect())
                .collect())
        }
        Place::Infinity => {
            let rn = f.num().reversed();
            let rd = f.den().reversed();
            let series = series_div(&rn, &rd, (hi - v) as usize);
            Ok((lo..hi)
                .map(|i| {
                    let c = if i < v { Fe::ZERO } else { series[(i - v) as usize] };
                    vec![c]
                })
                .collect())
        }
    }
}

/// Rational function Σ digit_i(t)·param^i for digits indexed from `lo`.
pub fn from_digits(field: &Arc<GaloisField>, place: &Place, lo: i64, digits: &[Vec<Fe>]) -> RationalFn {
    let mut acc = RationalFn::zero(field);
    let param = place.parameter(field);
    for (r, dg) in digits.iter().enumerate() {
        if dg.iter().all(|c| c.is_zero()) {
            continue;
        }
        let digit = RationalFn::from_poly(Poly::new(field, dg.clone()));
        acc = acc.add(&digit.mul(&param.pow(lo + r as i64).unwrap()));
    }
    acc
}

/// Residue of f·dt at a place.
///
/// At a finite place of degree d the value is an element of F_{q^d}, the
/// coefficient of (t−θ)^{-1} at the least root θ of the place polynomial. At
/// infinity it lies in F_q and uses dt = −t_∞^{−2} dt_∞.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residue {
    pub value: Fe,
    pub field_degree: u32,
    /// Trace of the residue to F_q.
    pub trace: Fe,
}

pub fn residue(f: &RationalFn, place: &Place) -> Result<Residue> {
    let field = f.field();
    match place {
        Place::Infinity => {
            let c1 = laurent_digits(f, place, f.valuation(place).min(1), 2)?
                .last()
                .map(|d| d[0])
                .unwrap_or(Fe::ZERO);
            let r = field.neg(c1);
            Ok(Residue { value: r, field_degree: 1, trace: r })
        }
        Place::Finite(pi) => {
            let d = pi.degree() as u32;
            let ext = extension(field, d)?;
            let top = ext.top();
            if f.is_zero() {
                return Ok(Residue { value: Fe::ZERO, field_degree: d, trace: Fe::ZERO });
            }
            let theta = pi.roots_in(&ext)[0];
            // p(θ + s) by Horner in s.
            let shift = |p: &Poly| -> Poly {
                let lin = Poly::new(top, vec![theta, Fe::ONE]);
                p.coeffs().iter().rev().fold(Poly::zero(top), |acc, &c| {
                    acc.mul(&lin).add(&Poly::constant(top, ext.embed(c)))
                })
            };
            let n = shift(f.num());
            let dn = shift(f.den());
            let vn = n.coeffs().iter().take_while(|c| c.is_zero()).count() as i64;
            let vd = dn.coeffs().iter().take_while(|c| c.is_zero()).count() as i64;
            let need = vd - vn - 1;
            let value = if need < 0 {
                Fe::ZERO
            } else {
                let n1 = Poly::new(top, n.coeffs()[vn as usize..].to_vec());
                let d1 = Poly::new(top, dn.coeffs()[vd as usize..].to_vec());
                series_div(&n1, &d1, need as usize + 1)[need as usize]
            };
            Ok(Residue { value, field_degree: d, trace: ext.trace(value) })
        }
    }
}

/// Trace of the residue read off the π-adic digits: the top coefficient of the
/// digit at index −1 (finite places) or minus the coefficient at index 1 (infinity).
pub fn residue_trace_from_digits(f: &RationalFn, place: &Place) -> Result<Fe> {
    let field = f.field();
    let lo = f.valuation(place).min(-1);
    match place {
        Place::Infinity => {
            let lo = f.valuation(place).min(1);
            let dg = laurent_digits(f, place, lo, 2)?;
            Ok(field.neg(dg.last().unwrap()[0]))
        }
        Place::Finite(_) => {
            let d = place.degree() as usize;
            let dg = laurent_digits(f, place, lo, 0)?;
            Ok(dg.last().unwrap()[d - 1])
        }
    }
}
