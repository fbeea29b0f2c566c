//! Reduced rational functions in F_q(t).

use std::fmt;
use std::sync::Arc;

use crate::poly::Poly;
use crate::scalars::{Fe, GaloisField};

use super::{Divisor, Place};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    /// num/den in lowest terms with monic denominator; panics on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero(num.field());
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap());
        let lead = d.leading();
        if lead != Fe::ONE {
            let inv = d.field().inv(lead);
            n = n.scale(inv);
            d = d.scale(inv);
        }
        RationalFn { num: n, den: d }
    }

    pub fn from_poly(p: Poly) -> Self {
        let one = Poly::one(p.field());
        RationalFn { num: p, den: one }
    }

    pub fn zero(field: &Arc<GaloisField>) -> Self {
        RationalFn {
            num: Poly::zero(field),
            den: Poly::one(field),
        }
    }

    pub fn one(field: &Arc<GaloisField>) -> Self {
        Self::constant(field, Fe::ONE)
    }

    pub fn constant(field: &Arc<GaloisField>, c: Fe) -> Self {
        Self::from_poly(Poly::constant(field, c))
    }

    pub fn t(field: &Arc<GaloisField>) -> Self {
        Self::from_poly(Poly::t(field))
    }

    /// t^k for any integer k.
    pub fn t_pow(field: &Arc<GaloisField>, k: i64) -> Self {
        let m = Poly::monomial(field, Fe::ONE, k.unsigned_abs() as usize);
        if k >= 0 {
            Self::from_poly(m)
        } else {
            RationalFn::new(Poly::one(field), m)
        }
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RationalFn::new(self.num.add(&o.num), self.den.clone());
        }
        RationalFn::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.field());
        }
        RationalFn::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn scale(&self, c: Fe) -> Self {
        RationalFn::new(self.num.scale(c), self.den.clone())
    }

    pub fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| RationalFn::new(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, k: i64) -> Option<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut r = Self::one(self.field());
        for _ in 0..k.unsigned_abs() {
            r = r.mul(&base);
        }
        Some(r)
    }

    /// Valuation at a place; `i64::MAX` for zero.
    pub fn valuation(&self, place: &Place) -> i64 {
        if self.is_zero() {
            return i64::MAX;
        }
        match place {
            Place::Infinity => self.den.degree() - self.num.degree(),
            Place::Finite(p) => self.num.valuation(p) as i64 - self.den.valuation(p) as i64,
        }
    }

    /// Principal divisor over the support of numerator, denominator and infinity.
    pub fn divisor(&self) -> Divisor {
        let mut d = Divisor::new();
        if self.is_zero() {
            return d;
        }
        for p in [&self.num, &self.den] {
            for f in factor_monic(&p.monic()) {
                let pl = Place::Finite(f);
                let v = self.valuation(&pl);
                if d.get(&pl) == 0 {
                    d.add_place(pl, v);
                }
            }
        }
        d.add_place(Place::Infinity, self.valuation(&Place::Infinity));
        d
    }

    /// Finite places where this function has a pole.
    pub fn finite_poles(&self) -> Vec<Place> {
        factor_monic(&self.den).into_iter().map(Place::Finite).collect()
    }
}

/// Distinct monic irreducible factors, by trial division in increasing order.
pub fn factor_monic(p: &Poly) -> Vec<Poly> {
    let field = p.field().clone();
    let mut rest = p.monic();
    let mut out = Vec::new();
    let mut d = 1usize;
    while rest.degree() >= 1 {
        if 2 * d > rest.degree() as usize {
            out.push(rest.clone());
            break;
        }
        for cand in Poly::monic_of_degree(&field, d) {
            if rest.degree() < d as i64 {
                break;
            }
            if rest.rem(&cand).is_zero() && cand.is_irreducible() {
                out.push(cand.clone());
                while let Some(q) = rest.div_exact(&cand) {
                    rest = q;
                    if rest.degree() < 1 {
                        break;
                    }
                }
            }
        }
        d += 1;
    }
    out.sort();
    out
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
