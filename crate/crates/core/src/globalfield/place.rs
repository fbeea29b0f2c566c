//! Places of P¹ over F_q and divisors.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalars::GaloisField;

use super::RationalFn;

/// A closed point of P¹: a monic irreducible polynomial or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Infinity,
    Finite(Poly),
}

impl Place {
    pub fn finite(poly: Poly) -> Result<Place> {
        if !poly.is_monic() || !poly.is_irreducible() {
            return Err(Error::Invalid(format!("{poly} is not monic irreducible")));
        }
        Ok(Place::Finite(poly))
    }

    /// The place t = c.
    pub fn rational(field: &Arc<GaloisField>, c: crate::scalars::Fe) -> Place {
        Place::Finite(Poly::linear(field, c))
    }

    pub fn degree(&self) -> u32 {
        match self {
            Place::Infinity => 1,
            Place::Finite(p) => p.degree() as u32,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Place::Infinity)
    }

    pub fn poly(&self) -> Option<&Poly> {
        match self {
            Place::Finite(p) => Some(p),
            Place::Infinity => None,
        }
    }

    /// The uniformizer: the polynomial itself, or 1/t at infinity.
    pub fn parameter(&self, field: &Arc<GaloisField>) -> RationalFn {
        match self {
            Place::Finite(p) => RationalFn::from_poly(p.clone()),
            Place::Infinity => RationalFn::t(field).inv().expect("t is nonzero"),
        }
    }

    /// Parses `inf` or a monic irreducible polynomial in t.
    pub fn parse(field: &Arc<GaloisField>, s: &str) -> Result<Place> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(Place::Infinity);
        }
        Place::finite(crate::parse::parse_univariate(field, s, "t")?)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => f.write_str("inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

/// Infinity followed by all monic irreducibles of degree ≤ `b`.
pub fn places_up_to(field: &Arc<GaloisField>, b: u32) -> Vec<Place> {
    let mut out = vec![Place::Infinity];
    for d in 1..=b as usize {
        out.extend(
            Poly::monic_of_degree(field, d)
                .filter(Poly::is_irreducible)
                .map(Place::Finite),
        );
    }
    out
}

/// Finitely supported integer combination of places.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Divisor {
    mult: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Place, i64)>>(it: I) -> Self {
        let mut d = Divisor::new();
        for (p, k) in it {
            d.add_place(p, k);
        }
        d
    }

    pub fn add_place(&mut self, place: Place, k: i64) {
        let e = self.mult.entry(place.clone()).or_insert(0);
        *e += k;
        if *e == 0 {
            self.mult.remove(&place);
        }
    }

    pub fn get(&self, place: &Place) -> i64 {
        self.mult.get(place).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Place, &i64)> {
        self.mult.iter()
    }

    pub fn degree(&self) -> i64 {
        self.mult.iter().map(|(p, k)| k * p.degree() as i64).sum()
    }

    pub fn sum(&self, other: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (p, k) in other.iter() {
            d.add_place(p.clone(), *k);
        }
        d
    }

    pub fn negate(&self) -> Divisor {
        Divisor::from_pairs(self.mult.iter().map(|(p, k)| (p.clone(), -k)))
    }

    /// Membership of f in L(D).
    pub fn contains(&self, f: &RationalFn) -> bool {
        if f.is_zero() {
            return true;
        }
        f.divisor()
            .iter()
            .all(|(p, &v)| v >= -self.get(p))
            && self.iter().all(|(p, &k)| f.valuation(p) >= -k)
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mult.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.mult.iter().map(|(p, k)| format!("{k}[{p}]")).collect();
        f.write_str(&parts.join(" + "))
    }
}
