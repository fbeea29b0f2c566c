use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::globalfield::{from_digits, laurent_digits, Place, RationalFn};
use crate::poly::Poly;
use crate::scalars::{extension, Fe, GaloisField};
use crate::transform::Gram;

/// Jet window t^{-N}O / t^M O.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Window {
    #[serde(rename = "N")]
    pub pole: u32,
    #[serde(rename = "M")]
    pub depth: u32,
}

impl Window {
    pub fn new(pole: u32, depth: u32) -> Self {
        Window { pole, depth }
    }

    pub fn lo(&self) -> i64 {
        -(self.pole as i64)
    }

    pub fn hi(&self) -> i64 {
        self.depth as i64
    }

    pub fn len(&self) -> usize {
        (self.pole + self.depth) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dominates(&self, other: &Window) -> bool {
        self.pole >= other.pole && self.depth >= other.depth
    }

    pub fn join(&self, other: &Window) -> Window {
        Window::new(self.pole.max(other.pole), self.depth.max(other.depth))
    }

    /// The dual window (M−ν, N+ν).
    pub fn dual(&self, nu: i64) -> Result<Window> {
        let n = self.depth as i64 - nu;
        let m = self.pole as i64 + nu;
        if n < 0 || m < 0 {
            return Err(Error::NegativeDepth(format!(
                "dual of ({}, {}) with nu = {nu}",
                self.pole, self.depth
            )));
        }
        Ok(Window::new(n as u32, m as u32))
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.pole, self.depth)
    }
}

/// A place together with the local data of the differential form.
///
/// `nu` is the exponent with O^⊥ = t^ν O. For ω = dt it is 0 at finite places
/// and 2 at infinity; other even values twist the form by a power of the
/// uniformizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceData {
    field: Arc<GaloisField>,
    place: Place,
    nu: i64,
}

impl PlaceData {
    pub fn new(field: &Arc<GaloisField>, place: Place) -> Self {
        let nu = Self::natural_nu(&place);
        PlaceData {
            field: field.clone(),
            place,
            nu,
        }
    }

    pub fn with_nu(field: &Arc<GaloisField>, place: Place, nu: i64) -> Result<Self> {
        if nu % 2 != 0 {
            return Err(Error::OddNu(nu));
        }
        Ok(PlaceData {
            field: field.clone(),
            place,
            nu,
        })
    }

    /// −ord(dt) at the place.
    pub fn natural_nu(place: &Place) -> i64 {
        if place.is_infinity() {
            2
        } else {
            0
        }
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn place(&self) -> &Place {
        &self.place
    }

    pub fn degree(&self) -> u32 {
        self.place.degree()
    }

    pub fn nu(&self) -> i64 {
        self.nu
    }

    pub fn parameter(&self) -> RationalFn {
        self.place.parameter(&self.field)
    }

    /// Dimension of the jet space of a window over F_q.
    pub fn jet_dim(&self, w: Window) -> usize {
        self.degree() as usize * w.len()
    }

    /// r_ν(t^c · π^m) for c < 2d − 1.
    fn pairing_monomial(&self, c: usize, m: i64, cache: &mut Vec<Vec<Poly>>) -> Fe {
        let k = m - (self.nu - Self::natural_nu(&self.place));
        match &self.place {
            Place::Infinity => {
                if c == 0 && k == 1 {
                    self.field.neg(Fe::ONE)
                } else {
                    Fe::ZERO
                }
            }
            Place::Finite(pi) => {
                let idx = -1 - k;
                if idx < 0 || idx > 1 {
                    return Fe::ZERO;
                }
                let d = pi.degree() as usize;
                if cache.is_empty() {
                    *cache = (0..2 * d)
                        .map(|c| Poly::monomial(&self.field, Fe::ONE, c).digits(pi, 2))
                        .collect();
                }
                cache[c][idx as usize].coeff(d - 1)
            }
        }
    }

    /// Gram matrix of (x, y) ↦ r_ν(xy) between the dual window (rows) and `w`.
    pub fn gram(&self, w: Window) -> Result<(Window, Gram)> {
        let dual = w.dual(self.nu)?;
        let d = self.degree() as usize;
        let mut g = Gram::zeros(self.jet_dim(dual), self.jet_dim(w));
        let mut cache = Vec::new();
        for (ra, a) in (dual.lo()..dual.hi()).enumerate() {
            for b in 0..d {
                for (ci, i) in (w.lo()..w.hi()).enumerate() {
                    for j in 0..d {
                        g.rows[ra * d + b][ci * d + j] = self.pairing_monomial(b + j, a + i, &mut cache);
                    }
                }
            }
        }
        Ok((dual, g))
    }

    /// Jet coordinates of a rational function in the window.
    pub fn jet_coords(&self, f: &RationalFn, w: Window) -> Result<Vec<Fe>> {
        Ok(laurent_digits(f, &self.place, w.lo(), w.hi())?
            .into_iter()
            .flatten()
            .collect())
    }

    /// The rational function Σ digit_i π^i represented by jet coordinates.
    pub fn coords_to_rational(&self, coords: &[Fe], w: Window) -> RationalFn {
        let d = self.degree() as usize;
        let digits: Vec<Vec<Fe>> = coords.chunks(d).map(|c| c.to_vec()).collect();
        from_digits(&self.field, &self.place, w.lo(), &digits)
    }

    /// The least root in F_{q^d} of the place polynomial, which identifies the
    /// residue field with F_{q^d}; `None` at infinity.
    pub fn residue_root(&self) -> Result<Option<Fe>> {
        match &self.place {
            Place::Infinity => Ok(None),
            Place::Finite(pi) => {
                let ext = extension(&self.field, pi.degree() as u32)?;
                Ok(pi.roots_in(&ext).first().copied())
            }
        }
    }
}

/// A point of the jet space of `arity` copies of a window at one place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetVector {
    pub place: PlaceData,
    pub window: Window,
    pub arity: usize,
    coords: Vec<Fe>,
}

impl JetVector {
    /// Builds a jet from its flat coordinate list: component, then digit
    /// index from −N to M−1, then the coefficient of t^j within the digit.
    pub fn alpha_encode(place: &PlaceData, window: Window, arity: usize, coords: Vec<Fe>) -> Result<Self> {
        let expected = arity * place.jet_dim(window);
        if coords.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: coords.len(),
            });
        }
        Ok(JetVector {
            place: place.clone(),
            window,
            arity,
            coords,
        })
    }

    pub fn alpha_decode(&self) -> &[Fe] {
        &self.coords
    }

    pub fn zero(place: &PlaceData, window: Window, arity: usize) -> Self {
        JetVector {
            place: place.clone(),
            window,
            arity,
            coords: vec![Fe::ZERO; arity * place.jet_dim(window)],
        }
    }

    pub fn from_index(place: &PlaceData, window: Window, arity: usize, idx: usize) -> Self {
        let dim = arity * place.jet_dim(window);
        let coords = crate::transform::decode(place.field(), idx, dim);
        JetVector {
            place: place.clone(),
            window,
            arity,
            coords,
        }
    }

    pub fn index(&self) -> usize {
        crate::transform::encode(self.place.field(), &self.coords)
    }

    /// Jet of a tuple of rational functions.
    pub fn from_rational(place: &PlaceData, window: Window, fs: &[RationalFn]) -> Result<Self> {
        let mut coords = Vec::new();
        for f in fs {
            coords.extend(place.jet_coords(f, window)?);
        }
        Ok(JetVector {
            place: place.clone(),
            window,
            arity: fs.len(),
            coords,
        })
    }

    /// Representative rational function of one component.
    pub fn component(&self, c: usize) -> RationalFn {
        let dim = self.place.jet_dim(self.window);
        self.place
            .coords_to_rational(&self.coords[c * dim..(c + 1) * dim], self.window)
    }

    pub fn add(&self, other: &JetVector) -> JetVector {
        let f = self.place.field();
        let mut out = self.clone();
        for (a, b) in out.coords.iter_mut().zip(&other.coords) {
            *a = f.add(*a, *b);
        }
        out
    }

    pub fn scale(&self, c: Fe) -> JetVector {
        let f = self.place.field();
        let mut out = self.clone();
        for a in out.coords.iter_mut() {
            *a = f.mul(*a, c);
        }
        out
    }

    pub fn neg(&self) -> JetVector {
        self.scale(self.place.field().neg(Fe::ONE))
    }

    /// r_ν of the product of two single-component jets, read from the Gram
    /// matrix; `self` lives in the dual window of `other`.
    pub fn pairing(&self, other: &JetVector) -> Result<Fe> {
        let (dual, g) = other.place.gram(other.window)?;
        if dual != self.window || self.arity != other.arity {
            return Err(Error::Precondition("jets are not in dual windows".into()));
        }
        let f = self.place.field();
        let dim = other.place.jet_dim(other.window);
        let mut acc = Fe::ZERO;
        for c in 0..self.arity {
            for (a, row) in g.rows.iter().enumerate() {
                let x = self.coords[c * dim + a];
                for (b, &gv) in row.iter().enumerate() {
                    acc = f.add(acc, f.mul(x, f.mul(gv, other.coords[c * dim + b])));
                }
            }
        }
        Ok(acc)
    }

    /// Residue of one component: the residue-field value (in F_{q^d}) and its trace.
    pub fn residue(&self, c: usize) -> Result<crate::globalfield::Residue> {
        let need = if self.place.place().is_infinity() { 1 } else { -1 };
        if need >= self.window.hi() {
            return Err(Error::InsufficientDepth(format!(
                "coefficient {need} lies outside window {}",
                self.window
            )));
        }
        crate::globalfield::residue(&self.component(c), self.place.place())
    }
}
