use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalars::{extension, field_of_order, is_prime, Extension, Fe, GaloisField};

/// The data (q, n, g) of D_{g,t} = L[s]/(s·a = g(a)·s, sⁿ = t) with L = F_{qⁿ},
/// g the a-th power of the q-Frobenius and basis d_j = θ^j of L over F_q.
pub struct AlgebraDescriptor {
    base: Arc<GaloisField>,
    n: u32,
    exponent: u32,
    ext: Arc<Extension>,
    basis: Vec<Fe>,
    coords: Vec<Vec<Fe>>,
    from_coords: Vec<Fe>,
}

impl fmt::Debug for AlgebraDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D(q={}, n={}, g=Frob^{})", self.base.order(), self.n, self.exponent)
    }
}

impl PartialEq for AlgebraDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.n == other.n && self.exponent == other.exponent
    }
}

impl Eq for AlgebraDescriptor {}

impl AlgebraDescriptor {
    pub fn new(q: u32, n: u32, exponent: u32) -> Result<Arc<Self>> {
        if !is_prime(n) {
            return Err(Error::Invalid(format!("degree {n} is not prime")));
        }
        if exponent % n == 0 {
            return Err(Error::Invalid(format!("generator exponent {exponent} is 0 mod {n}")));
        }
        let base = field_of_order(q)?;
        let ext = extension(&base, n)?;
        let top = ext.top().clone();
        let theta = top.primitive();
        let basis: Vec<Fe> = (0..n).map(|j| top.pow(theta, j as u64)).collect();
        let qn = top.order() as usize;
        let mut coords = vec![Vec::new(); qn];
        let mut from_coords = vec![Fe::ZERO; qn];
        let qb = base.order() as usize;
        for idx in 0..qn {
            let mut r = idx;
            let mut c = vec![Fe::ZERO; n as usize];
            for slot in c.iter_mut() {
                *slot = Fe((r % qb) as u32);
                r /= qb;
            }
            let x = c
                .iter()
                .zip(&basis)
                .fold(Fe::ZERO, |acc, (&cj, &dj)| top.add(acc, top.mul(ext.embed(cj), dj)));
            if !coords[x.0 as usize].is_empty() {
                return Err(Error::Invalid("powers of the primitive element are dependent".into()));
            }
            coords[x.0 as usize] = c;
            from_coords[idx] = x;
        }
        Ok(Arc::new(AlgebraDescriptor {
            base,
            n,
            exponent: exponent % n,
            ext,
            basis,
            coords,
            from_coords,
        }))
    }

    pub fn base(&self) -> &Arc<GaloisField> {
        &self.base
    }

    /// L = F_{qⁿ}.
    pub fn splitting_field(&self) -> &Arc<GaloisField> {
        self.ext.top()
    }

    pub fn extension(&self) -> &Arc<Extension> {
        &self.ext
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn basis(&self) -> &[Fe] {
        &self.basis
    }

    /// F_q-coordinates of an element of L in the basis d_j.
    pub fn coords_of(&self, c: Fe) -> &[Fe] {
        &self.coords[c.0 as usize]
    }

    pub fn from_coords(&self, c: &[Fe]) -> Fe {
        let q = self.base.order() as usize;
        let idx = c.iter().rev().fold(0usize, |acc, x| acc * q + x.0 as usize);
        self.from_coords[idx]
    }

    /// g^k on L, for any integer k.
    #[inline]
    pub fn g_pow(&self, c: Fe, k: i64) -> Fe {
        let n = self.n as i64;
        let r = (self.exponent as i64 * k).rem_euclid(n) as u32;
        if r == 0 {
            c
        } else {
            self.ext.frobenius(c, r)
        }
    }

    /// Trace from L to F_q.
    pub fn trace(&self, c: Fe) -> Fe {
        self.ext.trace(c)
    }

    pub fn norm(&self, c: Fe) -> Fe {
        self.ext.norm(c)
    }

    /// Both descriptors define algebras over the same L with the same basis.
    pub fn compatible(&self, other: &AlgebraDescriptor) -> bool {
        self.base == other.base && self.n == other.n
    }
}
