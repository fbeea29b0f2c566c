use std::sync::Arc;

use crate::globalfield::RationalFn;
use crate::scalars::{Fe, GaloisField};

/// A commutative ring given by its operations.
pub(crate) trait RingOps {
    type E: Clone;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
}

/// Characteristic polynomial det(X − A), coefficients from X⁰ to Xⁿ, by Berkowitz.
pub(crate) fn berkowitz<R: RingOps>(ring: &R, a: &[Vec<R::E>]) -> Vec<R::E> {
    let n = a.len();
    // Coefficients from the leading one down.
    let mut c = vec![ring.one()];
    for r in 0..n {
        let mut col: Vec<R::E> = (0..r).map(|i| a[i][r].clone()).collect();
        let mut toeplitz = vec![ring.one(), ring.sub(&ring.zero(), &a[r][r])];
        for _ in 0..r {
            let mut dot = ring.zero();
            for (j, v) in col.iter().enumerate() {
                dot = ring.add(&dot, &ring.mul(&a[r][j], v));
            }
            toeplitz.push(ring.sub(&ring.zero(), &dot));
            col = (0..r)
                .map(|i| {
                    let mut acc = ring.zero();
                    for (j, v) in col.iter().enumerate() {
                        acc = ring.add(&acc, &ring.mul(&a[i][j], v));
                    }
                    acc
                })
                .collect();
        }
        let mut next = vec![ring.zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, cj) in c.iter().enumerate().take(i + 1) {
                *slot = ring.add(slot, &ring.mul(&toeplitz[i - j], cj));
            }
        }
        c = next;
    }
    c.reverse();
    c
}

/// F_{q}(t) or L(t).
pub(crate) struct RationalRing(pub Arc<GaloisField>);

impl RingOps for RationalRing {
    type E = RationalFn;
    fn zero(&self) -> RationalFn {
        RationalFn::zero(&self.0)
    }
    fn one(&self) -> RationalFn {
        RationalFn::one(&self.0)
    }
    fn add(&self, a: &RationalFn, b: &RationalFn) -> RationalFn {
        a.add(b)
    }
    fn sub(&self, a: &RationalFn, b: &RationalFn) -> RationalFn {
        a.sub(b)
    }
    fn mul(&self, a: &RationalFn, b: &RationalFn) -> RationalFn {
        a.mul(b)
    }
}

/// F[t]/t^len with dense coefficient vectors.
pub(crate) struct Truncated<'a> {
    pub field: &'a GaloisField,
    pub len: usize,
}

impl RingOps for Truncated<'_> {
    type E = Vec<Fe>;
    fn zero(&self) -> Vec<Fe> {
        vec![Fe::ZERO; self.len]
    }
    fn one(&self) -> Vec<Fe> {
        let mut v = self.zero();
        if self.len > 0 {
            v[0] = Fe::ONE;
        }
        v
    }
    fn add(&self, a: &Vec<Fe>, b: &Vec<Fe>) -> Vec<Fe> {
        a.iter().zip(b).map(|(&x, &y)| self.field.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<Fe>, b: &Vec<Fe>) -> Vec<Fe> {
        a.iter().zip(b).map(|(&x, &y)| self.field.sub(x, y)).collect()
    }
    fn mul(&self, a: &Vec<Fe>, b: &Vec<Fe>) -> Vec<Fe> {
        let mut out = self.zero();
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().take(self.len - i).enumerate() {
                out[i + j] = self.field.add(out[i + j], self.field.mul(x, y));
            }
        }
        out
    }
}
