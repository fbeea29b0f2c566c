//! Dense univariate polynomials over a finite field.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::scalars::{Extension, Fe, GaloisField};

/// Polynomial with coefficients low degree first and no trailing zeros.
#[derive(Clone)]
pub struct Poly {
    field: Arc<GaloisField>,
    coeffs: Vec<Fe>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}
impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients from the top down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{i}"),
            };
            let cs = self.field.format(c);
            let cs = if cs.contains('+') { format!("({cs})") } else { cs };
            terms.push(match (c == Fe::ONE, i) {
                (_, 0) => cs,
                (true, _) => mono,
                (false, _) => format!("{cs}{mono}"),
            });
        }
        f.write_str(&terms.join(" + "))
    }
}

impl Poly {
    pub fn new(field: &Arc<GaloisField>, mut coeffs: Vec<Fe>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Arc<GaloisField>) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn one(field: &Arc<GaloisField>) -> Self {
        Self::constant(field, Fe::ONE)
    }

    pub fn constant(field: &Arc<GaloisField>, c: Fe) -> Self {
        Self::new(field, vec![c])
    }

    /// c·t^k.
    pub fn monomial(field: &Arc<GaloisField>, c: Fe, k: usize) -> Self {
        let mut v = vec![Fe::ZERO; k + 1];
        v[k] = c;
        Self::new(field, v)
    }

    /// The variable t.
    pub fn t(field: &Arc<GaloisField>) -> Self {
        Self::monomial(field, Fe::ONE, 1)
    }

    /// t − c.
    pub fn linear(field: &Arc<GaloisField>, c: Fe) -> Self {
        Self::new(field, vec![field.neg(c), Fe::ONE])
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [Fe::ONE]
    }

    /// Degree, with −1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Fe::ONE
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            f,
            (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            f,
            (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly::new(
            &self.field,
            self.coeffs.iter().map(|&c| self.field.neg(c)).collect(),
        )
    }

    pub fn scale(&self, c: Fe) -> Poly {
        Poly::new(
            &self.field,
            self.coeffs.iter().map(|&x| self.field.mul(x, c)).collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    /// Multiplication by t^k.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![Fe::ZERO; k];
        v.extend_from_slice(&self.coeffs);
        Poly::new(&self.field, v)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut r = Poly::one(&self.field);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Euclidean division; panics if `d` is zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let f = &self.field;
        let dd = d.coeffs.len() - 1;
        let inv = f.inv(d.leading());
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(f), self.clone());
        }
        let mut q = vec![Fe::ZERO; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = f.mul(r[k + dd], inv);
            q[k] = c;
            if c.is_zero() {
                continue;
            }
            for (i, &di) in d.coeffs.iter().enumerate() {
                r[k + i] = f.sub(r[k + i], f.mul(c, di));
            }
        }
        r.truncate(dd);
        (Poly::new(f, q), Poly::new(f, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.leading()))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// (g, u, v) with u·self + v·other = g monic.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = r1;
            r1 = r;
            let s = s0.sub(&q.mul(&s1));
            s0 = s1;
            s1 = s;
            let t = t0.sub(&q.mul(&t1));
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let c = f.inv(r0.leading());
        (r0.scale(c), s0.scale(c), t0.scale(c))
    }

    /// Inverse modulo `m` when coprime.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, u, _) = self.rem(m).ext_gcd(m);
        g.is_one().then(|| u.rem(m))
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Poly {
        self.mul(other).rem(m)
    }

    pub fn pow_mod(&self, mut k: u64, m: &Poly) -> Poly {
        let mut r = Poly::one(&self.field).rem(m);
        let mut b = self.rem(m);
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul_mod(&b, m);
            }
            b = b.mul_mod(&b, m);
            k >>= 1;
        }
        r
    }

    pub fn eval(&self, x: Fe) -> Fe {
        self.coeffs
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| self.field.add(self.field.mul(acc, x), c))
    }

    /// Evaluation at a point of an extension field.
    pub fn eval_in(&self, ext: &Extension, x: Fe) -> Fe {
        let top = ext.top();
        self.coeffs
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| top.add(top.mul(acc, x), ext.embed(c)))
    }

    /// Coefficients mapped into an extension field.
    pub fn embed(&self, ext: &Extension) -> Poly {
        Poly::new(
            ext.top(),
            self.coeffs.iter().map(|&c| ext.embed(c)).collect(),
        )
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        Poly::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
                .collect(),
        )
    }

    /// Reversal t^deg · self(1/t).
    pub fn reversed(&self) -> Poly {
        let mut v = self.coeffs.clone();
        v.reverse();
        Poly::new(&self.field, v)
    }

    /// Multiplicity of `p` as a factor; `self` must be nonzero.
    pub fn valuation(&self, p: &Poly) -> u32 {
        let mut k = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.div_exact(p) {
            if cur.is_zero() {
                break;
            }
            cur = q;
            k += 1;
        }
        k
    }

    /// Base-`p` digits, least significant first, each of degree < deg p.
    pub fn digits(&self, p: &Poly, count: usize) -> Vec<Poly> {
        let mut out = Vec::with_capacity(count);
        let mut cur = self.clone();
        for _ in 0..count {
            let (q, r) = cur.divrem(p);
            out.push(r);
            cur = q;
        }
        out
    }

    /// Irreducibility over the coefficient field.
    pub fn is_irreducible(&self) -> bool {
        let n = self.degree();
        if n < 1 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = &self.field;
        let q = f.order() as u64;
        let m = self.monic();
        let x = Poly::t(f);
        let frob = |k: i64| -> Poly {
            let mut cur = x.rem(&m);
            for _ in 0..k {
                cur = cur.pow_mod(q, &m);
            }
            cur
        };
        if !frob(n).sub(&x).rem(&m).is_zero() {
            return false;
        }
        crate::scalars::prime_divisors(n as u64)
            .into_iter()
            .all(|r| m.gcd(&frob(n / r as i64).sub(&x)).is_one())
    }

    /// All monic polynomials of the given degree, in increasing order.
    pub fn monic_of_degree(field: &Arc<GaloisField>, deg: usize) -> impl Iterator<Item = Poly> + '_ {
        let q = field.order() as u64;
        let count = q.pow(deg as u32);
        (0..count).map(move |mut enc| {
            let mut v = Vec::with_capacity(deg + 1);
            for _ in 0..deg {
                v.push(Fe((enc % q) as u32));
                enc /= q;
            }
            v.push(Fe::ONE);
            Poly::new(field, v)
        })
    }

    /// Roots in an extension field, ordered by element index.
    pub fn roots_in(&self, ext: &Extension) -> Vec<Fe> {
        ext.top()
            .elements()
            .filter(|&x| self.eval_in(ext, x).is_zero())
            .collect()
    }
}
