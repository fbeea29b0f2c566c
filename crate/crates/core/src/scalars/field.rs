//! Table-driven arithmetic in F_{p^e}.
//!
//! An element is stored as the integer `Σ c_i p^i` of its coefficient
//! vector in the power basis of the modulus.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order with precomputed tables.
pub const MAX_ORDER: u64 = 1 << 22;

/// Index of a field element.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

pub struct GaloisField {
    p: u32,
    degree: u32,
    order: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    abs_trace: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.degree)
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.degree == other.degree
    }
}
impl Eq for GaloisField {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits a prime power into `(p, e)`.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut e = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

// Dense polynomials over F_p, low degree first, used only to find moduli.
mod fp {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let inv_lead = inv(m[dm], p);
        while r.len() > dm && !r.is_empty() {
            let shift = r.len() - 1 - dm;
            let c = r[r.len() - 1] * inv_lead % p;
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p * p - c * mi % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        rem(&prod, m, p)
    }

    pub fn inv(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut base = a as u64 % p as u64;
        let mut e = p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % p as u64;
            }
            base = base * base % p as u64;
            e >>= 1;
        }
        r as u32
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut out = vec![0u32; n];
        for (i, o) in out.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            *o = (x + p - y) % p;
        }
        trim(&mut out);
        out
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// x^(p^k) mod m by repeated p-th powering.
    pub fn frob_power(k: u32, m: &[u32], p: u32) -> Vec<u32> {
        let mut cur = rem(&[0, 1], m, p);
        for _ in 0..k {
            let mut acc = vec![1u32];
            for _ in 0..p {
                acc = mulmod(&acc, &cur, m, p);
            }
            cur = acc;
        }
        cur
    }

    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let e = (m.len() - 1) as u32;
        if e == 1 {
            return true;
        }
        let x = vec![0u32, 1];
        if sub(&frob_power(e, m, p), &x, p) != Vec::<u32>::new() {
            return false;
        }
        for r in super::prime_factors(e as u64) {
            let h = sub(&frob_power(e / r as u32, m, p), &x, p);
            if gcd(m, &h, p).len() != 1 {
                return false;
            }
        }
        true
    }
}

impl GaloisField {
    fn build(p: u32, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidDegree(e));
        }
        let order64 = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if order64 > MAX_ORDER {
            return Err(Error::FieldTooLarge(order64));
        }
        let order = order64 as u32;
        let modulus = Self::least_irreducible(p, e)?;
        let digits = |mut v: u32| -> Vec<u32> {
            let mut out = Vec::with_capacity(e as usize);
            for _ in 0..e {
                out.push(v % p);
                v /= p;
            }
            fp::trim(&mut out);
            out
        };
        let index = |c: &[u32]| -> u32 { c.iter().rev().fold(0, |acc, &d| acc * p + d) };
        let group = order64 - 1;
        let factors = prime_factors(group);
        let pow_poly = |base: &[u32], mut k: u64| -> Vec<u32> {
            let mut r = vec![1u32];
            let mut b = base.to_vec();
            while k > 0 {
                if k & 1 == 1 {
                    r = fp::mulmod(&r, &b, &modulus, p);
                }
                b = fp::mulmod(&b, &b, &modulus, p);
                k >>= 1;
            }
            r
        };
        let generator = (1..order)
            .map(digits)
            .find(|g| factors.iter().all(|&r| pow_poly(g, group / r) != vec![1u32]))
            .ok_or(Error::NoModulus { p, e })?;
        let mut exp = Vec::with_capacity(group as usize);
        let mut log = vec![0u32; order as usize];
        let mut cur = vec![1u32];
        for i in 0..group as u32 {
            let idx = index(&cur);
            exp.push(idx);
            log[idx as usize] = i;
            cur = fp::mulmod(&cur, &generator, &modulus, p);
        }
        let add_table = if order64 * order64 <= (1 << 20) && p != 2 {
            let mut t = vec![0u32; (order * order) as usize];
            for a in 0..order {
                for b in 0..order {
                    t[(a * order + b) as usize] = Self::digit_add(p, e, a, b);
                }
            }
            Some(t)
        } else {
            None
        };
        let mut field = GaloisField {
            p,
            degree: e,
            order,
            modulus,
            exp,
            log,
            abs_trace: Vec::new(),
            add_table,
        };
        let traces = (0..order)
            .map(|x| {
                let mut acc = Fe::ZERO;
                let mut y = Fe(x);
                for _ in 0..e {
                    acc = field.add(acc, y);
                    y = field.pow(y, p as u64);
                }
                acc.0
            })
            .collect();
        field.abs_trace = traces;
        Ok(field)
    }

    fn least_irreducible(p: u32, e: u32) -> Result<Vec<u32>> {
        let count = (p as u64).pow(e);
        for enc in 0..count {
            let mut m = Vec::with_capacity(e as usize + 1);
            let mut v = enc;
            for _ in 0..e {
                m.push((v % p as u64) as u32);
                v /= p as u64;
            }
            m.push(1);
            if fp::is_irreducible(&m, p) {
                return Ok(m);
            }
        }
        Err(Error::NoModulus { p, e })
    }

    fn digit_add(p: u32, e: u32, mut a: u32, mut b: u32) -> u32 {
        let mut out = 0;
        let mut place = 1;
        for _ in 0..e {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Modulus coefficients over F_p, low degree first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.order).map(Fe)
    }

    /// The class of the polynomial variable, a generator of the field over F_p.
    pub fn generator(&self) -> Fe {
        if self.degree == 1 {
            Fe(self.exp[1 % self.exp.len()])
        } else {
            Fe(self.p)
        }
    }

    /// The primitive element used for the log tables.
    pub fn primitive(&self) -> Fe {
        Fe(self.exp[1 % self.exp.len()])
    }

    pub fn from_int(&self, c: i64) -> Fe {
        Fe(c.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Fe> {
        if coeffs.len() > self.degree as usize {
            return Err(Error::LengthMismatch {
                expected: self.degree as usize,
                got: coeffs.len(),
            });
        }
        Ok(Fe(coeffs.iter().rev().fold(0, |acc, &d| acc * self.p + d % self.p)))
    }

    pub fn coeffs(&self, x: Fe) -> Vec<u32> {
        let mut v = x.0;
        (0..self.degree)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        if self.degree == 1 {
            return Fe((a.0 + b.0) % self.p);
        }
        match &self.add_table {
            Some(t) => Fe(t[(a.0 * self.order + b.0) as usize]),
            None => Fe(Self::digit_add(self.p, self.degree, a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 {
            return a;
        }
        let mut v = a.0;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.degree {
            out += ((self.p - v % self.p) % self.p) * place;
            v /= self.p;
            place *= self.p;
        }
        Fe(out)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let n = self.exp.len() as u64;
        let k = (self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64) % n;
        Fe(self.exp[k as usize])
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(!a.is_zero(), "inverse of zero");
        let n = self.exp.len() as u32;
        Fe(self.exp[((n - self.log[a.0 as usize]) % n) as usize])
    }

    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Fe, k: u64) -> Fe {
        if k == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        let n = self.exp.len() as u64;
        let idx = (self.log[a.0 as usize] as u64 % n) * (k % n) % n;
        Fe(self.exp[idx as usize])
    }

    /// x ↦ x^(p^k).
    pub fn frobenius(&self, a: Fe, k: u32) -> Fe {
        let n = self.exp.len() as u64;
        let e = (0..k).fold(1u64, |acc, _| acc * self.p as u64 % n);
        if a.is_zero() {
            a
        } else {
            self.pow(a, e + n)
        }
    }

    pub fn log(&self, a: Fe) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.0 as usize])
    }

    pub fn sum<I: IntoIterator<Item = Fe>>(&self, it: I) -> Fe {
        it.into_iter().fold(Fe::ZERO, |acc, x| self.add(acc, x))
    }

    /// Trace to the prime field, returned as an integer in `0..p`.
    #[inline]
    pub fn absolute_trace(&self, x: Fe) -> u32 {
        self.abs_trace[x.0 as usize]
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: Fe) -> u64 {
        let n = self.exp.len() as u64;
        let l = self.log[a.0 as usize] as u64;
        n / num_integer::gcd(n, l)
    }

    /// Trace from this field to its subfield of order p^d.
    pub fn trace(&self, x: Fe, d: u32) -> Result<Fe> {
        let sub = make_field(self.p, d)?;
        if d == 0 || self.degree % d != 0 {
            return Err(Error::NotDivisor { d, e: self.degree });
        }
        let ext = extension(&sub, self.degree / d)?;
        Ok(ext.trace(x))
    }

    pub fn format(&self, x: Fe) -> String {
        if self.degree == 1 {
            return x.0.to_string();
        }
        let c = self.coeffs(x);
        let mut terms = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            terms.push(match (ci, i) {
                (_, 0) => ci.to_string(),
                (1, _) => mono,
                _ => format!("{ci}{mono}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

/// Embedding of F_{p^d} into F_{p^{d·r}} with trace, norm and restriction.
pub struct Extension {
    base: Arc<GaloisField>,
    top: Arc<GaloisField>,
    rel_degree: u32,
    embed: Vec<Fe>,
    restrict: Vec<u32>,
}

impl fmt::Debug for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}/{:?}", self.top, self.base)
    }
}

impl Extension {
    fn build(base: Arc<GaloisField>, rel: u32) -> Result<Self> {
        if rel == 0 {
            return Err(Error::InvalidDegree(rel));
        }
        let top = make_field(base.p, base.degree * rel)?;
        // Least-index root of the base modulus in the top field.
        let root = top
            .elements()
            .find(|&r| {
                let mut acc = Fe::ZERO;
                for &c in base.modulus.iter().rev() {
                    acc = top.add(top.mul(acc, r), Fe(c));
                }
                acc.is_zero()
            })
            .ok_or(Error::NoModulus { p: base.p, e: base.degree })?;
        let mut embed = Vec::with_capacity(base.order as usize);
        for x in base.elements() {
            let mut acc = Fe::ZERO;
            for &c in base.coeffs(x).iter().rev() {
                acc = top.add(top.mul(acc, root), Fe(c));
            }
            embed.push(acc);
        }
        let mut restrict = vec![u32::MAX; top.order as usize];
        for (i, y) in embed.iter().enumerate() {
            restrict[y.0 as usize] = i as u32;
        }
        Ok(Extension {
            base,
            top,
            rel_degree: rel,
            embed,
            restrict,
        })
    }

    pub fn base(&self) -> &Arc<GaloisField> {
        &self.base
    }

    pub fn top(&self) -> &Arc<GaloisField> {
        &self.top
    }

    pub fn relative_degree(&self) -> u32 {
        self.rel_degree
    }

    #[inline]
    pub fn embed(&self, a: Fe) -> Fe {
        self.embed[a.0 as usize]
    }

    pub fn restrict(&self, x: Fe) -> Option<Fe> {
        let r = self.restrict[x.0 as usize];
        (r != u32::MAX).then_some(Fe(r))
    }

    /// x ↦ x^(|base|^k), the relative Frobenius.
    pub fn frobenius(&self, x: Fe, k: u32) -> Fe {
        self.top.frobenius(x, self.base.degree * k)
    }

    pub fn trace(&self, x: Fe) -> Fe {
        let mut acc = Fe::ZERO;
        let mut y = x;
        for _ in 0..self.rel_degree {
            acc = self.top.add(acc, y);
            y = self.frobenius(y, 1);
        }
        self.restrict(acc).expect("trace lies in the base field")
    }

    pub fn norm(&self, x: Fe) -> Fe {
        let mut acc = Fe::ONE;
        let mut y = x;
        for _ in 0..self.rel_degree {
            acc = self.top.mul(acc, y);
            y = self.frobenius(y, 1);
        }
        self.restrict(acc).expect("norm lies in the base field")
    }
}

type FieldCache = Mutex<HashMap<(u32, u32), Arc<GaloisField>>>;
type ExtCache = Mutex<HashMap<(u32, u32, u32), Arc<Extension>>>;

fn field_cache() -> &'static FieldCache {
    static CACHE: OnceLock<FieldCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn ext_cache() -> &'static ExtCache {
    static CACHE: OnceLock<ExtCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The field F_{p^e}. Fields are built once and shared.
pub fn make_field(p: u32, e: u32) -> Result<Arc<GaloisField>> {
    if let Some(f) = field_cache().lock().unwrap().get(&(p, e)) {
        return Ok(f.clone());
    }
    let f = Arc::new(GaloisField::build(p, e)?);
    Ok(field_cache()
        .lock()
        .unwrap()
        .entry((p, e))
        .or_insert(f)
        .clone())
}

/// The field with q elements.
pub fn field_of_order(q: u32) -> Result<Arc<GaloisField>> {
    let (p, e) = prime_power(q).ok_or(Error::NotPrime(q))?;
    make_field(p, e)
}

/// The degree-`rel` extension of `base`, fixed once per pair.
pub fn extension(base: &Arc<GaloisField>, rel: u32) -> Result<Arc<Extension>> {
    let key = (base.p, base.degree, rel);
    if let Some(x) = ext_cache().lock().unwrap().get(&key) {
        return Ok(x.clone());
    }
    let x = Arc::new(Extension::build(base.clone(), rel)?);
    Ok(ext_cache().lock().unwrap().entry(key).or_insert(x).clone())
}
