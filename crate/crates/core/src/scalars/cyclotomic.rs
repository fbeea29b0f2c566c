//! Exact arithmetic in Q(ζ_p).

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Element of Q(ζ_p) in the basis 1, ζ, …, ζ^{p−2}.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycScalar {
    p: u32,
    coeffs: Vec<BigRational>,
}

fn width(p: u32) -> usize {
    (p as usize - 1).max(1)
}

/// Reduces a sequence of at most p rational coefficients of 1, ζ, …, ζ^{p−1}.
pub fn cyc_normalize(p: u32, raw: &[BigRational]) -> CycScalar {
    assert!(raw.len() <= p as usize, "more than p coefficients");
    let top = if raw.len() == p as usize {
        raw[p as usize - 1].clone()
    } else {
        BigRational::zero()
    };
    let coeffs = (0..width(p))
        .map(|i| raw.get(i).cloned().unwrap_or_else(BigRational::zero) - &top)
        .collect();
    CycScalar { p, coeffs }
}

impl CycScalar {
    pub fn zero(p: u32) -> Self {
        CycScalar {
            p,
            coeffs: vec![BigRational::zero(); width(p)],
        }
    }

    /// Coefficients already in the canonical basis.
    pub(crate) fn from_canonical(p: u32, coeffs: Vec<BigRational>) -> Self {
        debug_assert_eq!(coeffs.len(), width(p));
        CycScalar { p, coeffs }
    }

    pub fn one(p: u32) -> Self {
        Self::from_integer(p, 1)
    }

    pub fn from_integer(p: u32, n: i64) -> Self {
        Self::from_rational(p, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(p: u32, r: BigRational) -> Self {
        let mut s = Self::zero(p);
        s.coeffs[0] = r;
        s
    }

    /// ζ_p^k.
    pub fn zeta_pow(p: u32, k: u32) -> Self {
        let k = (k % p) as usize;
        let mut raw = vec![BigRational::zero(); p as usize];
        raw[k] = BigRational::one();
        cyc_normalize(p, &raw)
    }

    /// q^k for an integer k of either sign.
    pub fn power_of(p: u32, q: u64, k: i64) -> Self {
        Self::from_rational(p, rational_power(q, k))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value as a rational number when it lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycScalar {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplication by ζ^k.
    pub fn mul_zeta(&self, k: u32) -> Self {
        let p = self.p as usize;
        let k = k as usize % p;
        if k == 0 {
            return self.clone();
        }
        let mut raw = vec![BigRational::zero(); p];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[(i + k) % p] += c;
        }
        cyc_normalize(self.p, &raw)
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.p, other.p, "cyclotomic fields differ");
    }
}

/// q^k as an exact rational.
pub fn rational_power(q: u64, k: i64) -> BigRational {
    let base = BigInt::from(q).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        BigRational::from_integer(base)
    } else {
        BigRational::new(BigInt::one(), base)
    }
}

impl Add<&CycScalar> for &CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: &CycScalar) -> CycScalar {
        self.check(rhs);
        CycScalar {
            p: self.p,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&CycScalar> for &CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: &CycScalar) -> CycScalar {
        self.check(rhs);
        CycScalar {
            p: self.p,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<&CycScalar> for &CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: &CycScalar) -> CycScalar {
        self.check(rhs);
        let p = self.p as usize;
        if p == 2 {
            return CycScalar::from_rational(2, &self.coeffs[0] * &rhs.coeffs[0]);
        }
        let mut raw = vec![BigRational::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[(i + j) % p] += a * b;
                }
            }
        }
        cyc_normalize(self.p, &raw)
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: CycScalar) -> CycScalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: &CycScalar) -> CycScalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

impl AddAssign<&CycScalar> for CycScalar {
    fn add_assign(&mut self, rhs: &CycScalar) {
        self.check(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&CycScalar> for CycScalar {
    fn sub_assign(&mut self, rhs: &CycScalar) {
        self.check(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "ζ".to_string(),
                _ => format!("ζ^{i}"),
            };
            let mag = c.abs();
            let body = if i > 0 && mag.is_one() {
                mono
            } else {
                format!("{}{}", fmt_rational(&mag), mono)
            };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

#[derive(Serialize, Deserialize)]
struct CycRecord {
    p: u32,
    coeffs: Vec<[String; 2]>,
}

impl Serialize for CycScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycRecord {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| [c.numer().to_string(), c.denom().to_string()])
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rec = CycRecord::deserialize(d)?;
        if rec.p < 2 || rec.coeffs.len() != width(rec.p) {
            return Err(D::Error::custom("coefficient count must be p-1"));
        }
        let mut coeffs = Vec::with_capacity(rec.coeffs.len());
        for [n, den] in rec.coeffs {
            let n: BigInt = n.parse().map_err(D::Error::custom)?;
            let den: BigInt = den.parse().map_err(D::Error::custom)?;
            if den.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            coeffs.push(BigRational::new(n, den));
        }
        Ok(CycScalar { p: rec.p, coeffs })
    }
}
