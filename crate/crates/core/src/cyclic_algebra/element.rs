use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::globalfield::{Place, RationalFn};
use crate::poly::Poly;
use crate::scalars::{Fe, GaloisField};

use super::descriptor::AlgebraDescriptor;
use super::ring::{berkowitz, RationalRing};

/// Σ x_{ij} d_j s^i with x_{ij} ∈ F_q(t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    desc: Arc<AlgebraDescriptor>,
    x: Vec<RationalFn>,
}

/// Monic polynomial in X over F_q(t), coefficients from X⁰ up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    pub coeffs: Vec<RationalFn>,
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "X".to_string(),
                _ => format!("X^{i}"),
            };
            let cs = c.to_string();
            parts.push(match (i, c == &RationalFn::one(c.field())) {
                (0, _) => format!("({cs})"),
                (_, true) => mono,
                _ => format!("({cs})*{mono}"),
            });
        }
        f.write_str(&parts.join(" + "))
    }
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Reduced norm (−1)ⁿ c₀.
    pub fn norm(&self) -> RationalFn {
        let c0 = &self.coeffs[0];
        if self.degree() % 2 == 0 {
            c0.clone()
        } else {
            c0.neg()
        }
    }

    /// Reduced trace −c_{n−1}.
    pub fn trace(&self) -> RationalFn {
        self.coeffs[self.degree() - 1].neg()
    }

    /// Squarefree over F_q(t), i.e. distinct roots in an algebraic closure.
    pub fn is_separable(&self) -> bool {
        let f = self.coeffs.clone();
        let df: Vec<RationalFn> = f
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(c.field().from_int(i as i64)))
            .collect();
        let g = upoly_gcd(f, df);
        g.len() == 1
    }
}

fn trim(mut a: Vec<RationalFn>) -> Vec<RationalFn> {
    while a.last().is_some_and(RationalFn::is_zero) {
        a.pop();
    }
    a
}

/// Monic gcd of polynomials over F_q(t); the zero polynomial is an empty vector.
fn upoly_gcd(a: Vec<RationalFn>, b: Vec<RationalFn>) -> Vec<RationalFn> {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let lead = b.last().unwrap().inv().expect("nonzero leading coefficient");
        while a.len() >= b.len() {
            let c = a.last().unwrap().mul(&lead);
            let shift = a.len() - b.len();
            for (i, bi) in b.iter().enumerate() {
                a[shift + i] = a[shift + i].sub(&c.mul(bi));
            }
            a = trim(a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(l) = a.last() {
        let inv = l.inv().unwrap();
        a = a.iter().map(|c| c.mul(&inv)).collect();
    }
    a
}

impl AlgebraElement {
    pub fn new(desc: &Arc<AlgebraDescriptor>, table: Vec<Vec<RationalFn>>) -> Result<Self> {
        let n = desc.n() as usize;
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                got: table.len(),
            });
        }
        if table.iter().flatten().any(|r| r.field() != desc.base()) {
            return Err(Error::FieldMismatch);
        }
        Ok(AlgebraElement {
            desc: desc.clone(),
            x: table.into_iter().flatten().collect(),
        })
    }

    pub fn zero(desc: &Arc<AlgebraDescriptor>) -> Self {
        let n = desc.n() as usize;
        AlgebraElement {
            desc: desc.clone(),
            x: vec![RationalFn::zero(desc.base()); n * n],
        }
    }

    /// A central element r ∈ F_q(t).
    pub fn scalar(desc: &Arc<AlgebraDescriptor>, r: &RationalFn) -> Self {
        let mut out = Self::zero(desc);
        let one = desc.coords_of(Fe::ONE).to_vec();
        for (j, c) in one.iter().enumerate() {
            out.x[j] = r.scale(*c);
        }
        out
    }

    pub fn one(desc: &Arc<AlgebraDescriptor>) -> Self {
        Self::scalar(desc, &RationalFn::one(desc.base()))
    }

    /// u·s^i with u = Σ_j u_j d_j ∈ L ⊗ F_q(t).
    pub fn monomial(desc: &Arc<AlgebraDescriptor>, u: &[RationalFn], i: usize) -> Result<Self> {
        let n = desc.n() as usize;
        if u.len() != n || i >= n {
            return Err(Error::LengthMismatch { expected: n, got: u.len() });
        }
        let mut out = Self::zero(desc);
        out.x[i * n..(i + 1) * n].clone_from_slice(u);
        Ok(out)
    }

    /// A constant c ∈ L times s^i.
    pub fn from_l(desc: &Arc<AlgebraDescriptor>, c: Fe, i: usize) -> Self {
        let u: Vec<RationalFn> = desc
            .coords_of(c)
            .iter()
            .map(|&cj| RationalFn::constant(desc.base(), cj))
            .collect();
        Self::monomial(desc, &u, i).expect("shape from descriptor")
    }

    pub fn s(desc: &Arc<AlgebraDescriptor>) -> Self {
        Self::from_l(desc, Fe::ONE, 1 % desc.n() as usize)
    }

    /// The basis element d_j.
    pub fn d(desc: &Arc<AlgebraDescriptor>, j: usize) -> Self {
        Self::from_l(desc, desc.basis()[j], 0)
    }

    pub fn descriptor(&self) -> &Arc<AlgebraDescriptor> {
        &self.desc
    }

    pub fn coeff(&self, i: usize, j: usize) -> &RationalFn {
        &self.x[i * self.desc.n() as usize + j]
    }

    /// The L-coefficient u_i in F_q(t)-coordinates.
    pub fn component(&self, i: usize) -> &[RationalFn] {
        let n = self.desc.n() as usize;
        &self.x[i * n..(i + 1) * n]
    }

    pub fn is_zero(&self) -> bool {
        self.x.iter().all(RationalFn::is_zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.desc != other.desc {
            return Err(Error::DescriptorMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(AlgebraElement {
            desc: self.desc.clone(),
            x: self.x.iter().zip(&other.x).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        AlgebraElement {
            desc: self.desc.clone(),
            x: self.x.iter().map(RationalFn::neg).collect(),
        }
    }

    /// Multiplication by a central r ∈ F_q(t).
    pub fn scale(&self, r: &RationalFn) -> Self {
        AlgebraElement {
            desc: self.desc.clone(),
            x: self.x.iter().map(|a| a.mul(r)).collect(),
        }
    }

    /// Product in L ⊗ F_q(t) on coordinates.
    fn l_mul(&self, u: &[RationalFn], v: &[RationalFn]) -> Vec<RationalFn> {
        let desc = &self.desc;
        let top = desc.splitting_field();
        let n = desc.n() as usize;
        let mut out = vec![RationalFn::zero(desc.base()); n];
        for (j, uj) in u.iter().enumerate() {
            if uj.is_zero() {
                continue;
            }
            for (l, vl) in v.iter().enumerate() {
                if vl.is_zero() {
                    continue;
                }
                let prod = uj.mul(vl);
                let c = desc.coords_of(top.mul(desc.basis()[j], desc.basis()[l]));
                for (m, cm) in c.iter().enumerate() {
                    if !cm.is_zero() {
                        out[m] = out[m].add(&prod.scale(*cm));
                    }
                }
            }
        }
        out
    }

    /// g^k on L ⊗ F_q(t).
    fn l_twist(&self, v: &[RationalFn], k: usize) -> Vec<RationalFn> {
        let desc = &self.desc;
        let n = desc.n() as usize;
        let mut out = vec![RationalFn::zero(desc.base()); n];
        for (l, vl) in v.iter().enumerate() {
            if vl.is_zero() {
                continue;
            }
            let c = desc.coords_of(desc.g_pow(desc.basis()[l], k as i64));
            for (m, cm) in c.iter().enumerate() {
                if !cm.is_zero() {
                    out[m] = out[m].add(&vl.scale(*cm));
                }
            }
        }
        out
    }

    /// Product expanded through s·a = g(a)·s and sⁿ = t.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.desc.n() as usize;
        let t = RationalFn::t(self.desc.base());
        let mut out = Self::zero(&self.desc);
        for i in 0..n {
            let u = self.component(i);
            if u.iter().all(RationalFn::is_zero) {
                continue;
            }
            for k in 0..n {
                let v = other.component(k);
                if v.iter().all(RationalFn::is_zero) {
                    continue;
                }
                let mut w = self.l_mul(u, &self.l_twist(v, i));
                if i + k >= n {
                    w = w.iter().map(|a| a.mul(&t)).collect();
                }
                let r = (i + k) % n;
                for (j, wj) in w.into_iter().enumerate() {
                    out.x[r * n + j] = out.x[r * n + j].add(&wj);
                }
            }
        }
        Ok(out)
    }

    /// Image in M_n(L(t)): a ↦ diag(a, g(a), …), s ↦ Σ E_{r,r+1} with t in the corner.
    pub fn splitting_matrix(&self) -> Vec<Vec<RationalFn>> {
        let desc = &self.desc;
        let ext = desc.extension();
        let top = desc.splitting_field();
        let n = desc.n() as usize;
        let mut m = vec![vec![RationalFn::zero(top); n]; n];
        for i in 0..n {
            for (j, x) in self.component(i).iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let lifted = RationalFn::new(x.num().embed(ext), x.den().embed(ext));
                for (r, row) in m.iter_mut().enumerate() {
                    let c = desc.g_pow(desc.basis()[j], r as i64);
                    let mut entry = lifted.scale(c);
                    if r + i >= n {
                        entry = entry.mul(&RationalFn::t(top));
                    }
                    let col = (r + i) % n;
                    row[col] = row[col].add(&entry);
                }
            }
        }
        m
    }

    /// Reduced characteristic polynomial, descended from L(t) to F_q(t).
    pub fn reduced_char_poly(&self) -> Result<CharPoly> {
        let m = self.splitting_matrix();
        let top = self.desc.splitting_field().clone();
        let coeffs = berkowitz(&RationalRing(top), &m);
        let coeffs = coeffs
            .iter()
            .map(|c| descend(&self.desc, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(CharPoly { coeffs })
    }

    /// All coordinates are integral at `place`.
    pub fn integral_at(&self, place: &Place) -> bool {
        self.x.iter().all(|a| a.is_zero() || a.valuation(place) >= 0)
    }

    /// Membership in S_0, the integral coordinates at the place t.
    pub fn s0_test(&self) -> bool {
        self.integral_at(&t_place(self.desc.base()))
    }

    /// w(Σ u_i s^i) = min_i (n·v_t(u_i) + i); None for zero.
    pub fn w_valuation(&self) -> Option<i64> {
        let n = self.desc.n() as usize;
        let place = t_place(self.desc.base());
        (0..n)
            .filter_map(|i| {
                self.component(i)
                    .iter()
                    .filter(|a| !a.is_zero())
                    .map(|a| a.valuation(&place))
                    .min()
                    .map(|v| n as i64 * v + i as i64)
            })
            .min()
    }

    pub fn to_json(&self) -> String {
        let rec = ElementRecord {
            q: self.desc.base().order(),
            n: self.desc.n(),
            exponent: self.desc.exponent(),
            table: self
                .x
                .chunks(self.desc.n() as usize)
                .map(|row| row.iter().map(|r| rational_record(self.desc.base(), r)).collect())
                .collect(),
        };
        serde_json::to_string(&rec).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let rec: ElementRecord = serde_json::from_str(s).map_err(|e| Error::Invalid(e.to_string()))?;
        let desc = AlgebraDescriptor::new(rec.q, rec.n, rec.exponent)?;
        let f = desc.base().clone();
        let table = rec
            .table
            .iter()
            .map(|row| row.iter().map(|r| rational_from_record(&f, r)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        AlgebraElement::new(&desc, table)
    }
}

pub(crate) fn t_place(field: &Arc<GaloisField>) -> Place {
    Place::rational(field, Fe::ZERO)
}

fn descend(desc: &AlgebraDescriptor, c: &RationalFn) -> Result<RationalFn> {
    let ext = desc.extension();
    let down = |p: &Poly| -> Result<Poly> {
        let cs = p
            .coeffs()
            .iter()
            .map(|&a| ext.restrict(a).ok_or_else(|| Error::DescentFailure(c.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(desc.base(), cs))
    };
    Ok(RationalFn::new(down(c.num())?, down(c.den())?))
}

#[derive(Serialize, Deserialize)]
struct RationalRecord {
    num: Vec<Vec<u32>>,
    den: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct ElementRecord {
    q: u32,
    n: u32,
    exponent: u32,
    table: Vec<Vec<RationalRecord>>,
}

fn rational_record(f: &GaloisField, r: &RationalFn) -> RationalRecord {
    let conv = |p: &Poly| p.coeffs().iter().map(|&c| f.coeffs(c)).collect();
    RationalRecord {
        num: conv(r.num()),
        den: conv(r.den()),
    }
}

fn rational_from_record(f: &Arc<GaloisField>, r: &RationalRecord) -> Result<RationalFn> {
    let conv = |v: &[Vec<u32>]| -> Result<Poly> {
        Ok(Poly::new(f, v.iter().map(|c| f.from_coeffs(c)).collect::<Result<Vec<_>>>()?))
    };
    let den = conv(&r.den)?;
    if den.is_zero() {
        return Err(Error::Invalid("zero denominator".into()));
    }
    Ok(RationalFn::new(conv(&r.num)?, den))
}

