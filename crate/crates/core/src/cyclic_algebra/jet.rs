use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::globalfield::laurent_digits;
use crate::scalars::Fe;

use super::descriptor::AlgebraDescriptor;
use super::element::{t_place, AlgebraElement};
use super::ring::{berkowitz, Truncated};

/// The quotient P^lo / P^hi of the completion at t, with P = s·S_0 and w(P) = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraWindow {
    pub lo: i64,
    pub hi: i64,
}

impl fmt::Display for AlgebraWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P^{}/P^{}", self.lo, self.hi)
    }
}

impl AlgebraWindow {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if hi < lo {
            return Err(Error::WindowShrink(format!("P^{lo}/P^{hi}")));
        }
        Ok(AlgebraWindow { lo, hi })
    }

    /// t^{−pole} S_0 / t^{depth} S_0.
    pub fn from_t_window(n: u32, pole: u32, depth: u32) -> Self {
        AlgebraWindow {
            lo: -(n as i64) * pole as i64,
            hi: n as i64 * depth as i64,
        }
    }

    pub fn levels(&self) -> usize {
        (self.hi - self.lo) as usize
    }

    /// Window of the transform when the dual of S_0 is P^{−ν}.
    pub fn dual(&self, nu: i64) -> Self {
        AlgebraWindow {
            lo: -self.hi - nu,
            hi: -self.lo - nu,
        }
    }
}

/// Σ_{lo ≤ k < hi} c_k s^k with c_k ∈ L, the expansion at t truncated to a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraJet {
    desc: Arc<AlgebraDescriptor>,
    window: AlgebraWindow,
    coeffs: Vec<Fe>,
}

impl AlgebraJet {
    pub fn zero(desc: &Arc<AlgebraDescriptor>, window: AlgebraWindow) -> Self {
        AlgebraJet {
            desc: desc.clone(),
            window,
            coeffs: vec![Fe::ZERO; window.levels()],
        }
    }

    pub fn new(desc: &Arc<AlgebraDescriptor>, window: AlgebraWindow, coeffs: Vec<Fe>) -> Result<Self> {
        if coeffs.len() != window.levels() {
            return Err(Error::LengthMismatch {
                expected: window.levels(),
                got: coeffs.len(),
            });
        }
        if coeffs.iter().any(|c| c.0 >= desc.splitting_field().order()) {
            return Err(Error::FieldMismatch);
        }
        Ok(AlgebraJet {
            desc: desc.clone(),
            window,
            coeffs,
        })
    }

    /// The jet with F_q-coordinates given by a big-endian table index over (level, j).
    pub fn from_index(desc: &Arc<AlgebraDescriptor>, window: AlgebraWindow, mut idx: usize) -> Self {
        let q = desc.base().order() as usize;
        let n = desc.n() as usize;
        let mut coeffs = vec![Fe::ZERO; window.levels()];
        let mut c = vec![Fe::ZERO; n];
        for slot in coeffs.iter_mut().rev() {
            for cj in c.iter_mut().rev() {
                *cj = Fe((idx % q) as u32);
                idx /= q;
            }
            *slot = desc.from_coords(&c);
        }
        AlgebraJet {
            desc: desc.clone(),
            window,
            coeffs,
        }
    }

    pub fn index(&self) -> usize {
        let q = self.desc.base().order() as usize;
        self.coeffs
            .iter()
            .flat_map(|&c| self.desc.coords_of(c).iter())
            .fold(0usize, |acc, c| acc * q + c.0 as usize)
    }

    /// F_q-coordinates ordered by level, then basis index.
    pub fn coords(&self) -> Vec<Fe> {
        self.coeffs
            .iter()
            .flat_map(|&c| self.desc.coords_of(c).iter().copied())
            .collect()
    }

    /// Expansion of a global element at t.
    pub fn from_element(x: &AlgebraElement, window: AlgebraWindow) -> Result<Self> {
        let desc = x.descriptor();
        let n = desc.n() as i64;
        let top = desc.splitting_field();
        let place = t_place(desc.base());
        let e_lo = window.lo.div_euclid(n);
        let e_hi = (window.hi + n - 1).div_euclid(n);
        let mut coeffs = vec![Fe::ZERO; window.levels()];
        for i in 0..n {
            for (j, a) in x.component(i as usize).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let w = n * a.valuation(&place) + i;
                if w < window.lo {
                    return Err(Error::PoleTooDeep {
                        order: -w,
                        allowed: -window.lo,
                    });
                }
                let digits = laurent_digits(a, &place, e_lo, e_hi)?;
                for (off, dg) in digits.iter().enumerate() {
                    let k = n * (e_lo + off as i64) + i;
                    if k >= window.lo && k < window.hi && !dg[0].is_zero() {
                        let slot = &mut coeffs[(k - window.lo) as usize];
                        *slot = top.add(*slot, top.mul(desc.extension().embed(dg[0]), desc.basis()[j]));
                    }
                }
            }
        }
        Ok(AlgebraJet {
            desc: desc.clone(),
            window,
            coeffs,
        })
    }

    pub fn descriptor(&self) -> &Arc<AlgebraDescriptor> {
        &self.desc
    }

    pub fn window(&self) -> AlgebraWindow {
        self.window
    }

    /// c_k for k in the window, zero outside.
    pub fn coeff(&self, k: i64) -> Fe {
        if k < self.window.lo || k >= self.window.hi {
            Fe::ZERO
        } else {
            self.coeffs[(k - self.window.lo) as usize]
        }
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Least level with a nonzero coefficient; None when the jet vanishes.
    pub fn w_valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|k| k as i64 + self.window.lo)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.desc != other.desc {
            return Err(Error::DescriptorMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.window != other.window {
            return Err(Error::Precondition(format!("windows {} and {}", self.window, other.window)));
        }
        let top = self.desc.splitting_field();
        Ok(AlgebraJet {
            desc: self.desc.clone(),
            window: self.window,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| top.add(a, b)).collect(),
        })
    }

    pub fn neg(&self) -> Self {
        let top = self.desc.splitting_field();
        AlgebraJet {
            desc: self.desc.clone(),
            window: self.window,
            coeffs: self.coeffs.iter().map(|&a| top.neg(a)).collect(),
        }
    }

    fn product_into(&self, other: &Self, window: AlgebraWindow) -> Self {
        let desc = &self.desc;
        let top = desc.splitting_field();
        let mut out = vec![Fe::ZERO; window.levels()];
        for (a, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = self.window.lo + a as i64;
            for (b, &d) in other.coeffs.iter().enumerate() {
                if d.is_zero() {
                    continue;
                }
                let level = k + other.window.lo + b as i64;
                if level >= window.hi {
                    break;
                }
                let slot = &mut out[(level - window.lo) as usize];
                *slot = top.add(*slot, top.mul(c, desc.g_pow(d, k)));
            }
        }
        AlgebraJet {
            desc: desc.clone(),
            window,
            coeffs: out,
        }
    }

    /// Product of jets, truncated to the levels it determines.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let (a, b) = (self.window, other.window);
        let window = AlgebraWindow {
            lo: a.lo + b.lo,
            hi: (a.lo + b.hi).min(a.hi + b.lo).max(a.lo + b.lo),
        };
        Ok(self.product_into(other, window))
    }

    /// Exact product of the finite series representing the two jets.
    pub fn mul_lifts(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let (a, b) = (self.window, other.window);
        let lo = a.lo + b.lo;
        let hi = (a.hi + b.hi - 1).max(lo);
        Ok(self.product_into(other, AlgebraWindow { lo, hi }))
    }

    /// Same element viewed in another window; fails if nonzero levels would be dropped below lo.
    pub fn to_window(&self, window: AlgebraWindow) -> Result<Self> {
        if (self.window.lo..window.lo.min(self.window.hi)).any(|k| !self.coeff(k).is_zero()) {
            return Err(Error::Precondition(format!("jet is not supported in {window}")));
        }
        let coeffs = (window.lo..window.hi).map(|k| self.coeff(k)).collect();
        Ok(AlgebraJet {
            desc: self.desc.clone(),
            window,
            coeffs,
        })
    }

    /// t^e·x: levels move by n·e.
    pub fn shift_t(&self, e: i64) -> Self {
        let d = self.desc.n() as i64 * e;
        AlgebraJet {
            desc: self.desc.clone(),
            window: AlgebraWindow {
                lo: self.window.lo + d,
                hi: self.window.hi + d,
            },
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.window.lo == 0 && self.window.hi > 0 && !self.coeffs[0].is_zero()
    }

    /// Two-sided inverse of a unit of S_0/P^hi.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::Precondition("inverse of a non-unit jet".into()));
        }
        let desc = &self.desc;
        let top = desc.splitting_field();
        let h = self.window.hi as usize;
        let c0_inv = top.inv(self.coeffs[0]);
        let mut v = vec![Fe::ZERO; h];
        v[0] = c0_inv;
        for r in 1..h {
            let mut acc = Fe::ZERO;
            for k in 1..=r {
                let c = self.coeffs[k];
                if !c.is_zero() {
                    acc = top.add(acc, top.mul(c, desc.g_pow(v[r - k], k as i64)));
                }
            }
            v[r] = top.neg(top.mul(c0_inv, acc));
        }
        Ok(AlgebraJet {
            desc: desc.clone(),
            window: self.window,
            coeffs: v,
        })
    }

    /// u·x·u⁻¹ for a unit jet u of length at least the window size.
    pub fn conjugate_by(&self, u: &AlgebraJet) -> Result<Self> {
        if !u.is_unit() || u.window.hi < self.window.levels() as i64 {
            return Err(Error::Precondition("conjugating jet too short or not a unit".into()));
        }
        let inv = u.inverse()?;
        let ux = u.mul(self)?.to_window(self.window)?;
        ux.mul(&inv)?.to_window(self.window)
    }

    /// Reduced characteristic polynomial mod t^e with e = ⌊hi/n⌋, for jets in S_0.
    pub fn char_poly_jet(&self) -> Result<CharPolyJet> {
        if self.window.lo < 0 {
            return Err(Error::Precondition("characteristic polynomial of a non-integral jet".into()));
        }
        let desc = &self.desc;
        let n = desc.n() as usize;
        let top = desc.splitting_field();
        let e = (self.window.hi / n as i64) as usize;
        let ring = Truncated { field: top, len: e };
        let mut m = vec![vec![vec![Fe::ZERO; e]; n]; n];
        for (a, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = self.window.lo as usize + a;
            let (te, i) = (k / n, k % n);
            for (r, row) in m.iter_mut().enumerate() {
                let exp = te + (r + i) / n;
                if exp < e {
                    let slot = &mut row[(r + i) % n][exp];
                    *slot = top.add(*slot, desc.g_pow(c, r as i64));
                }
            }
        }
        let cp = berkowitz(&ring, &m);
        let ext = desc.extension();
        let mut coeffs = Vec::with_capacity(n);
        for c in &cp[..n] {
            let down = c
                .iter()
                .map(|&a| ext.restrict(a).ok_or_else(|| Error::DescentFailure(format!("{a:?}"))))
                .collect::<Result<Vec<_>>>()?;
            coeffs.push(down);
        }
        Ok(CharPolyJet { depth: e, coeffs })
    }
}

/// Monic degree-n polynomial with coefficients in F_q[t]/t^depth, from X⁰ to X^{n−1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharPolyJet {
    pub depth: usize,
    pub coeffs: Vec<Vec<Fe>>,
}

impl CharPolyJet {
    /// Truncation to a smaller depth.
    pub fn truncate(&self, depth: usize) -> Result<CharPolyJet> {
        if depth > self.depth {
            return Err(Error::InsufficientDepth(format!("need t^{depth}, have t^{}", self.depth)));
        }
        Ok(CharPolyJet {
            depth,
            coeffs: self.coeffs.iter().map(|c| c[..depth].to_vec()).collect(),
        })
    }

    /// Reduced trace mod t^depth.
    pub fn trace(&self, field: &crate::scalars::GaloisField) -> Vec<Fe> {
        self.coeffs.last().map(|c| c.iter().map(|&a| field.neg(a)).collect()).unwrap_or_default()
    }

    /// Reduction of a global polynomial with t-integral coefficients.
    pub fn from_char_poly(cp: &super::element::CharPoly, depth: usize) -> Result<CharPolyJet> {
        let n = cp.degree();
        let field = cp.coeffs[0].field().clone();
        let place = t_place(&field);
        let coeffs = cp.coeffs[..n]
            .iter()
            .map(|c| Ok(laurent_digits(c, &place, 0, depth as i64)?.into_iter().map(|d| d[0]).collect()))
            .collect::<Result<Vec<_>>>()?;
        Ok(CharPolyJet { depth, coeffs })
    }
}
