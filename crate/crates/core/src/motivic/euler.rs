use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalars::{extension, psi, CycScalar, Fe};

use super::class::{ConstructibleSet, MotivicClass};
use super::closed::{closed_points, orbit_norm_value, ClosedPoint};
use super::mpoly::MPoly;

/// Coefficient family a(v) on closed points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recipe {
    Zero,
    /// a(v) = ψ(Tr h(x₀))·q^{lshift·deg v}.
    Character { h: MPoly, lshift: i64 },
}

impl Recipe {
    /// a ≡ 1.
    pub fn one(set: &ConstructibleSet) -> Self {
        Recipe::Character {
            h: MPoly::zero(set.field(), set.nvars()),
            lshift: 0,
        }
    }

    pub fn value(&self, v: &ClosedPoint) -> Result<CycScalar> {
        let p = v.set().field().characteristic();
        match self {
            Recipe::Zero => Ok(CycScalar::zero(p)),
            Recipe::Character { h, lshift } => {
                let q = v.set().field().order() as u64;
                Ok(&orbit_norm_value(v, h)? * &CycScalar::power_of(p, q, lshift * v.degree() as i64))
            }
        }
    }

    /// The class [X,h]·L^lshift whose degree-m specializations sum a over X(F_{q^m}).
    fn class(&self, set: &ConstructibleSet, double: bool) -> Result<MotivicClass> {
        match self {
            Recipe::Zero => Ok(MotivicClass::zero(set.field())),
            Recipe::Character { h, lshift } => {
                let (h, k) = if double {
                    (h.scale(set.field().from_int(2)), 2 * lshift)
                } else {
                    (h.clone(), *lshift)
                };
                Ok(MotivicClass::generator(set.clone(), h)?.shift_l(k))
            }
        }
    }
}

/// Coefficients of t⁰..t^B for the two sides of the Euler-product comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerSeries {
    /// Π over closed points of (1 + a(v) t^{deg v}).
    pub lhs: Vec<CycScalar>,
    /// Σ over Frobenius-stable subsets; from point counts when X is not a curve in A¹.
    pub rhs: Vec<CycScalar>,
    /// exp(Σ S_m t^m/m − Σ S'_m t^{2m}/m) from the specialized classes.
    pub point_counts: Vec<CycScalar>,
}

impl EulerSeries {
    pub fn agree(&self) -> bool {
        self.lhs == self.rhs && self.lhs == self.point_counts
    }
}

pub fn euler_product(set: &ConstructibleSet, recipe: &Recipe, precision: u32) -> Result<EulerSeries> {
    if precision == 0 {
        return Err(Error::InvalidDegree(0));
    }
    if let Recipe::Character { h, .. } = recipe {
        if h.field() != set.field() || h.nvars() != set.nvars() {
            return Err(Error::FieldMismatch);
        }
    }
    let b = precision as usize;
    let p = set.field().characteristic();
    let mut lhs = unit_series(p, b);
    for v in closed_points(set, precision)? {
        let a = recipe.value(&v)?;
        let d = v.degree() as usize;
        for n in (d..=b).rev() {
            let term = &a * &lhs[n - d];
            lhs[n] += &term;
        }
    }
    let point_counts = exp_route(set, recipe, b)?;
    let rhs = if set.nvars() == 1 {
        subset_route(set, recipe, b)?
    } else {
        point_counts.clone()
    };
    Ok(EulerSeries { lhs, rhs, point_counts })
}

fn unit_series(p: u32, b: usize) -> Vec<CycScalar> {
    let mut s = vec![CycScalar::zero(p); b + 1];
    s[0] = CycScalar::one(p);
    s
}

fn exp_route(set: &ConstructibleSet, recipe: &Recipe, b: usize) -> Result<Vec<CycScalar>> {
    let p = set.field().characteristic();
    let single = recipe.class(set, false)?;
    let double = recipe.class(set, true)?;
    // c_k = k·(coefficient of t^k in the logarithm).
    let mut c = vec![CycScalar::zero(p); b + 1];
    for (k, ck) in c.iter_mut().enumerate().skip(1) {
        *ck = single.specialize(k as u32)?;
        if k % 2 == 0 {
            let two = CycScalar::from_integer(p, 2);
            *ck -= &(&two * &double.specialize(k as u32 / 2)?);
        }
    }
    let mut e = unit_series(p, b);
    for n in 1..=b {
        let mut acc = CycScalar::zero(p);
        for k in 1..=n {
            acc += &(&c[k] * &e[n - k]);
        }
        e[n] = acc.scale(&BigRational::new(BigInt::from(1), BigInt::from(n)));
    }
    Ok(e)
}

/// Stable n-subsets of X(F̄_q) ⊂ A¹ are root sets of squarefree monic polynomials.
fn subset_route(set: &ConstructibleSet, recipe: &Recipe, b: usize) -> Result<Vec<CycScalar>> {
    let field = set.field();
    let p = field.characteristic();
    let q = field.order() as u64;
    let mut out = unit_series(p, b);
    let (h, lshift) = match recipe {
        Recipe::Zero => return Ok(out),
        Recipe::Character { h, lshift } => (h, *lshift),
    };
    let irreducibles: Vec<Poly> = (1..=b)
        .flat_map(|d| Poly::monic_of_degree(field, d).filter(Poly::is_irreducible).collect::<Vec<_>>())
        .collect();
    // a(g) for each irreducible g, or None when its roots are off X.
    let mut weight = Vec::with_capacity(irreducibles.len());
    for g in &irreducibles {
        let d = g.degree() as u32;
        let ext = extension(field, d)?;
        let x0: Fe = g.roots_in(&ext)[0];
        weight.push(if set.contains(d, &[x0])? {
            Some(&psi(ext.top(), h.eval_in(&ext, &[x0])) * &CycScalar::power_of(p, q, lshift * d as i64))
        } else {
            None
        });
    }
    for (n, slot) in out.iter_mut().enumerate().skip(1) {
        let mut acc = CycScalar::zero(p);
        for f in Poly::monic_of_degree(field, n) {
            if !f.gcd(&f.derivative()).is_one() {
                continue;
            }
            let mut rest = f;
            let mut value = Some(CycScalar::one(p));
            for (g, w) in irreducibles.iter().zip(&weight) {
                if rest.degree() < g.degree() {
                    break;
                }
                if let Some(quot) = rest.div_exact(g) {
                    rest = quot;
                    value = match (value, w) {
                        (Some(v), Some(w)) => Some(&v * w),
                        _ => None,
                    };
                }
            }
            debug_assert!(rest.is_one());
            if let Some(v) = value {
                acc += &v;
            }
        }
        *slot = acc;
    }
    Ok(out)
}
