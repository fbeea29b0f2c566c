use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::localfield::TableValue;
use crate::scalars::{extension, make_field, psi, rational_power, CycScalar, Fe, GaloisField};

use super::mpoly::{MPoly, PolyRecord};

/// Largest number of candidate points scanned by one enumeration.
pub const MAX_POINTS: u64 = 1 << 24;

/// The locus {f_i = 0 for all i, g_j ≠ 0 for all j} in affine m-space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructibleSet {
    field: Arc<GaloisField>,
    nvars: usize,
    equations: Vec<MPoly>,
    inequations: Vec<MPoly>,
}

impl ConstructibleSet {
    pub fn new(
        field: &Arc<GaloisField>,
        nvars: usize,
        equations: Vec<MPoly>,
        inequations: Vec<MPoly>,
    ) -> Result<Self> {
        for f in equations.iter().chain(&inequations) {
            if f.field() != field || f.nvars() != nvars {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(ConstructibleSet {
            field: field.clone(),
            nvars,
            equations,
            inequations,
        })
    }

    pub fn affine(field: &Arc<GaloisField>, nvars: usize) -> Self {
        ConstructibleSet::new(field, nvars, vec![], vec![]).expect("no conditions")
    }

    /// Parses condition strings in the named variables.
    pub fn parse(field: &Arc<GaloisField>, vars: &[&str], equations: &[&str], inequations: &[&str]) -> Result<Self> {
        let eqs = equations.iter().map(|s| MPoly::parse(field, s, vars)).collect::<Result<_>>()?;
        let neqs = inequations.iter().map(|s| MPoly::parse(field, s, vars)).collect::<Result<_>>()?;
        ConstructibleSet::new(field, vars.len(), eqs, neqs)
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn equations(&self) -> &[MPoly] {
        &self.equations
    }

    pub fn inequations(&self) -> &[MPoly] {
        &self.inequations
    }

    pub fn contains(&self, d: u32, x: &[Fe]) -> Result<bool> {
        let ext = extension(&self.field, d)?;
        Ok(x.len() == self.nvars
            && self.equations.iter().all(|f| f.eval_in(&ext, x).is_zero())
            && self.inequations.iter().all(|g| !g.eval_in(&ext, x).is_zero()))
    }

    /// X × Y on concatenated coordinates.
    pub fn product(&self, other: &ConstructibleSet) -> Result<ConstructibleSet> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let n = self.nvars + other.nvars;
        let lift = |fs: &[MPoly], off: usize| fs.iter().map(|f| f.embed_vars(off, n)).collect::<Vec<_>>();
        let mut eqs = lift(&self.equations, 0);
        eqs.extend(lift(&other.equations, self.nvars));
        let mut neqs = lift(&self.inequations, 0);
        neqs.extend(lift(&other.inequations, self.nvars));
        ConstructibleSet::new(&self.field, n, eqs, neqs)
    }

    fn to_record(&self) -> SetRecord {
        SetRecord {
            nvars: self.nvars,
            equations: self.equations.iter().map(MPoly::to_record).collect(),
            inequations: self.inequations.iter().map(MPoly::to_record).collect(),
        }
    }

    fn from_record(field: &Arc<GaloisField>, r: &SetRecord) -> Result<Self> {
        let conv = |v: &[PolyRecord]| v.iter().map(|p| MPoly::from_record(field, p)).collect::<Result<Vec<_>>>();
        ConstructibleSet::new(field, r.nvars, conv(&r.equations)?, conv(&r.inequations)?)
    }

    pub fn to_json(&self) -> String {
        let rec = FieldTagged {
            p: self.field.characteristic(),
            e: self.field.degree(),
            body: self.to_record(),
        };
        serde_json::to_string(&rec).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let rec: FieldTagged<SetRecord> = serde_json::from_str(s).map_err(|e| Error::Invalid(e.to_string()))?;
        ConstructibleSet::from_record(&make_field(rec.p, rec.e)?, &rec.body)
    }
}

/// All points of X over F_{q^d}, in lexicographic order of coordinate indices.
pub fn enumerate_points(x: &ConstructibleSet, d: u32) -> Result<Vec<Vec<Fe>>> {
    let ext = extension(&x.field, d)?;
    let top = ext.top();
    let qd = top.order() as u64;
    let total = qd.checked_pow(x.nvars as u32).filter(|&n| n <= MAX_POINTS).ok_or(Error::BudgetExceeded {
        needed: (qd as u128).saturating_pow(x.nvars as u32),
        cap: MAX_POINTS as u128,
    })?;
    let m = x.nvars;
    Ok((0..total)
        .into_par_iter()
        .filter_map(|i| {
            let mut pt = vec![Fe::ZERO; m];
            let mut r = i;
            for c in pt.iter_mut().rev() {
                *c = Fe((r % qd) as u32);
                r /= qd;
            }
            let ok = x.equations.iter().all(|f| f.eval_in(&ext, &pt).is_zero())
                && x.inequations.iter().all(|g| !g.eval_in(&ext, &pt).is_zero());
            ok.then_some(pt)
        })
        .collect())
}

/// One generator c·[X, h].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassTerm {
    pub coeff: i64,
    pub set: ConstructibleSet,
    pub h: MPoly,
}

/// A formal combination Σ c_i [X_i, h_i] times L^lshift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotivicClass {
    field: Arc<GaloisField>,
    terms: Vec<ClassTerm>,
    lshift: i64,
}

/// Result of comparing two classes through their specializations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Comparison {
    /// The specializations over F_{q^degree} differ.
    Distinct { degree: u32 },
    /// Equal specializations over F_{q^d} for all d ≤ up_to.
    Indistinguishable { up_to: u32 },
}

impl MotivicClass {
    pub fn zero(field: &Arc<GaloisField>) -> Self {
        MotivicClass {
            field: field.clone(),
            terms: Vec::new(),
            lshift: 0,
        }
    }

    /// [X, h].
    pub fn generator(set: ConstructibleSet, h: MPoly) -> Result<Self> {
        if h.field() != set.field() || h.nvars() != set.nvars() {
            return Err(Error::FieldMismatch);
        }
        Ok(MotivicClass {
            field: set.field().clone(),
            terms: vec![ClassTerm { coeff: 1, set, h }],
            lshift: 0,
        })
    }

    /// [point, 0].
    pub fn one(field: &Arc<GaloisField>) -> Self {
        Self::generator(ConstructibleSet::affine(field, 0), MPoly::zero(field, 0)).expect("consistent")
    }

    /// L = [A¹, 0].
    pub fn lefschetz(field: &Arc<GaloisField>) -> Self {
        Self::generator(ConstructibleSet::affine(field, 1), MPoly::zero(field, 1)).expect("consistent")
    }

    /// [{c}, Id], whose specialization is ψ(c).
    pub fn character_point(field: &Arc<GaloisField>, c: Fe) -> Self {
        let x = MPoly::var(field, 1, 0);
        let eq = x.add(&MPoly::constant(field, 1, field.neg(c))).expect("same ring");
        let set = ConstructibleSet::new(field, 1, vec![eq], vec![]).expect("consistent");
        Self::generator(set, x).expect("consistent")
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn terms(&self) -> &[ClassTerm] {
        &self.terms
    }

    pub fn lshift(&self) -> i64 {
        self.lshift
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let mut out = self.clone();
        if k == 0 {
            out.terms.clear();
            out.lshift = 0;
        }
        for t in &mut out.terms {
            t.coeff *= k;
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale_int(-1)
    }

    /// Multiplies every term by L^k = [A^k, 0], lowering the shift by k.
    fn absorb_shift(&self, k: i64) -> Self {
        let line = ConstructibleSet::affine(&self.field, k as usize);
        let terms = self
            .terms
            .iter()
            .map(|t| ClassTerm {
                coeff: t.coeff,
                set: t.set.product(&line).expect("same field"),
                h: t.h.embed_vars(0, t.h.nvars() + k as usize),
            })
            .collect();
        MotivicClass {
            field: self.field.clone(),
            terms,
            lshift: self.lshift - k,
        }
    }

    pub fn shift_l(&self, k: i64) -> Self {
        let mut out = self.clone();
        if !out.terms.is_empty() {
            out.lshift += k;
        }
        out
    }

    /// Specialization over F_{q^d}: Σ c_i Σ_{x ∈ X_i(F_{q^d})} ψ(h_i(x)), times q^{d·lshift}.
    pub fn specialize(&self, d: u32) -> Result<CycScalar> {
        let ext = extension(&self.field, d)?;
        let top = ext.top();
        let p = self.field.characteristic();
        let mut acc = CycScalar::zero(p);
        for t in &self.terms {
            let pts = enumerate_points(&t.set, d)?;
            let mut counts = vec![0i64; p as usize];
            for x in &pts {
                counts[top.absolute_trace(t.h.eval_in(&ext, x)) as usize] += 1;
            }
            for (k, &c) in counts.iter().enumerate() {
                if c != 0 {
                    acc += &(&CycScalar::zeta_pow(p, k as u32) * &CycScalar::from_integer(p, c * t.coeff));
                }
            }
        }
        let q = self.field.order() as u64;
        Ok(acc.scale(&rational_power(q, d as i64 * self.lshift)))
    }

    /// Semi-decides equality by comparing specializations for d = 1..=max_degree.
    pub fn compare(&self, other: &MotivicClass, max_degree: u32) -> Result<Comparison> {
        for d in 1..=max_degree {
            if self.specialize(d)? != other.specialize(d)? {
                return Ok(Comparison::Distinct { degree: d });
            }
        }
        Ok(Comparison::Indistinguishable { up_to: max_degree })
    }

    fn to_record(&self) -> ClassRecord {
        ClassRecord {
            lshift: self.lshift,
            terms: self
                .terms
                .iter()
                .map(|t| TermRecordClass {
                    coeff: t.coeff,
                    set: t.set.to_record(),
                    h: t.h.to_record(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let rec = FieldTagged {
            p: self.field.characteristic(),
            e: self.field.degree(),
            body: self.to_record(),
        };
        serde_json::to_string(&rec).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let rec: FieldTagged<ClassRecord> = serde_json::from_str(s).map_err(|e| Error::Invalid(e.to_string()))?;
        let field = make_field(rec.p, rec.e)?;
        let mut terms = Vec::new();
        for t in &rec.body.terms {
            let set = ConstructibleSet::from_record(&field, &t.set)?;
            let h = MPoly::from_record(&field, &t.h)?;
            if h.nvars() != set.nvars() {
                return Err(Error::Invalid("h and X have different arity".into()));
            }
            terms.push(ClassTerm { coeff: t.coeff, set, h });
        }
        Ok(MotivicClass {
            field,
            terms,
            lshift: rec.body.lshift,
        })
    }
}

/// Sum of classes; the one with the larger L-shift is rewritten with
/// powers of the affine line first.
pub fn class_add(a: &MotivicClass, b: &MotivicClass) -> Result<MotivicClass> {
    if a.field != b.field {
        return Err(Error::FieldMismatch);
    }
    if a.is_empty() {
        return Ok(b.clone());
    }
    if b.is_empty() {
        return Ok(a.clone());
    }
    let (a, b) = match a.lshift.cmp(&b.lshift) {
        std::cmp::Ordering::Less => (a.clone(), b.absorb_shift(b.lshift - a.lshift)),
        std::cmp::Ordering::Greater => (a.absorb_shift(a.lshift - b.lshift), b.clone()),
        std::cmp::Ordering::Equal => (a.clone(), b.clone()),
    };
    let mut terms = a.terms;
    terms.extend(b.terms);
    Ok(MotivicClass {
        field: a.field,
        terms,
        lshift: a.lshift,
    })
}

/// [X, h]·[Y, g] = [X × Y, h(x) + g(y)].
pub fn class_mul(a: &MotivicClass, b: &MotivicClass) -> Result<MotivicClass> {
    if a.field != b.field {
        return Err(Error::FieldMismatch);
    }
    let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
    for s in &a.terms {
        for t in &b.terms {
            let n = s.set.nvars() + t.set.nvars();
            let h = s.h.embed_vars(0, n).add(&t.h.embed_vars(s.set.nvars(), n))?;
            terms.push(ClassTerm {
                coeff: s.coeff * t.coeff,
                set: s.set.product(&t.set)?,
                h,
            });
        }
    }
    let lshift = if terms.is_empty() { 0 } else { a.lshift + b.lshift };
    Ok(MotivicClass {
        field: a.field.clone(),
        terms,
        lshift,
    })
}

/// Motivic values as table entries; powers of q act as powers of L.
impl TableValue for MotivicClass {
    fn zero_like(&self) -> Self {
        MotivicClass::zero(&self.field)
    }

    fn add_value(&self, other: &Self) -> Self {
        class_add(self, other).expect("table entries share a field")
    }

    fn scale_power(&self, q: u64, k: i64) -> Self {
        debug_assert_eq!(q, self.field.order() as u64);
        self.shift_l(k)
    }
}

/// ψ summed over F_q: a check value for relation [A¹, x] = 0.
pub fn additive_character_sum(field: &GaloisField) -> CycScalar {
    field
        .elements()
        .fold(CycScalar::zero(field.characteristic()), |acc, x| &acc + &psi(field, x))
}

#[derive(Serialize, Deserialize)]
struct FieldTagged<T> {
    p: u32,
    e: u32,
    #[serde(flatten)]
    body: T,
}

#[derive(Serialize, Deserialize)]
struct SetRecord {
    nvars: usize,
    equations: Vec<PolyRecord>,
    inequations: Vec<PolyRecord>,
}

#[derive(Serialize, Deserialize)]
struct TermRecordClass {
    coeff: i64,
    set: SetRecord,
    h: PolyRecord,
}

#[derive(Serialize, Deserialize)]
struct ClassRecord {
    lshift: i64,
    terms: Vec<TermRecordClass>,
}
