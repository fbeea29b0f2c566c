use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parse::{parse_multivariate, Terms};
use crate::scalars::{Extension, Fe, GaloisField};

/// Sparse polynomial over F_q in a fixed number of variables.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    field: Arc<GaloisField>,
    nvars: usize,
    terms: Terms,
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, &c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                    .collect();
                let cs = self.field.format(c);
                match (mono.is_empty(), c == Fe::ONE) {
                    (true, _) => cs,
                    (false, true) => mono.join("*"),
                    (false, false) => format!("({cs})*{}", mono.join("*")),
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl MPoly {
    pub fn new(field: &Arc<GaloisField>, nvars: usize, mut terms: Terms) -> Result<Self> {
        terms.retain(|_, c| !c.is_zero());
        if terms.keys().any(|e| e.len() != nvars) {
            return Err(Error::Invalid("exponent vector of the wrong length".into()));
        }
        if terms.values().any(|c| c.0 >= field.order()) {
            return Err(Error::FieldMismatch);
        }
        Ok(MPoly {
            field: field.clone(),
            nvars,
            terms,
        })
    }

    pub fn zero(field: &Arc<GaloisField>, nvars: usize) -> Self {
        MPoly {
            field: field.clone(),
            nvars,
            terms: Terms::new(),
        }
    }

    pub fn constant(field: &Arc<GaloisField>, nvars: usize, c: Fe) -> Self {
        let mut terms = Terms::new();
        terms.insert(vec![0; nvars], c);
        MPoly::new(field, nvars, terms).expect("well formed")
    }

    /// The coordinate function x_i.
    pub fn var(field: &Arc<GaloisField>, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut terms = Terms::new();
        terms.insert(e, Fe::ONE);
        MPoly::new(field, nvars, terms).expect("well formed")
    }

    /// Parses with variables named by `vars`; `a` denotes the field generator.
    pub fn parse(field: &Arc<GaloisField>, s: &str, vars: &[&str]) -> Result<Self> {
        let terms = parse_multivariate(field, s, vars)?;
        MPoly::new(field, vars.len(), terms)
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &MPoly) -> Result<MPoly> {
        if self.field != other.field || self.nvars != other.nvars {
            return Err(Error::FieldMismatch);
        }
        let mut terms = self.terms.clone();
        for (e, &c) in &other.terms {
            let slot = terms.entry(e.clone()).or_insert(Fe::ZERO);
            *slot = self.field.add(*slot, c);
        }
        MPoly::new(&self.field, self.nvars, terms)
    }

    pub fn scale(&self, c: Fe) -> MPoly {
        let terms = self
            .terms
            .iter()
            .map(|(e, &v)| (e.clone(), self.field.mul(v, c)))
            .collect();
        MPoly::new(&self.field, self.nvars, terms).expect("well formed")
    }

    /// The same polynomial in `total` variables, its own placed from `offset`.
    pub fn embed_vars(&self, offset: usize, total: usize) -> MPoly {
        let terms = self
            .terms
            .iter()
            .map(|(e, &c)| {
                let mut v = vec![0; total];
                v[offset..offset + self.nvars].copy_from_slice(e);
                (v, c)
            })
            .collect();
        MPoly {
            field: self.field.clone(),
            nvars: total,
            terms,
        }
    }

    /// Value at a point with coordinates in the top field of `ext`.
    pub fn eval_in(&self, ext: &Extension, x: &[Fe]) -> Fe {
        let top = ext.top();
        let mut acc = Fe::ZERO;
        for (e, &c) in &self.terms {
            let mut m = ext.embed(c);
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    m = top.mul(m, top.pow(*xi, k as u64));
                }
            }
            acc = top.add(acc, m);
        }
        acc
    }

    pub(crate) fn to_record(&self) -> PolyRecord {
        PolyRecord {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, &c)| TermRecord {
                    exp: e.clone(),
                    coeff: self.field.coeffs(c),
                })
                .collect(),
        }
    }

    pub(crate) fn from_record(field: &Arc<GaloisField>, r: &PolyRecord) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for t in &r.terms {
            let c = field.from_coeffs(&t.coeff)?;
            let slot = terms.entry(t.exp.clone()).or_insert(Fe::ZERO);
            *slot = field.add(*slot, c);
        }
        MPoly::new(field, r.nvars, terms)
    }
}

/// Serialized polynomial: each coefficient is its list of F_p coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub(crate) struct PolyRecord {
    pub nvars: usize,
    pub terms: Vec<TermRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub(crate) struct TermRecord {
    pub exp: Vec<u32>,
    pub coeff: Vec<u32>,
}
