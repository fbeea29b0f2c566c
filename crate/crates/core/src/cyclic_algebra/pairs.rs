use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::globalfield::RationalFn;
use crate::scalars::{CycScalar, Fe};

use super::descriptor::AlgebraDescriptor;
use super::element::AlgebraElement;
use super::invariant::{invariant_fns, AlgRecipe, Pairing};
use super::jet::{AlgebraJet, AlgebraWindow};

/// How a matched pair was produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// (b·s, b·ṡ).
    BsForm,
    /// An element of L ⊗ F_q(t) common to both algebras.
    LCommon,
}

/// Elements of two forms with the same reduced characteristic polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchedPair {
    pub c: AlgebraElement,
    pub c_dot: AlgebraElement,
    pub provenance: Provenance,
}

impl MatchedPair {
    /// Checks that the characteristic polynomials agree.
    pub fn new(c: AlgebraElement, c_dot: AlgebraElement, provenance: Provenance) -> Result<Self> {
        if c.reduced_char_poly()? != c_dot.reduced_char_poly()? {
            return Err(Error::Precondition("reduced characteristic polynomials differ".into()));
        }
        Ok(MatchedPair { c, c_dot, provenance })
    }

    /// a·c + r on both sides, for central a, r.
    pub fn affine(&self, a: &RationalFn, r: &RationalFn) -> Result<Self> {
        let lift = |x: &AlgebraElement| x.scale(a).add(&AlgebraElement::scalar(x.descriptor(), r));
        MatchedPair::new(lift(&self.c)?, lift(&self.c_dot)?, self.provenance.clone())
    }
}

fn check_forms(d: &AlgebraDescriptor, d_dot: &AlgebraDescriptor) -> Result<()> {
    if !d.compatible(d_dot) {
        return Err(Error::DescriptorMismatch);
    }
    if d.exponent() == d_dot.exponent() {
        return Err(Error::Precondition("the two forms use the same generator".into()));
    }
    Ok(())
}

/// (b·s, b·ṡ) for b ∈ L*.
pub fn matched_pair(d: &Arc<AlgebraDescriptor>, d_dot: &Arc<AlgebraDescriptor>, b: Fe) -> Result<MatchedPair> {
    check_forms(d, d_dot)?;
    if b.is_zero() {
        return Err(Error::Invalid("b must be nonzero".into()));
    }
    let i = 1 % d.n() as usize;
    MatchedPair::new(
        AlgebraElement::from_l(d, b, i),
        AlgebraElement::from_l(d_dot, b, i),
        Provenance::BsForm,
    )
}

/// The element Σ_j c_j d_j of L ⊗ F_q(t) in both algebras.
pub fn matched_pair_l(
    d: &Arc<AlgebraDescriptor>,
    d_dot: &Arc<AlgebraDescriptor>,
    c: &[RationalFn],
) -> Result<MatchedPair> {
    check_forms(d, d_dot)?;
    MatchedPair::new(
        AlgebraElement::monomial(d, c, 0)?,
        AlgebraElement::monomial(d_dot, c, 0)?,
        Provenance::LCommon,
    )
}

/// The desk family: b·s and 1 + b·s for b ∈ L*, ℓ and (1+t)ℓ for ℓ ∈ L ∖ F_q.
pub fn standard_pairs(d: &Arc<AlgebraDescriptor>, d_dot: &Arc<AlgebraDescriptor>) -> Result<Vec<MatchedPair>> {
    let f = d.base();
    let one = RationalFn::one(f);
    let one_plus_t = one.add(&RationalFn::t(f));
    let top = d.splitting_field();
    let mut out = Vec::new();
    for b in top.elements().skip(1) {
        let pair = matched_pair(d, d_dot, b)?;
        out.push(pair.affine(&one, &one)?);
        out.push(pair);
    }
    for l in top.elements() {
        if d.extension().restrict(l).is_some() {
            continue;
        }
        let c: Vec<RationalFn> = d.coords_of(l).iter().map(|&a| RationalFn::constant(f, a)).collect();
        let pair = matched_pair_l(d, d_dot, &c)?;
        out.push(pair.affine(&one_plus_t, &RationalFn::zero(f))?);
        out.push(pair);
    }
    out.sort_by_key(|p| p.provenance == Provenance::LCommon);
    Ok(out)
}

/// One comparison of F_D φ(t^{−shift} c) against F_Ḋ φ̇(t^{−shift} ċ).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremARow {
    pub pair_id: usize,
    pub provenance: Provenance,
    pub charpoly: String,
    pub recipe: String,
    pub value_d: CycScalar,
    pub value_ddot: CycScalar,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremAReport {
    pub window: (i64, i64),
    pub shift: i64,
    pub rows: Vec<TheoremARow>,
    /// Pairs whose characteristic polynomial is not separable.
    pub skipped: Vec<usize>,
}

impl TheoremAReport {
    pub fn all_equal(&self) -> bool {
        self.rows.iter().all(|r| r.equal)
    }
}

/// Transforms each recipe on both forms and compares them on the matched pairs.
pub fn theorem_a_report(
    recipes: &[AlgRecipe],
    pairs: &[MatchedPair],
    window: AlgebraWindow,
    shift: i64,
    pairing: Pairing,
) -> Result<TheoremAReport> {
    let Some(first) = pairs.first() else {
        return Err(Error::Invalid("no pairs".into()));
    };
    let d = first.c.descriptor().clone();
    let d_dot = first.c_dot.descriptor().clone();
    if pairs.iter().any(|p| p.c.descriptor() != &d || p.c_dot.descriptor() != &d_dot) {
        return Err(Error::DescriptorMismatch);
    }
    let f = d.base().clone();
    let scale = RationalFn::t_pow(&f, -shift);
    let mut regular = Vec::new();
    let mut skipped = Vec::new();
    for (id, pair) in pairs.iter().enumerate() {
        let cp = pair.c.reduced_char_poly()?;
        if cp.is_separable() {
            regular.push((id, pair, cp));
        } else {
            skipped.push(id);
        }
    }
    let phis = invariant_fns(&d, recipes, window)?;
    let phis_dot = invariant_fns(&d_dot, recipes, window)?;
    let mut rows = Vec::new();
    for ((recipe, phi), phi_dot) in recipes.iter().zip(phis).zip(phis_dot) {
        let big = phi.fourier_d(pairing)?;
        let big_dot = phi_dot.fourier_d(pairing)?;
        let out = big.window();
        for (id, pair, cp) in &regular {
            let x = AlgebraJet::from_element(&pair.c.scale(&scale), out)?;
            let y = AlgebraJet::from_element(&pair.c_dot.scale(&scale), out)?;
            let (a, b) = (big.value_at(&x)?, big_dot.value_at(&y)?);
            rows.push(TheoremARow {
                pair_id: *id,
                provenance: pair.provenance.clone(),
                charpoly: cp.to_string(),
                recipe: recipe.to_string(),
                equal: a == b,
                value_d: a,
                value_ddot: b,
            });
        }
    }
    Ok(TheoremAReport {
        window: (window.lo, window.hi),
        shift,
        rows,
        skipped,
    })
}

/// Constant, trace character and characteristic-polynomial cosets mod t^depth
/// of s, 1 + s, θ, θ + s and t.
pub fn standard_recipes(d: &Arc<AlgebraDescriptor>, depth: usize) -> Result<Vec<AlgRecipe>> {
    let f = d.base();
    let s = AlgebraElement::s(d);
    let one = AlgebraElement::one(d);
    let theta = AlgebraElement::from_l(d, d.splitting_field().primitive(), 0);
    let t = AlgebraElement::scalar(d, &RationalFn::t(f));
    let mut out = vec![AlgRecipe::Constant, AlgRecipe::TraceCharacter { depth }];
    for x in [s.clone(), one.add(&s)?, theta.clone(), theta.add(&s)?, t] {
        let target = super::jet::CharPolyJet::from_char_poly(&x.reduced_char_poly()?, depth)?;
        out.push(AlgRecipe::CharPolyCoset { target });
    }
    Ok(out)
}
