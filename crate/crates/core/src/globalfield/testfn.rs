//! Global test functions on A^m over F_q(t) and the rational-point functional.

use std::sync::Arc;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::localfield::{layout, Block, PlaceData, Window};
use crate::scalars::{field_of_order, psi, CycScalar, Fe, GaloisField};
use crate::transform::{self, decode, encode};

use super::{laurent_digits, residue, rr_basis, Divisor, Place, RationalFn};

/// Default cap on the number of rational points enumerated by δ^K.
pub const DEFAULT_MAX_ENUM: u128 = 1 << 20;

/// A function on A^m of the adeles: a dense table on the jets at the places
/// of S, times the indicator of integral points everywhere else.
///
/// Coordinates are ordered by place (infinity first, then by polynomial),
/// then by component.
#[derive(Clone, Debug, PartialEq)]
pub struct GlobalTestFunction {
    field: Arc<GaloisField>,
    support: Vec<(PlaceData, Window)>,
    arity: usize,
    values: Vec<CycScalar>,
}

fn place_blocks(support: &[(PlaceData, Window)], arity: usize) -> Vec<Block> {
    let mut out = Vec::with_capacity(support.len() * arity);
    for (pd, w) in support {
        for _ in 0..arity {
            out.push(Block {
                place: pd.clone(),
                window: *w,
            });
        }
    }
    out
}

fn sorted_support(field: &Arc<GaloisField>, support: &[(Place, Window)]) -> Result<Vec<(PlaceData, Window)>> {
    let mut s: Vec<(Place, Window)> = support.to_vec();
    s.sort_by(|a, b| a.0.cmp(&b.0));
    if s.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::SupportOverlap);
    }
    Ok(s.into_iter().map(|(p, w)| (PlaceData::new(field, p), w)).collect())
}

/// Number of tuples in L(D)^m landing on each jet of the support, where
/// D = Σ N_u [u]. Entry i counts the rational points whose jet has index i.
pub fn delta_k_counts(
    field: &Arc<GaloisField>,
    support: &[(PlaceData, Window)],
    arity: usize,
    cap: u128,
) -> Result<Vec<u64>> {
    let blocks = place_blocks(support, arity);
    let n = layout::table_len(field, &blocks)?;
    let dim_total = layout::total_dim(&blocks);
    let divisor = Divisor::from_pairs(support.iter().map(|(pd, w)| (pd.place().clone(), w.pole as i64)));
    let basis = rr_basis(field, &divisor);
    let k = basis.len() * arity;
    let q = field.order() as u128;
    let needed = q.checked_pow(k as u32).unwrap_or(u128::MAX);
    if needed > cap {
        return Err(Error::BudgetExceeded { needed, cap });
    }

    // Jet of each basis element in each component, as a full coordinate vector.
    let mut gens: Vec<Vec<Fe>> = Vec::with_capacity(k);
    for c in 0..arity {
        for f in &basis {
            let mut v = Vec::with_capacity(dim_total);
            for (pd, w) in support {
                for comp in 0..arity {
                    if comp == c {
                        v.extend(pd.jet_coords(f, *w)?);
                    } else {
                        v.extend(std::iter::repeat(Fe::ZERO).take(pd.jet_dim(*w)));
                    }
                }
            }
            gens.push(v);
        }
    }

    let hits: Vec<usize> = (0..needed as usize)
        .into_par_iter()
        .map(|pi| {
            let coefs = decode(field, pi, k);
            let mut acc = vec![Fe::ZERO; dim_total];
            for (c, g) in coefs.iter().zip(&gens) {
                if c.is_zero() {
                    continue;
                }
                for (a, &b) in acc.iter_mut().zip(g) {
                    *a = field.add(*a, field.mul(*c, b));
                }
            }
            encode(field, &acc)
        })
        .collect();
    let mut counts = vec![0u64; n];
    for h in hits {
        counts[h] += 1;
    }
    Ok(counts)
}

/// Outcome of comparing δ^K(φ) with δ^K(Fφ).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoissonReport {
    pub lhs: CycScalar,
    pub rhs: CycScalar,
    pub equal: bool,
}

/// Poisson summation over every jet indicator of a support.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoissonBasisSummary {
    pub places: Vec<String>,
    pub windows: Vec<Window>,
    pub cases: usize,
    pub equal_cases: usize,
    /// Cases where the coset contains no rational point and both sides vanish.
    pub empty_cosets: usize,
    pub all_equal: bool,
}

#[derive(Serialize, Deserialize)]
struct PlaceRecord {
    poly: String,
    #[serde(rename = "N")]
    pole: u32,
    #[serde(rename = "M")]
    depth: u32,
}

#[derive(Serialize, Deserialize)]
struct GlobalRecord {
    q: u32,
    places: Vec<PlaceRecord>,
    arity: usize,
    table: Vec<CycScalar>,
}

impl GlobalTestFunction {
    /// `support` must be listed in place order; see [`GlobalTestFunction::from_fn`]
    /// for arbitrary order.
    pub fn new(
        field: &Arc<GaloisField>,
        support: &[(Place, Window)],
        arity: usize,
        values: Vec<CycScalar>,
    ) -> Result<Self> {
        if support.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Invalid("support places must be distinct and in increasing order".into()));
        }
        let support = sorted_support(field, support)?;
        Self::from_parts(field, support, arity, values)
    }

    fn from_parts(
        field: &Arc<GaloisField>,
        support: Vec<(PlaceData, Window)>,
        arity: usize,
        values: Vec<CycScalar>,
    ) -> Result<Self> {
        let expected = layout::table_len(field, &place_blocks(&support, arity))?;
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: values.len(),
            });
        }
        if arity == 0 {
            return Err(Error::Invalid("arity must be positive".into()));
        }
        if values.iter().any(|v| v.p() != field.characteristic()) {
            return Err(Error::FieldMismatch);
        }
        Ok(GlobalTestFunction {
            field: field.clone(),
            support,
            arity,
            values,
        })
    }

    /// Tabulates f, which receives the flat jet coordinates.
    pub fn from_fn(
        field: &Arc<GaloisField>,
        support: &[(Place, Window)],
        arity: usize,
        f: impl Fn(&[Fe]) -> CycScalar + Sync,
    ) -> Result<Self> {
        let support = sorted_support(field, support)?;
        let blocks = place_blocks(&support, arity);
        let n = layout::table_len(field, &blocks)?;
        let dim = layout::total_dim(&blocks);
        let values = (0..n)
            .into_par_iter()
            .map(|i| f(&decode(field, i, dim)))
            .collect();
        Self::from_parts(field, support, arity, values)
    }

    pub fn indicator(field: &Arc<GaloisField>, support: &[(Place, Window)], arity: usize) -> Result<Self> {
        let p = field.characteristic();
        Self::from_fn(field, support, arity, |_| CycScalar::one(p))
    }

    pub fn zero(field: &Arc<GaloisField>, support: &[(Place, Window)], arity: usize) -> Result<Self> {
        let p = field.characteristic();
        Self::from_fn(field, support, arity, |_| CycScalar::zero(p))
    }

    /// Indicator of one jet, given by its table index.
    pub fn delta(field: &Arc<GaloisField>, support: &[(Place, Window)], arity: usize, idx: usize) -> Result<Self> {
        let mut phi = Self::zero(field, support, arity)?;
        if idx >= phi.values.len() {
            return Err(Error::Invalid(format!("jet index {idx} out of range")));
        }
        phi.values[idx] = CycScalar::one(field.characteristic());
        Ok(phi)
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn support(&self) -> Vec<(Place, Window)> {
        self.support.iter().map(|(pd, w)| (pd.place().clone(), *w)).collect()
    }

    pub fn values(&self) -> &[CycScalar] {
        &self.values
    }

    pub fn blocks(&self) -> Vec<Block> {
        place_blocks(&self.support, self.arity)
    }

    fn zero_value(&self) -> CycScalar {
        CycScalar::zero(self.field.characteristic())
    }

    fn has_place(&self, place: &Place) -> bool {
        self.support.iter().any(|(pd, _)| pd.place() == place)
    }

    pub fn window_at(&self, place: &Place) -> Option<Window> {
        self.support.iter().find(|(pd, _)| pd.place() == place).map(|(_, w)| *w)
    }

    /// Adds the missing places with the trivial window. The table is unchanged
    /// since the added blocks carry no coordinates.
    fn enlarged(&self, places: &[Place]) -> Self {
        let mut support = self.support.clone();
        for p in places {
            if !support.iter().any(|(pd, _)| pd.place() == p) {
                support.push((PlaceData::new(&self.field, p.clone()), Window::new(0, 0)));
            }
        }
        support.sort_by(|a, b| a.0.place().cmp(b.0.place()));
        GlobalTestFunction {
            support,
            ..self.clone()
        }
    }

    /// (S, φ) ↦ (S ∪ S', φ ⊗ 1_O).
    pub fn normalize_support(&self, extra: &[Place]) -> Result<Self> {
        for (i, p) in extra.iter().enumerate() {
            if self.has_place(p) || extra[..i].contains(p) {
                return Err(Error::SupportOverlap);
            }
        }
        Ok(self.enlarged(extra))
    }

    /// Moves to windows dominating the current ones, place by place.
    pub fn to_windows(&self, windows: impl Fn(&PlaceData, Window) -> Window) -> Result<Self> {
        let support: Vec<(PlaceData, Window)> = self
            .support
            .iter()
            .map(|(pd, w)| (pd.clone(), windows(pd, *w)))
            .collect();
        for ((_, old), (_, new)) in self.support.iter().zip(&support) {
            if !new.dominates(old) {
                return Err(Error::WindowShrink(format!("{old} to {new}")));
            }
        }
        let values = layout::retabulate(
            &self.field,
            &self.blocks(),
            &place_blocks(&support, self.arity),
            &self.values,
            &self.zero_value(),
        )?;
        Self::from_parts(&self.field, support, self.arity, values)
    }

    fn joined(&self, other: &Self) -> Result<(Self, Self)> {
        if self.field != other.field || self.arity != other.arity {
            return Err(Error::FieldMismatch);
        }
        let places: Vec<Place> = self
            .support
            .iter()
            .chain(&other.support)
            .map(|(pd, _)| pd.place().clone())
            .collect();
        let a = self.enlarged(&places);
        let b = other.enlarged(&places);
        let wins: Vec<Window> = a
            .support
            .iter()
            .zip(&b.support)
            .map(|((_, x), (_, y))| x.join(y))
            .collect();
        let a = a.to_windows(|pd, _| wins[a.support.iter().position(|(p, _)| p == pd).unwrap()])?;
        let b = b.to_windows(|pd, _| wins[b.support.iter().position(|(p, _)| p == pd).unwrap()])?;
        Ok((a, b))
    }

    /// Equality as functions on the adeles.
    pub fn equivalent(&self, other: &Self) -> Result<bool> {
        let (a, b) = self.joined(other)?;
        Ok(a.values == b.values)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.joined(other)?;
        let values = a.values.iter().zip(&b.values).map(|(x, y)| x + y).collect();
        Ok(GlobalTestFunction { values, ..a })
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        GlobalTestFunction {
            values: self.values.iter().map(|v| v * c).collect(),
            ..self.clone()
        }
    }

    /// δ^K(φ) = Σ_{y ∈ K^m} φ(y).
    pub fn delta_k(&self, cap: u128) -> Result<CycScalar> {
        let counts = delta_k_counts(&self.field, &self.support, self.arity, cap)?;
        let mut acc = self.zero_value();
        for (c, v) in counts.iter().zip(&self.values) {
            if *c != 0 && !v.is_zero() {
                acc += &(v * &CycScalar::from_integer(v.p(), *c as i64));
            }
        }
        Ok(acc)
    }

    /// Adds infinity and deepens each window to M ≥ ν so that the dual windows exist.
    fn prepared_for_fourier(&self) -> Result<Self> {
        self.enlarged(&[Place::Infinity])
            .to_windows(|pd, w| Window::new(w.pole, w.depth.max(pd.nu().max(0) as u32)))
    }

    fn fourier_with(
        &self,
        run: impl Fn(&transform::Gram, &BigRational, &[CycScalar]) -> Result<Vec<CycScalar>>,
    ) -> Result<Self> {
        let phi = self.prepared_for_fourier()?;
        let blocks = phi.blocks();
        let (duals, gram) = layout::dual_blocks(&blocks)?;
        let scale = layout::fourier_scale(self.field.order(), &blocks);
        let values = run(&gram, &scale, &phi.values)?;
        let support = phi
            .support
            .iter()
            .enumerate()
            .map(|(i, (pd, _))| (pd.clone(), duals[i * self.arity].window))
            .collect();
        Self::from_parts(&self.field, support, self.arity, values)
    }

    /// Placewise transform with the residue pairing of ω = dt.
    pub fn global_fourier(&self) -> Result<Self> {
        let f = self.field.clone();
        self.fourier_with(|g, s, v| transform::transform(&f, g, v, s))
    }

    /// The same transform by the direct double sum.
    pub fn global_fourier_direct(&self) -> Result<Self> {
        let f = self.field.clone();
        self.fourier_with(|g, s, v| transform::transform_direct(&f, g, v, s))
    }

    pub fn negate_argument(&self) -> Self {
        GlobalTestFunction {
            values: layout::negate_argument(&self.field, &self.blocks(), &self.values),
            ..self.clone()
        }
    }

    fn check_arity(&self, a: &[RationalFn]) -> Result<()> {
        if a.len() != self.arity {
            return Err(Error::LengthMismatch {
                expected: self.arity,
                got: a.len(),
            });
        }
        if a.iter().any(|f| **f.field() != *self.field) {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// x ↦ φ(x + a). The support grows to cover the poles of a.
    pub fn translate(&self, a: &[RationalFn]) -> Result<Self> {
        self.check_arity(a)?;
        let mut poles: Vec<Place> = Vec::new();
        for f in a {
            poles.extend(f.finite_poles());
            if f.valuation(&Place::Infinity) < 0 {
                poles.push(Place::Infinity);
            }
        }
        let phi = self.enlarged(&poles);
        let phi = phi.to_windows(|pd, w| {
            let need = a.iter().map(|f| (-f.valuation(pd.place())).max(0)).max().unwrap_or(0);
            Window::new(w.pole.max(need as u32), w.depth)
        })?;
        let mut shift = Vec::new();
        for (pd, w) in &phi.support {
            for f in a {
                shift.extend(pd.jet_coords(f, *w)?);
            }
        }
        let dim = shift.len();
        let f = &self.field;
        let values = (0..phi.values.len())
            .into_par_iter()
            .map(|i| {
                let x: Vec<Fe> = decode(f, i, dim).iter().zip(&shift).map(|(u, v)| f.add(*u, *v)).collect();
                phi.values[encode(f, &x)].clone()
            })
            .collect();
        Ok(GlobalTestFunction { values, ..phi })
    }

    /// x ↦ ψ(Σ_u r_u(a·x)) φ(x).
    pub fn twist_character(&self, a: &[RationalFn]) -> Result<Self> {
        self.check_arity(a)?;
        let mut extra: Vec<Place> = Vec::new();
        for f in a {
            extra.extend(f.finite_poles());
            if !f.is_zero() && f.valuation(&Place::Infinity) < 2 {
                extra.push(Place::Infinity);
            }
        }
        let phi = self.enlarged(&extra).to_windows(|pd, w| {
            let need = a
                .iter()
                .filter(|f| !f.is_zero())
                .map(|f| pd.nu() - f.valuation(pd.place()))
                .max()
                .unwrap_or(0)
                .max(0);
            Window::new(w.pole, w.depth.max(need as u32))
        })?;
        // r_u(a_c · e) for each coordinate basis vector e.
        let mut functional = Vec::new();
        for (pd, w) in &phi.support {
            let d = pd.degree() as usize;
            let param = pd.parameter();
            for f in a {
                for i in w.lo()..w.hi() {
                    let pi_i = param.pow(i).expect("nonzero parameter");
                    for j in 0..d {
                        let e = RationalFn::t_pow(&self.field, j as i64).mul(&pi_i);
                        functional.push(residue(&f.mul(&e), pd.place())?.trace);
                    }
                }
            }
        }
        let dim = functional.len();
        let f = &self.field;
        let values = (0..phi.values.len())
            .into_par_iter()
            .map(|i| {
                let v = &phi.values[i];
                if v.is_zero() {
                    return v.clone();
                }
                let x = decode(f, i, dim);
                let s = f.sum(x.iter().zip(&functional).map(|(u, w)| f.mul(*u, *w)));
                v * &psi(f, s)
            })
            .collect();
        Ok(GlobalTestFunction { values, ..phi })
    }

    /// x ↦ φ(a·x) for a nonzero rational function a.
    pub fn scale_argument(&self, a: &RationalFn) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::Invalid("scaling by zero".into()));
        }
        let places: Vec<Place> = a.divisor().iter().map(|(p, _)| p.clone()).collect();
        let phi = self.enlarged(&places);
        let f = &self.field;
        let mut support = Vec::new();
        // Per block: for each new coordinate, digits of a·e over [lo_new + v, hi_old).
        let mut images: Vec<(Vec<Vec<Fe>>, usize, usize)> = Vec::new();
        for (pd, w) in &phi.support {
            let v = a.valuation(pd.place());
            let nw = Window::new((w.pole as i64 + v).max(0) as u32, (w.depth as i64 - v).max(0) as u32);
            support.push((pd.clone(), nw));
            let d = pd.degree() as usize;
            let lo = nw.lo() + v;
            let below = (w.lo() - lo).max(0) as usize;
            let param = pd.parameter();
            for _ in 0..self.arity {
                let mut cols = Vec::new();
                for i in nw.lo()..nw.hi() {
                    let pi_i = param.pow(i).expect("nonzero parameter");
                    for j in 0..d {
                        let e = RationalFn::t_pow(f, j as i64).mul(&pi_i).mul(a);
                        let dg = laurent_digits(&e, pd.place(), lo.min(w.lo()), w.hi())?;
                        cols.push(dg.into_iter().flatten().collect::<Vec<Fe>>());
                    }
                }
                images.push((cols, below * d, pd.jet_dim(*w)));
            }
        }
        let new_blocks = place_blocks(&support, self.arity);
        let n = layout::table_len(f, &new_blocks)?;
        let dim = layout::total_dim(&new_blocks);
        let zero = self.zero_value();
        let values = (0..n)
            .into_par_iter()
            .map(|idx| {
                let x = decode(f, idx, dim);
                let mut old = Vec::new();
                let mut off = 0;
                for (cols, below, old_dim) in &images {
                    let mut acc = vec![Fe::ZERO; below + old_dim];
                    for (k, col) in cols.iter().enumerate() {
                        let c = x[off + k];
                        if c.is_zero() {
                            continue;
                        }
                        for (s, &g) in acc.iter_mut().zip(col) {
                            *s = f.add(*s, f.mul(c, g));
                        }
                    }
                    off += cols.len();
                    if acc[..*below].iter().any(|c| !c.is_zero()) {
                        return zero.clone();
                    }
                    old.extend_from_slice(&acc[*below..]);
                }
                phi.values[encode(f, &old)].clone()
            })
            .collect();
        Self::from_parts(f, support, self.arity, values)
    }

    pub fn poisson_report(&self, cap: u128) -> Result<PoissonReport> {
        let lhs = self.delta_k(cap)?;
        let rhs = self.global_fourier()?.delta_k(cap)?;
        let equal = lhs == rhs;
        Ok(PoissonReport { lhs, rhs, equal })
    }

    /// Poisson summation for every jet indicator on a support at once.
    ///
    /// For the indicator of the jet x, δ^K is the number of rational points
    /// with jet x, and δ^K of its transform is Σ_{x'} N'(x') F(1_x)(x') with N'
    /// the counts on the dual windows. The second sum, as a function of x, is
    /// one transform of N' for the transposed pairing.
    pub fn poisson_basis(
        field: &Arc<GaloisField>,
        support: &[(Place, Window)],
        arity: usize,
        cap: u128,
    ) -> Result<PoissonBasisSummary> {
        let phi = Self::zero(field, support, arity)?.prepared_for_fourier()?;
        let blocks = phi.blocks();
        let (duals, gram) = layout::dual_blocks(&blocks)?;
        let scale = layout::fourier_scale(field.order(), &blocks);
        let dual_support: Vec<(PlaceData, Window)> = phi
            .support
            .iter()
            .enumerate()
            .map(|(i, (pd, _))| (pd.clone(), duals[i * arity].window))
            .collect();
        let counts = delta_k_counts(field, &phi.support, arity, cap)?;
        let dual_counts = delta_k_counts(field, &dual_support, arity, cap)?;
        let p = field.characteristic();
        let input: Vec<CycScalar> = dual_counts
            .iter()
            .map(|&c| CycScalar::from_integer(p, c as i64))
            .collect();
        let rhs = transform::transform(field, &gram.transpose(), &input, &scale)?;
        let mut equal_cases = 0;
        let mut empty_cosets = 0;
        for (c, r) in counts.iter().zip(&rhs) {
            if CycScalar::from_integer(p, *c as i64) == *r {
                equal_cases += 1;
                if *c == 0 {
                    empty_cosets += 1;
                }
            }
        }
        Ok(PoissonBasisSummary {
            places: phi.support.iter().map(|(pd, _)| pd.place().to_string()).collect(),
            windows: phi.support.iter().map(|(_, w)| *w).collect(),
            cases: counts.len(),
            equal_cases,
            empty_cosets,
            all_equal: equal_cases == counts.len(),
        })
    }

    pub fn to_json(&self) -> String {
        let rec = GlobalRecord {
            q: self.field.order(),
            places: self
                .support
                .iter()
                .map(|(pd, w)| PlaceRecord {
                    poly: pd.place().to_string(),
                    pole: w.pole,
                    depth: w.depth,
                })
                .collect(),
            arity: self.arity,
            table: self.values.clone(),
        };
        serde_json::to_string(&rec).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let rec: GlobalRecord = serde_json::from_str(s).map_err(|e| Error::Invalid(e.to_string()))?;
        let field = field_of_order(rec.q)?;
        let support: Vec<(Place, Window)> = rec
            .places
            .iter()
            .map(|r| Ok((Place::parse(&field, &r.poly)?, Window::new(r.pole, r.depth))))
            .collect::<Result<_>>()?;
        let support = sorted_support(&field, &support)?;
        if rec.places.iter().zip(&support).any(|(r, (pd, _))| Place::parse(&field, &r.poly).ok().as_ref() != Some(pd.place())) {
            return Err(Error::Invalid("places must be listed in increasing order".into()));
        }
        Self::from_parts(&field, support, rec.arity, rec.table)
    }
}
