use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalars::{psi, rational_power, CycScalar, Fe};
use crate::transform::{self, Gram};

use super::descriptor::AlgebraDescriptor;
use super::jet::{AlgebraJet, AlgebraWindow, CharPolyJet};

/// Bilinear form behind the transform on D.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Pairing {
    /// ψ(res_t Trd(xy) dt).
    #[default]
    ReducedTrace,
    /// ψ of the coordinatewise product of levels k and −n−k.
    Dot,
}

/// Conjugation-invariant functions on S_0 built from reduced invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgRecipe {
    /// 1 on S_0.
    Constant,
    /// ψ(a_0 + … + a_{e−1}) for Trd(x) ≡ Σ a_i t^i mod t^e.
    TraceCharacter { depth: usize },
    /// Indicator of reduced characteristic polynomial ≡ target mod t^depth.
    CharPolyCoset { target: CharPolyJet },
    /// Indicator of w(x) = value.
    Valuation { value: i64 },
}

impl fmt::Display for AlgRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgRecipe::Constant => f.write_str("constant"),
            AlgRecipe::TraceCharacter { depth } => write!(f, "trace-character mod t^{depth}"),
            AlgRecipe::CharPolyCoset { target } => {
                let cs: Vec<String> = target
                    .coeffs
                    .iter()
                    .map(|c| c.iter().map(|a| a.0.to_string()).collect::<Vec<_>>().join(","))
                    .collect();
                write!(f, "charpoly-coset mod t^{} [{}]", target.depth, cs.join(";"))
            }
            AlgRecipe::Valuation { value } => write!(f, "valuation {value}"),
        }
    }
}

impl AlgRecipe {
    /// Depth in t to which the characteristic polynomial is read.
    pub fn depth(&self) -> usize {
        match self {
            AlgRecipe::Constant | AlgRecipe::Valuation { .. } => 0,
            AlgRecipe::TraceCharacter { depth } => *depth,
            AlgRecipe::CharPolyCoset { target } => target.depth,
        }
    }

    fn evaluate(&self, desc: &AlgebraDescriptor, cp: &CharPolyJet, w: Option<i64>) -> Result<CycScalar> {
        let f = desc.base();
        let p = f.characteristic();
        Ok(match self {
            AlgRecipe::Constant => CycScalar::one(p),
            AlgRecipe::TraceCharacter { depth } => {
                let tr = cp.truncate(*depth)?.trace(f);
                psi(f, f.sum(tr))
            }
            AlgRecipe::CharPolyCoset { target } => {
                CycScalar::from_integer(p, (cp.truncate(target.depth)? == *target) as i64)
            }
            AlgRecipe::Valuation { value } => CycScalar::from_integer(p, (w == Some(*value)) as i64),
        })
    }
}

/// A table on the jet space of a window of D at t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraTestFunction {
    desc: Arc<AlgebraDescriptor>,
    window: AlgebraWindow,
    values: Vec<CycScalar>,
}

fn table_len(desc: &AlgebraDescriptor, window: AlgebraWindow) -> Result<usize> {
    transform::table_size(desc.base().order(), window.levels() * desc.n() as usize)
}

/// Table of the recipe on S_0/P^hi; the window must start at level 0.
pub fn invariant_fn(desc: &Arc<AlgebraDescriptor>, recipe: &AlgRecipe, window: AlgebraWindow) -> Result<AlgebraTestFunction> {
    invariant_fns(desc, std::slice::from_ref(recipe), window).map(|mut v| v.remove(0))
}

/// Several recipe tables sharing one pass of characteristic polynomials.
pub fn invariant_fns(
    desc: &Arc<AlgebraDescriptor>,
    recipes: &[AlgRecipe],
    window: AlgebraWindow,
) -> Result<Vec<AlgebraTestFunction>> {
    if window.lo != 0 {
        return Err(Error::Precondition(format!("recipes live on S_0, got {window}")));
    }
    let available = (window.hi / desc.n() as i64) as usize;
    if let Some(r) = recipes.iter().find(|r| r.depth() > available) {
        return Err(Error::InsufficientDepth(format!("{r} on {window} determines only t^{available}")));
    }
    let size = table_len(desc, window)?;
    let rows: Vec<Vec<CycScalar>> = (0..size)
        .into_par_iter()
        .map(|idx| {
            let x = AlgebraJet::from_index(desc, window, idx);
            let cp = x.char_poly_jet()?;
            let w = x.w_valuation();
            recipes.iter().map(|r| r.evaluate(desc, &cp, w)).collect()
        })
        .collect::<Result<_>>()?;
    Ok((0..recipes.len())
        .map(|r| AlgebraTestFunction {
            desc: desc.clone(),
            window,
            values: rows.iter().map(|row| row[r].clone()).collect(),
        })
        .collect())
}

/// ν with S_0^∨ = P^{−ν}, read off the pairing of basis jets.
pub fn dual_exponent(desc: &AlgebraDescriptor, pairing: Pairing) -> i64 {
    let n = desc.n() as i64;
    let deepest = (-3 * n..0)
        .rev()
        .find(|&k| (0..3 * n).any(|m| level_block(desc, pairing, k, m).iter().flatten().any(|c| !c.is_zero())));
    deepest.map_or(0, |k| -(k + 1))
}

/// Gram block between level k of the output and level m of the input.
fn level_block(desc: &AlgebraDescriptor, pairing: Pairing, k: i64, m: i64) -> Vec<Vec<Fe>> {
    let n = desc.n() as usize;
    let top = desc.splitting_field();
    let mut out = vec![vec![Fe::ZERO; n]; n];
    if k + m != -(n as i64) {
        return out;
    }
    for (j, row) in out.iter_mut().enumerate() {
        for (l, slot) in row.iter_mut().enumerate() {
            *slot = match pairing {
                Pairing::ReducedTrace => {
                    desc.trace(top.mul(desc.basis()[j], desc.g_pow(desc.basis()[l], k)))
                }
                Pairing::Dot => {
                    if j == l {
                        Fe::ONE
                    } else {
                        Fe::ZERO
                    }
                }
            };
        }
    }
    out
}

fn gram(desc: &AlgebraDescriptor, pairing: Pairing, out: AlgebraWindow, inp: AlgebraWindow) -> Gram {
    let n = desc.n() as usize;
    let mut g = Gram::zeros(out.levels() * n, inp.levels() * n);
    for k in out.lo..out.hi {
        let m = -(n as i64) - k;
        if m < inp.lo || m >= inp.hi {
            continue;
        }
        let block = level_block(desc, pairing, k, m);
        let (r0, c0) = ((k - out.lo) as usize * n, (m - inp.lo) as usize * n);
        for (j, row) in block.iter().enumerate() {
            g.rows[r0 + j][c0..c0 + n].copy_from_slice(row);
        }
    }
    g
}

impl AlgebraTestFunction {
    pub fn new(desc: &Arc<AlgebraDescriptor>, window: AlgebraWindow, values: Vec<CycScalar>) -> Result<Self> {
        let size = table_len(desc, window)?;
        if values.len() != size {
            return Err(Error::LengthMismatch {
                expected: size,
                got: values.len(),
            });
        }
        Ok(AlgebraTestFunction {
            desc: desc.clone(),
            window,
            values,
        })
    }

    pub fn zero(desc: &Arc<AlgebraDescriptor>, window: AlgebraWindow) -> Result<Self> {
        let p = desc.base().characteristic();
        Self::new(desc, window, vec![CycScalar::zero(p); table_len(desc, window)?])
    }

    pub fn delta(desc: &Arc<AlgebraDescriptor>, window: AlgebraWindow, idx: usize) -> Result<Self> {
        let mut f = Self::zero(desc, window)?;
        let p = desc.base().characteristic();
        *f.values.get_mut(idx).ok_or(Error::Invalid(format!("index {idx} out of range")))? = CycScalar::one(p);
        Ok(f)
    }

    pub fn descriptor(&self) -> &Arc<AlgebraDescriptor> {
        &self.desc
    }

    pub fn window(&self) -> AlgebraWindow {
        self.window
    }

    pub fn values(&self) -> &[CycScalar] {
        &self.values
    }

    /// Value at a jet; points of a larger window are reduced, points outside the support give 0.
    pub fn value_at(&self, x: &AlgebraJet) -> Result<CycScalar> {
        if x.descriptor() != &self.desc {
            return Err(Error::DescriptorMismatch);
        }
        if x.window().hi < self.window.hi {
            return Err(Error::InsufficientDepth(format!("{} for {}", x.window(), self.window)));
        }
        match x.to_window(self.window) {
            Ok(y) => Ok(self.values[y.index()].clone()),
            Err(_) => Ok(CycScalar::zero(self.desc.base().characteristic())),
        }
    }

    pub fn negate_argument(&self) -> Self {
        let values = (0..self.values.len())
            .map(|i| {
                let x = AlgebraJet::from_index(&self.desc, self.window, i);
                self.values[x.neg().index()].clone()
            })
            .collect();
        AlgebraTestFunction {
            desc: self.desc.clone(),
            window: self.window,
            values,
        }
    }

    fn transform_data(&self, pairing: Pairing) -> Result<(AlgebraWindow, Gram, BigRational)> {
        let nu = dual_exponent(&self.desc, pairing);
        if nu % 2 != 0 {
            return Err(Error::OddNu(nu));
        }
        let out = self.window.dual(nu);
        let q = self.desc.base().order() as u64;
        let n = self.desc.n() as i64;
        let scale = rational_power(q, -n * (self.window.hi + nu / 2));
        Ok((out, gram(&self.desc, pairing, out, self.window), scale))
    }

    /// F_D φ(x) = vol(P^hi) Σ_y φ(y) ψ⟨x, y⟩ with vol(S_0)² = [S_0^∨ : S_0]⁻¹.
    pub fn fourier_d(&self, pairing: Pairing) -> Result<Self> {
        let (out, g, scale) = self.transform_data(pairing)?;
        let values = transform::transform(self.desc.base(), &g, &self.values, &scale)?;
        Ok(AlgebraTestFunction {
            desc: self.desc.clone(),
            window: out,
            values,
        })
    }

    /// The same transform by the double sum.
    pub fn fourier_d_direct(&self, pairing: Pairing) -> Result<Self> {
        let (out, g, scale) = self.transform_data(pairing)?;
        let values = transform::transform_direct(self.desc.base(), &g, &self.values, &scale)?;
        Ok(AlgebraTestFunction {
            desc: self.desc.clone(),
            window: out,
            values,
        })
    }

    /// F_D φ at a single point by direct summation.
    pub fn fourier_d_at(&self, pairing: Pairing, x: &AlgebraJet) -> Result<CycScalar> {
        let (out, g, scale) = self.transform_data(pairing)?;
        match x.to_window(out) {
            Ok(y) => Ok(transform::eval_direct(self.desc.base(), &g, &self.values, &y.coords(), &scale)),
            Err(_) => Ok(CycScalar::zero(self.desc.base().characteristic())),
        }
    }

    /// Points x and unit jets u with φ(u x u⁻¹) ≠ φ(x), over `samples` seeded draws.
    pub fn invariance_violations(&self, samples: usize, seed: u64) -> Result<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut bad = 0;
        for _ in 0..samples {
            let u = random_unit(&self.desc, self.window.levels(), &mut rng);
            let i = rng.gen_range(0..self.values.len());
            let x = AlgebraJet::from_index(&self.desc, self.window, i);
            if self.values[x.conjugate_by(&u)?.index()] != self.values[i] {
                bad += 1;
            }
        }
        Ok(bad)
    }

    /// All pairs (x, u) with u a unit of S_0/P^levels.
    pub fn invariance_violations_exhaustive(&self) -> Result<usize> {
        let unit_window = AlgebraWindow::new(0, self.window.levels() as i64)?;
        let units: Vec<AlgebraJet> = (0..table_len(&self.desc, unit_window)?)
            .map(|i| AlgebraJet::from_index(&self.desc, unit_window, i))
            .filter(AlgebraJet::is_unit)
            .collect();
        let mut bad = 0;
        for i in 0..self.values.len() {
            let x = AlgebraJet::from_index(&self.desc, self.window, i);
            for u in &units {
                if self.values[x.conjugate_by(u)?.index()] != self.values[i] {
                    bad += 1;
                }
            }
        }
        Ok(bad)
    }
}

/// Uniform unit of S_0/P^levels.
pub fn random_unit(desc: &Arc<AlgebraDescriptor>, levels: usize, rng: &mut impl Rng) -> AlgebraJet {
    let top = desc.splitting_field();
    let window = AlgebraWindow {
        lo: 0,
        hi: levels as i64,
    };
    let mut coeffs: Vec<Fe> = (0..levels).map(|_| Fe(rng.gen_range(0..top.order()))).collect();
    if let Some(c) = coeffs.first_mut() {
        *c = Fe(rng.gen_range(1..top.order()));
    }
    AlgebraJet::new(desc, window, coeffs).expect("valid coefficients")
}

/// Uniform jet of a window.
pub fn random_jet(desc: &Arc<AlgebraDescriptor>, window: AlgebraWindow, rng: &mut impl Rng) -> AlgebraJet {
    let top = desc.splitting_field();
    let coeffs = (0..window.levels()).map(|_| Fe(rng.gen_range(0..top.order()))).collect();
    AlgebraJet::new(desc, window, coeffs).expect("valid coefficients")
}
