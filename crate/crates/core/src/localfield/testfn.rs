use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalars::{rational_power, CycScalar};
use crate::transform::{self, Gram};

use super::layout::{self, Block};
use super::{JetVector, PlaceData, Window};

/// Values that a test function table may hold.
pub trait TableValue: Clone + PartialEq + Send + Sync {
    fn zero_like(&self) -> Self;
    fn add_value(&self, other: &Self) -> Self;
    /// Multiplication by q^k.
    fn scale_power(&self, q: u64, k: i64) -> Self;
}

impl TableValue for CycScalar {
    fn zero_like(&self) -> Self {
        CycScalar::zero(self.p())
    }

    fn add_value(&self, other: &Self) -> Self {
        self + other
    }

    fn scale_power(&self, q: u64, k: i64) -> Self {
        self.scale(&rational_power(q, k))
    }
}

/// A function on K^m supported in (t^{-N}O)^m and invariant under (t^M O)^m,
/// stored as a dense table over the jet space.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalTestFunction<V = CycScalar> {
    place: PlaceData,
    arity: usize,
    window: Window,
    values: Vec<V>,
}

impl<V: TableValue> LocalTestFunction<V> {
    pub fn new(place: &PlaceData, arity: usize, window: Window, values: Vec<V>) -> Result<Self> {
        let expected = transform::table_size(place.field().order(), arity * place.jet_dim(window))?;
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: values.len(),
            });
        }
        if values.is_empty() {
            return Err(Error::Invalid("empty table".into()));
        }
        Ok(LocalTestFunction {
            place: place.clone(),
            arity,
            window,
            values,
        })
    }

    pub fn from_fn(
        place: &PlaceData,
        arity: usize,
        window: Window,
        f: impl Fn(&JetVector) -> V,
    ) -> Result<Self> {
        let n = transform::table_size(place.field().order(), arity * place.jet_dim(window))?;
        let values = (0..n)
            .map(|i| f(&JetVector::from_index(place, window, arity, i)))
            .collect();
        Self::new(place, arity, window, values)
    }

    pub fn place(&self) -> &PlaceData {
        &self.place
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn value_at(&self, x: &JetVector) -> &V {
        &self.values[x.index()]
    }

    pub(crate) fn blocks_for(place: &PlaceData, arity: usize, window: Window) -> Vec<Block> {
        vec![
            Block {
                place: place.clone(),
                window,
            };
            arity
        ]
    }

    fn blocks(&self) -> Vec<Block> {
        Self::blocks_for(&self.place, self.arity, self.window)
    }

    fn zero_value(&self) -> V {
        self.values[0].zero_like()
    }

    /// q^{−dMm} · Σ of the table.
    pub fn integrate(&self) -> V {
        let sum = self.values[1..]
            .iter()
            .fold(self.values[0].clone(), |acc, v| acc.add_value(v));
        let k = -(self.place.degree() as i64 * self.window.depth as i64 * self.arity as i64);
        sum.scale_power(self.place.field().order() as u64, k)
    }

    /// Same function on a window that dominates the current one.
    pub fn to_window(&self, w: Window) -> Result<Self> {
        if !w.dominates(&self.window) {
            return Err(Error::WindowShrink(format!("{} to {}", self.window, w)));
        }
        let new = Self::blocks_for(&self.place, self.arity, w);
        let values = layout::retabulate(self.place.field(), &self.blocks(), &new, &self.values, &self.zero_value())?;
        Self::new(&self.place, self.arity, w, values)
    }

    /// Extension by zero to pole depth `n`.
    pub fn extend_zero(&self, n: u32) -> Result<Self> {
        if n < self.window.pole {
            return Err(Error::WindowShrink(format!("pole depth {} to {n}", self.window.pole)));
        }
        self.to_window(Window::new(n, self.window.depth))
    }

    /// Pullback to invariance depth `m`.
    pub fn refine(&self, m: u32) -> Result<Self> {
        if m < self.window.depth {
            return Err(Error::WindowShrink(format!("depth {} to {m}", self.window.depth)));
        }
        self.to_window(Window::new(self.window.pole, m))
    }

    /// Inverse of the level moves: the same function on a smaller window,
    /// provided it is supported and invariant there.
    pub fn restrict(&self, w: Window) -> Result<Self> {
        let old = self.blocks();
        let new = Self::blocks_for(&self.place, self.arity, w);
        let f = self.place.field();
        if !layout::descends(f, &old, &new, &self.values, &self.zero_value())? {
            return Err(Error::Precondition(format!("function does not descend to window {w}")));
        }
        let values = layout::restrict_unchecked(f, &old, &new, &self.values)?;
        Self::new(&self.place, self.arity, w, values)
    }

    /// Equality as functions on K^m, comparing on a common window.
    pub fn equivalent(&self, other: &Self) -> Result<bool> {
        if self.place != other.place || self.arity != other.arity {
            return Ok(false);
        }
        let w = self.window.join(&other.window);
        Ok(self.to_window(w)?.values == other.to_window(w)?.values)
    }

    /// x ↦ φ(−x).
    pub fn negate_argument(&self) -> Self {
        let values = layout::negate_argument(self.place.field(), &self.blocks(), &self.values);
        LocalTestFunction {
            values,
            ..self.clone()
        }
    }

    pub fn map<W: TableValue>(&self, f: impl Fn(&V) -> W) -> LocalTestFunction<W> {
        LocalTestFunction {
            place: self.place.clone(),
            arity: self.arity,
            window: self.window,
            values: self.values.iter().map(f).collect(),
        }
    }
}

impl LocalTestFunction<CycScalar> {
    pub fn zero(place: &PlaceData, arity: usize, window: Window) -> Result<Self> {
        let n = transform::table_size(place.field().order(), arity * place.jet_dim(window))?;
        Self::new(place, arity, window, vec![CycScalar::zero(place.field().characteristic()); n])
    }

    /// Indicator of a single jet.
    pub fn delta(place: &PlaceData, arity: usize, window: Window, idx: usize) -> Result<Self> {
        let mut phi = Self::zero(place, arity, window)?;
        if idx >= phi.values.len() {
            return Err(Error::Invalid(format!("jet index {idx} out of range")));
        }
        phi.values[idx] = CycScalar::one(place.field().characteristic());
        Ok(phi)
    }

    /// Indicator of (t^{-N}O)^m at window (N, M).
    pub fn indicator(place: &PlaceData, arity: usize, window: Window) -> Result<Self> {
        let p = place.field().characteristic();
        Self::from_fn(place, arity, window, |_| CycScalar::one(p))
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        self.map(|v| v * c)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.place != other.place || self.arity != other.arity {
            return Err(Error::Precondition("incompatible test functions".into()));
        }
        let w = self.window.join(&other.window);
        let (a, b) = (self.to_window(w)?, other.to_window(w)?);
        let values = a.values.iter().zip(&b.values).map(|(x, y)| x + y).collect();
        Self::new(&self.place, self.arity, w, values)
    }

    fn transform_with(
        &self,
        run: impl Fn(&Gram, &BigRational) -> Result<Vec<CycScalar>>,
    ) -> Result<Self> {
        let blocks = self.blocks();
        let (duals, gram) = layout::dual_blocks(&blocks)?;
        let scale = layout::fourier_scale(self.place.field().order(), &blocks);
        let values = run(&gram, &scale)?;
        Self::new(&self.place, self.arity, duals[0].window, values)
    }

    /// One-variable transform F(φ)(x) = q^{dν/2} ∫ φ(y) ψ(r_ν(xy)) dy.
    pub fn fourier1(&self) -> Result<Self> {
        if self.arity != 1 {
            return Err(Error::Precondition("fourier1 needs arity 1".into()));
        }
        self.fourier_multi()
    }

    /// Transform in all m variables with pairing Σ r_ν(x_i y_i).
    pub fn fourier_multi(&self) -> Result<Self> {
        let f = self.place.field().clone();
        self.transform_with(|g, s| transform::transform(&f, g, &self.values, s))
    }

    /// The same transform by the direct double sum.
    pub fn fourier_direct(&self) -> Result<Self> {
        let f = self.place.field().clone();
        self.transform_with(|g, s| transform::transform_direct(&f, g, &self.values, s))
    }
}
