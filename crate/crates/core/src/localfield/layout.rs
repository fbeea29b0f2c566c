//! Dense tables over products of jet windows.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalars::{rational_power, Fe, GaloisField};
use crate::transform::{self, decode, encode, Gram};

use super::{PlaceData, Window};

/// One coordinate block: a single arity component at one place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub place: PlaceData,
    pub window: Window,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.place.jet_dim(self.window)
    }
}

pub fn total_dim(blocks: &[Block]) -> usize {
    blocks.iter().map(Block::dim).sum()
}

pub fn table_len(field: &GaloisField, blocks: &[Block]) -> Result<usize> {
    transform::table_size(field.order(), total_dim(blocks))
}

fn offsets(blocks: &[Block]) -> Vec<usize> {
    let mut off = Vec::with_capacity(blocks.len());
    let mut acc = 0;
    for b in blocks {
        off.push(acc);
        acc += b.dim();
    }
    off
}

/// Re-tabulates onto new windows, block by block. A new point is read at the
/// old point with the same digits; digits below the old window must vanish
/// (else the value is `zero`) and digits at or above the old depth are dropped.
pub fn retabulate<V: Clone + Send + Sync>(
    field: &GaloisField,
    old: &[Block],
    new: &[Block],
    values: &[V],
    zero: &V,
) -> Result<Vec<V>> {
    let n = table_len(field, new)?;
    let old_dim = total_dim(old);
    let new_dim = total_dim(new);
    let old_off = offsets(old);
    let new_off = offsets(new);
    let mut out = Vec::with_capacity(n);
    let mut old_coords = vec![Fe::ZERO; old_dim];
    'points: for idx in 0..n {
        let c = decode(field, idx, new_dim);
        old_coords.iter_mut().for_each(|x| *x = Fe::ZERO);
        for (bi, (ob, nb)) in old.iter().zip(new).enumerate() {
            let d = ob.place.degree() as usize;
            for (r, i) in (nb.window.lo()..nb.window.hi()).enumerate() {
                for j in 0..d {
                    let v = c[new_off[bi] + r * d + j];
                    if i >= ob.window.lo() && i < ob.window.hi() {
                        let or = (i - ob.window.lo()) as usize;
                        old_coords[old_off[bi] + or * d + j] = v;
                    } else if i < ob.window.lo() && !v.is_zero() {
                        out.push(zero.clone());
                        continue 'points;
                    }
                }
            }
        }
        out.push(values[encode(field, &old_coords)].clone());
    }
    Ok(out)
}

/// Checks that a table on `old` is supported in and invariant for the smaller
/// windows `new`, so that restricting loses nothing.
pub fn descends<V: PartialEq + Clone + Send + Sync>(
    field: &GaloisField,
    old: &[Block],
    new: &[Block],
    values: &[V],
    zero: &V,
) -> Result<bool> {
    let down = restrict_unchecked(field, old, new, values)?;
    let back = retabulate(field, new, old, &down, zero)?;
    Ok(back == values)
}

pub fn restrict_unchecked<V: Clone + Send + Sync>(
    field: &GaloisField,
    old: &[Block],
    new: &[Block],
    values: &[V],
) -> Result<Vec<V>> {
    for (o, n) in old.iter().zip(new) {
        if !o.window.dominates(&n.window) {
            return Err(Error::WindowShrink(format!("{} to {}", o.window, n.window)));
        }
    }
    let placeholder = values[0].clone();
    retabulate(field, old, new, values, &placeholder)
}

/// Gram matrix and dual blocks of the product pairing Σ r_{ν_u}(x_u y_u).
pub fn dual_blocks(blocks: &[Block]) -> Result<(Vec<Block>, Gram)> {
    let mut duals = Vec::with_capacity(blocks.len());
    let mut grams = Vec::with_capacity(blocks.len());
    for b in blocks {
        let (w, g) = b.place.gram(b.window)?;
        duals.push(Block {
            place: b.place.clone(),
            window: w,
        });
        grams.push(g);
    }
    Ok((duals, Gram::direct_sum(&grams)))
}

/// Normalization Π q^{d(ν/2 − M)} of the transform on these blocks.
pub fn fourier_scale(q: u32, blocks: &[Block]) -> BigRational {
    let exp: i64 = blocks
        .iter()
        .map(|b| b.place.degree() as i64 * (b.place.nu() / 2 - b.window.depth as i64))
        .sum();
    rational_power(q as u64, exp)
}

/// Table of x ↦ φ(−x).
pub fn negate_argument<V: Clone>(field: &GaloisField, blocks: &[Block], values: &[V]) -> Vec<V> {
    let q = field.order() as usize;
    let neg: Vec<usize> = (0..q).map(|x| field.neg(Fe(x as u32)).0 as usize).collect();
    let dim = total_dim(blocks);
    (0..values.len())
        .map(|mut idx| {
            let mut out = 0;
            let mut place = 1;
            for _ in 0..dim {
                out += neg[idx % q] * place;
                idx /= q;
                place *= q;
            }
            values[out].clone()
        })
        .collect()
}
