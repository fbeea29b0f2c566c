//! Exact Fourier transforms on F_q-vector spaces for a bilinear pairing.
//!
//! Tables are indexed big-endian over F_q coordinates. For an output point x
//! and input point y the character is ψ(Σ x_a G[a][b] y_b), with ψ = ζ_p^{Tr}.
//! The fast path rewrites the pairing over F_p, permutes the input by the
//! resulting matrix and runs a p-ary DFT axis by axis in integer arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalars::{cyc_normalize, CycScalar, Fe, GaloisField};

/// Gram matrix of a pairing, rows indexed by output coordinates.
#[derive(Clone, Debug)]
pub struct Gram {
    pub rows: Vec<Vec<Fe>>,
    pub in_dim: usize,
}

impl Gram {
    pub fn zeros(out_dim: usize, in_dim: usize) -> Self {
        Gram {
            rows: vec![vec![Fe::ZERO; in_dim]; out_dim],
            in_dim,
        }
    }

    pub fn out_dim(&self) -> usize {
        self.rows.len()
    }

    pub fn transpose(&self) -> Gram {
        let mut g = Gram::zeros(self.in_dim, self.out_dim());
        for (a, row) in self.rows.iter().enumerate() {
            for (b, &v) in row.iter().enumerate() {
                g.rows[b][a] = v;
            }
        }
        g
    }

    /// Block-diagonal sum.
    pub fn direct_sum(blocks: &[Gram]) -> Gram {
        let out: usize = blocks.iter().map(Gram::out_dim).sum();
        let inn: usize = blocks.iter().map(|b| b.in_dim).sum();
        let mut g = Gram::zeros(out, inn);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for (r, row) in b.rows.iter().enumerate() {
                g.rows[r0 + r][c0..c0 + b.in_dim].copy_from_slice(row);
            }
            r0 += b.out_dim();
            c0 += b.in_dim;
        }
        g
    }
}

pub(crate) fn decode(field: &GaloisField, mut idx: usize, dim: usize) -> Vec<Fe> {
    let q = field.order() as usize;
    let mut out = vec![Fe::ZERO; dim];
    for c in out.iter_mut().rev() {
        *c = Fe((idx % q) as u32);
        idx /= q;
    }
    out
}

pub(crate) fn encode(field: &GaloisField, coords: &[Fe]) -> usize {
    let q = field.order() as usize;
    coords.iter().fold(0usize, |acc, c| acc * q + c.0 as usize)
}

pub(crate) fn table_size(q: u32, dim: usize) -> Result<usize> {
    (q as usize)
        .checked_pow(dim as u32)
        .filter(|&n| n <= 1 << 26)
        .ok_or(Error::BudgetExceeded {
            needed: (q as u128).saturating_pow(dim as u32),
            cap: 1 << 26,
        })
}

fn pairing_value(field: &GaloisField, w: &[Fe], y: &[Fe]) -> u32 {
    let mut acc = Fe::ZERO;
    for (a, b) in w.iter().zip(y) {
        if !a.is_zero() && !b.is_zero() {
            acc = field.add(acc, field.mul(*a, *b));
        }
    }
    field.absolute_trace(acc)
}

fn row_times(field: &GaloisField, gram: &Gram, x: &[Fe]) -> Vec<Fe> {
    let mut w = vec![Fe::ZERO; gram.in_dim];
    for (a, row) in x.iter().zip(&gram.rows) {
        if a.is_zero() {
            continue;
        }
        for (wb, g) in w.iter_mut().zip(row) {
            *wb = field.add(*wb, field.mul(*a, *g));
        }
    }
    w
}

/// scale · Σ_y φ(y) ψ(⟨x, y⟩) at a single output point, by direct summation.
pub fn eval_direct(
    field: &GaloisField,
    gram: &Gram,
    input: &[CycScalar],
    x: &[Fe],
    scale: &BigRational,
) -> CycScalar {
    let p = field.characteristic();
    let w = row_times(field, gram, x);
    let mut buckets = vec![BigRational::zero(); p as usize];
    let mut any = false;
    for (yi, v) in input.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let y = decode(field, yi, gram.in_dim);
        let k = pairing_value(field, &w, &y) as usize;
        any = true;
        // Accumulate v·ζ^k coefficientwise into the redundant basis.
        for (i, c) in v.coeffs().iter().enumerate() {
            buckets[(i + k) % p as usize] += c;
        }
    }
    if !any {
        return CycScalar::zero(p);
    }
    cyc_normalize(p, &buckets).scale(scale)
}

/// Full transform by the double sum; quadratic cost, used as an oracle.
pub fn transform_direct(
    field: &GaloisField,
    gram: &Gram,
    input: &[CycScalar],
    scale: &BigRational,
) -> Result<Vec<CycScalar>> {
    let n_out = table_size(field.order(), gram.out_dim())?;
    Ok((0..n_out)
        .into_par_iter()
        .map(|xi| {
            let x = decode(field, xi, gram.out_dim());
            eval_direct(field, gram, input, &x, scale)
        })
        .collect())
}

/// Fast exact transform. The pairing must be perfect.
pub fn transform(
    field: &GaloisField,
    gram: &Gram,
    input: &[CycScalar],
    scale: &BigRational,
) -> Result<Vec<CycScalar>> {
    let p = field.characteristic() as usize;
    let e = field.degree() as usize;
    let k_in = gram.in_dim;
    let k_out = gram.out_dim();
    if k_in != k_out {
        return Err(Error::Precondition(format!(
            "pairing between spaces of dimensions {k_out} and {k_in}"
        )));
    }
    let n = table_size(field.order(), k_in)?;
    if input.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: input.len(),
        });
    }
    let digits = e * k_in;
    let pos = |coord: usize, bit: usize, dim: usize| e * (dim - 1 - coord) + bit;
    let basis: Vec<Fe> = (0..e).map(|i| Fe((p as u32).pow(i as u32))).collect();

    // Column of the F_p matrix for each input digit, as output digit vectors.
    let mut cols = vec![vec![0u8; digits]; digits];
    for b in 0..k_in {
        for j in 0..e {
            let col = &mut cols[pos(b, j, k_in)];
            for (a, row) in gram.rows.iter().enumerate() {
                let g = field.mul(row[b], basis[j]);
                if g.is_zero() {
                    continue;
                }
                for (i, &eps) in basis.iter().enumerate() {
                    col[pos(a, i, k_out)] = field.absolute_trace(field.mul(eps, g)) as u8;
                }
            }
        }
    }

    // Permute: T[H y] = φ(y), walking y with an odometer.
    let mut permuted: Vec<usize> = vec![usize::MAX; n];
    let mut ydig = vec![0u8; digits];
    let mut zdig = vec![0u8; digits];
    let mut zidx = 0usize;
    let pow: Vec<usize> = (0..digits).map(|i| p.pow(i as u32)).collect();
    for yi in 0..n {
        if permuted[zidx] != usize::MAX {
            return Err(Error::Precondition("degenerate pairing".into()));
        }
        permuted[zidx] = yi;
        if yi + 1 == n {
            break;
        }
        let mut d = 0;
        loop {
            ydig[d] = ((ydig[d] as usize + 1) % p) as u8;
            for (r, &c) in cols[d].iter().enumerate() {
                if c != 0 {
                    let old = zdig[r] as usize;
                    let new = (old + c as usize) % p;
                    zdig[r] = new as u8;
                    zidx = zidx + new * pow[r] - old * pow[r];
                }
            }
            if ydig[d] != 0 {
                break;
            }
            d += 1;
        }
    }

    // Common denominator and integer numerators.
    let width = if p == 2 { 1 } else { p - 1 };
    let mut den = BigInt::one();
    for v in input {
        for c in v.coeffs() {
            if !c.denom().is_one() && !(&den % c.denom()).is_zero() {
                den = den.lcm(c.denom());
            }
        }
    }
    let slots = if p == 2 { 1 } else { p };
    let mut acc = vec![0i128; n * slots];
    for (z, &yi) in permuted.iter().enumerate() {
        let v = &input[yi];
        for (i, c) in v.coeffs().iter().enumerate().take(width) {
            if c.is_zero() {
                continue;
            }
            let num = if c.denom() == &den {
                c.numer().to_i128()
            } else {
                (c.numer() * (&den / c.denom())).to_i128()
            };
            acc[z * slots + i] = num.ok_or(Error::Overflow)?;
        }
    }

    // Axis-by-axis DFT over F_p.
    let parallel = n >= 1 << 14;
    for axis in 0..digits {
        let stride = pow[axis];
        let block = stride * p;
        let run = |chunk: &mut [i128]| -> Result<()> { dft_axis(chunk, stride, p, slots) };
        let failed = if parallel {
            acc.par_chunks_mut(block * slots).map(run).find_any(|r| r.is_err())
        } else {
            acc.chunks_mut(block * slots).map(run).find(|r| r.is_err())
        };
        if let Some(Err(err)) = failed {
            return Err(err);
        }
    }

    let factor = scale / BigRational::from_integer(den);
    let small = factor.numer().to_i128().zip(factor.denom().to_i128());
    let to_rational = |x: i128| -> BigRational {
        if let Some((a, b)) = small {
            if let Some(num) = x.checked_mul(a) {
                if b == 1 {
                    return BigRational::from_integer(BigInt::from(num));
                }
                let g = num.gcd(&b);
                return BigRational::new_raw(BigInt::from(num / g), BigInt::from(b / g));
            }
        }
        BigRational::from_integer(BigInt::from(x)) * &factor
    };
    let convert = |s: &[i128]| -> Result<CycScalar> {
        if s.iter().all(|&x| x == 0) {
            return Ok(CycScalar::zero(p as u32));
        }
        let top = if p == 2 { 0 } else { s[p - 1] };
        let coeffs = s[..width]
            .iter()
            .map(|&x| x.checked_sub(top).map(to_rational).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycScalar::from_canonical(p as u32, coeffs))
    };
    if parallel {
        acc.par_chunks(slots).map(convert).collect()
    } else {
        acc.chunks(slots).map(convert).collect()
    }
}

/// One p-point DFT along an axis of a chunk holding `p` fibers of `stride`
/// points, each point carrying `slots` coefficients of ζ powers.
fn dft_axis(chunk: &mut [i128], stride: usize, p: usize, slots: usize) -> Result<()> {
    let mut fiber = vec![0i128; p * slots];
    let mut out = vec![0i128; p * slots];
    for off in 0..stride {
        if p == 2 {
            let (a, b) = (chunk[off], chunk[off + stride]);
            chunk[off] = a.checked_add(b).ok_or(Error::Overflow)?;
            chunk[off + stride] = a.checked_sub(b).ok_or(Error::Overflow)?;
            continue;
        }
        for v in 0..p {
            let base = (off + v * stride) * slots;
            fiber[v * slots..(v + 1) * slots].copy_from_slice(&chunk[base..base + slots]);
        }
        out.iter_mut().for_each(|x| *x = 0);
        for u in 0..p {
            for v in 0..p {
                let rot = (u * v) % p;
                for l in 0..p {
                    let val = fiber[v * p + l];
                    if val != 0 {
                        let t = &mut out[u * p + (l + rot) % p];
                        *t = t.checked_add(val).ok_or(Error::Overflow)?;
                    }
                }
            }
        }
        for u in 0..p {
            let base = (off + u * stride) * slots;
            chunk[base..base + slots].copy_from_slice(&out[u * slots..(u + 1) * slots]);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::field_of_order;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_gram(field: &GaloisField, dim: usize, rng: &mut ChaCha8Rng) -> Gram {
        loop {
            let mut g = Gram::zeros(dim, dim);
            for row in g.rows.iter_mut() {
                for c in row.iter_mut() {
                    *c = Fe(rng.gen_range(0..field.order()));
                }
            }
            // Nondegenerate when the fast path accepts it.
            let input = vec![CycScalar::zero(field.characteristic()); field.order().pow(dim as u32) as usize];
            if transform(field, &g, &input, &BigRational::one()).is_ok() {
                return g;
            }
        }
    }

    #[test]
    fn fast_matches_direct() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (q, dim) in [(2u32, 3usize), (3, 2), (4, 2), (5, 2), (9, 1), (2, 5), (3, 3)] {
            let f = field_of_order(q).unwrap();
            let p = f.characteristic();
            let g = random_gram(&f, dim, &mut rng);
            let n = q.pow(dim as u32) as usize;
            let input: Vec<CycScalar> = (0..n)
                .map(|_| {
                    let a = rng.gen_range(-3i64..4);
                    let b = rng.gen_range(1i64..4);
                    CycScalar::from_rational(p, BigRational::new(a.into(), b.into()))
                        .mul_zeta(rng.gen_range(0..p))
                })
                .collect();
            let scale = BigRational::new(1.into(), 3.into());
            let fast = transform(&f, &g, &input, &scale).unwrap();
            let slow = transform_direct(&f, &g, &input, &scale).unwrap();
            assert_eq!(fast, slow, "q={q} dim={dim}");
        }
    }

    #[test]
    fn degenerate_pairing_rejected() {
        let f = field_of_order(2).unwrap();
        let g = Gram::zeros(2, 2);
        let input = vec![CycScalar::zero(2); 4];
        assert!(transform(&f, &g, &input, &BigRational::one()).is_err());
    }

    #[test]
    fn direct_sum_layout() {
        let f = field_of_order(3).unwrap();
        let a = Gram { rows: vec![vec![Fe(1)]], in_dim: 1 };
        let b = Gram { rows: vec![vec![Fe(2)]], in_dim: 1 };
        let g = Gram::direct_sum(&[a, b]);
        assert_eq!(g.rows, vec![vec![Fe(1), Fe(0)], vec![Fe(0), Fe(2)]]);
        assert_eq!(decode(&f, encode(&f, &[Fe(2), Fe(1)]), 2), vec![Fe(2), Fe(1)]);
    }
}
