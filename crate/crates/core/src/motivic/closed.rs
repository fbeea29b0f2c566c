use crate::error::{Error, Result};
use crate::scalars::{extension, psi, CycScalar, Fe};

use super::class::{enumerate_points, ConstructibleSet};
use super::mpoly::MPoly;

/// A Frobenius orbit of X(F_{q^degree}) represented by one member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedPoint {
    set: ConstructibleSet,
    degree: u32,
    point: Vec<Fe>,
}

impl ClosedPoint {
    /// Checks that `point` lies on X over F_{q^degree}; orbit size is checked on use.
    pub fn new(set: &ConstructibleSet, degree: u32, point: Vec<Fe>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidDegree(0));
        }
        if point.len() != set.nvars() {
            return Err(Error::LengthMismatch {
                expected: set.nvars(),
                got: point.len(),
            });
        }
        let top = extension(set.field(), degree)?.top().clone();
        if point.iter().any(|c| c.0 >= top.order()) {
            return Err(Error::FieldMismatch);
        }
        if !set.contains(degree, &point)? {
            return Err(Error::Invalid("point is not on the set".into()));
        }
        Ok(ClosedPoint {
            set: set.clone(),
            degree,
            point,
        })
    }

    pub fn set(&self) -> &ConstructibleSet {
        &self.set
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn point(&self) -> &[Fe] {
        &self.point
    }

    /// The representative moved by the k-th power of Frobenius.
    pub fn conjugate(&self, k: u32) -> ClosedPoint {
        let ext = extension(self.set.field(), self.degree).expect("built in new");
        ClosedPoint {
            set: self.set.clone(),
            degree: self.degree,
            point: self.point.iter().map(|&x| ext.frobenius(x, k)).collect(),
        }
    }

    /// Distinct Frobenius images of the representative, in orbit order.
    pub fn orbit(&self) -> Vec<Vec<Fe>> {
        orbit_of(&self.set, self.degree, &self.point)
    }
}

fn orbit_of(set: &ConstructibleSet, degree: u32, x: &[Fe]) -> Vec<Vec<Fe>> {
    let ext = extension(set.field(), degree).expect("valid degree");
    let mut out = vec![x.to_vec()];
    loop {
        let next: Vec<Fe> = out.last().unwrap().iter().map(|&c| ext.frobenius(c, 1)).collect();
        if next == out[0] {
            return out;
        }
        out.push(next);
    }
}

/// ψ(Tr h(x₀)) with the trace from F_{q^n} down to F_p.
pub fn orbit_norm_value(point: &ClosedPoint, h: &MPoly) -> Result<CycScalar> {
    if h.field() != point.set.field() || h.nvars() != point.set.nvars() {
        return Err(Error::FieldMismatch);
    }
    let size = point.orbit().len() as u32;
    if size != point.degree {
        return Err(Error::DegenerateOrbit {
            size,
            degree: point.degree,
        });
    }
    let ext = extension(point.set.field(), point.degree)?;
    Ok(psi(ext.top(), h.eval_in(&ext, &point.point)))
}

/// One closed point per Frobenius orbit of degree ≤ max_degree, by degree then representative.
pub fn closed_points(set: &ConstructibleSet, max_degree: u32) -> Result<Vec<ClosedPoint>> {
    let mut out = Vec::new();
    for d in 1..=max_degree {
        for x in enumerate_points(set, d)? {
            let orbit = orbit_of(set, d, &x);
            if orbit.len() as u32 == d && orbit.iter().all(|y| *y >= x) {
                out.push(ClosedPoint {
                    set: set.clone(),
                    degree: d,
                    point: x,
                });
            }
        }
    }
    Ok(out)
}
