//! Exponential-sum classes [X,h] over F_q, their specializations, norms over
//! Frobenius orbits and motivic Euler products.

mod class;
mod closed;
mod euler;
mod mpoly;

pub use class::{
    additive_character_sum, class_add, class_mul, enumerate_points, ClassTerm, Comparison, ConstructibleSet,
    MotivicClass, MAX_POINTS,
};
pub use closed::{closed_points, orbit_norm_value, ClosedPoint};
pub use euler::{euler_product, EulerSeries, Recipe};
pub use mpoly::MPoly;
