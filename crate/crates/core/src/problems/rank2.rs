use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::linalg::{Matrix, Vector};
use crate::problem::{Regularizer, VIProblem};
use crate::problems::OperatorData;
use crate::rng::{make_rng, standard_normal};

pub(super) fn apply(a: &Matrix, b: &Matrix, x: &Vector) -> Vector {
    let t1 = a * x.map(f64::sin);
    let t2 = b * x.map(f64::exp);
    &t1 * t1.dot(x) + &t2 * t2.dot(x)
}

/// Scale of the Gaussian start point. Larger starts make the first unit
/// step overflow `exp`.
pub const START_SCALE: f64 = 1e-4;

/// `F(x) = M(x)x` with `M(x) = t₁t₁ᵀ + t₂t₂ᵀ`, Gaussian `A`, `B`, unconstrained,
/// started from `START_SCALE·𝒩(0, I)`. Not monotone.
pub fn nonmonotone_rank2(n: usize, seed: u64) -> Result<VIProblem> {
    if n == 0 {
        return Err(invalid("rank-2 family needs n >= 1"));
    }
    let mut rng = make_rng(seed);
    let a = Matrix::from_fn(n, n, |_, _| standard_normal(&mut rng));
    let b = Matrix::from_fn(n, n, |_, _| standard_normal(&mut rng));
    let x0 = Vector::from_fn(n, |_, _| START_SCALE * standard_normal(&mut rng));
    let op = OperatorData::Rank2 { a, b };
    Ok(VIProblem::new(format!("rank2-n{n}"), Arc::new(op), Regularizer::Zero, x0)?.with_monotone(false).with_seed(seed))
}
