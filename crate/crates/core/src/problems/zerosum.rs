use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::linalg::{spectral_norm, Matrix, Vector};
use crate::problem::{Regularizer, VIProblem};
use crate::problems::OperatorData;
use crate::prox::{FeasibleSetSpec, SimplexBlock};
use crate::rng::{make_rng, uniform};

pub(super) fn apply(a: &Matrix, z: &Vector) -> Vector {
    let (m, n) = a.shape();
    let x = z.rows(0, m);
    let y = z.rows(m, n);
    let mut out = Vector::zeros(m + n);
    out.rows_mut(0, m).copy_from(&(a * y));
    out.rows_mut(m, n).copy_from(&(-a.tr_mul(&x)));
    out
}

/// The matrix game `min_x max_y xᵀAy` over `Δᵐ × Δⁿ`, started at the uniform strategies.
pub fn zero_sum_from_matrix(a: Matrix) -> Result<VIProblem> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Err(invalid("zero-sum game needs m, n >= 1"));
    }
    let blocks = vec![SimplexBlock { size: m, radius: 1.0 }, SimplexBlock { size: n, radius: 1.0 }];
    let x0 = Vector::from_fn(m + n, |i, _| if i < m { 1.0 / m as f64 } else { 1.0 / n as f64 });
    let l = spectral_norm(&a);
    let op = OperatorData::ZeroSum { a };
    Ok(VIProblem::new(
        format!("zerosum-{m}x{n}"),
        Arc::new(op),
        Regularizer::indicator(FeasibleSetSpec::ProductOfSimplices { blocks }),
        x0,
    )?
    .with_lipschitz(l))
}

/// Payoff entries drawn from `U[0, 1)`.
pub fn zero_sum_game(m: usize, n: usize, seed: u64) -> Result<VIProblem> {
    let mut rng = make_rng(seed);
    let a = Matrix::from_fn(m, n, |_, _| uniform(&mut rng, 0.0, 1.0));
    Ok(zero_sum_from_matrix(a)?.with_seed(seed))
}

/// `max_j (Aᵀx)_j − min_i (Ay)_i` at the stacked point `z = (x, y)`.
pub fn duality_gap(a: &Matrix, z: &Vector) -> f64 {
    let (m, n) = a.shape();
    let x = z.rows(0, m);
    let y = z.rows(m, n);
    a.tr_mul(&x).max() - (a * y).min()
}
