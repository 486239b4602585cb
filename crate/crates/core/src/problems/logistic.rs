use std::sync::Arc;

use rand::Rng;

use crate::error::{invalid, Result};
use crate::linalg::{spectral_norm, Matrix, Vector};
use crate::problem::{Regularizer, VIProblem};
use crate::problems::OperatorData;
use crate::rng::{make_rng, standard_normal};

fn sigmoid(t: f64) -> f64 {
    1.0 / (1.0 + (-t).exp())
}

fn softplus(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

pub(super) fn apply(d: &Matrix, x: &Vector) -> Vector {
    let s = (d * x).map(sigmoid);
    d.tr_mul(&s)
}

/// `s(x) = Σᵢ log(1 + exp((Dx)ᵢ))`, whose gradient is the operator.
pub fn logistic_loss(d: &Matrix, x: &Vector) -> f64 {
    (d * x).iter().map(|t| softplus(*t)).sum()
}

/// `m` Gaussian points `aᵢ ∈ ℝⁿ` with labels `bᵢ = ±1`; `D_ij = −bᵢa_ij`,
/// `g = γ‖·‖₁` with `γ = 0.005‖Σᵢ bᵢaᵢ‖_∞`, started at the origin.
pub fn sparse_logistic(n: usize, m: usize, seed: u64) -> Result<VIProblem> {
    if n == 0 || m == 0 {
        return Err(invalid("sparse logistic needs n, m >= 1"));
    }
    let mut rng = make_rng(seed);
    let a = Matrix::from_fn(m, n, |_, _| standard_normal(&mut rng));
    let b: Vec<f64> = (0..m).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
    let d = Matrix::from_fn(m, n, |i, j| -b[i] * a[(i, j)]);
    let weighted = a.tr_mul(&Vector::from_vec(b));
    let gamma = 0.005 * weighted.amax();
    let l = spectral_norm(&d).powi(2) / 4.0;
    let op = OperatorData::Logistic { d };
    Ok(VIProblem::new(
        format!("logistic-n{n}-m{m}"),
        Arc::new(op),
        Regularizer::L1 { weight: gamma },
        Vector::zeros(n),
    )?
    .with_lipschitz(l)
    .with_seed(seed))
}
