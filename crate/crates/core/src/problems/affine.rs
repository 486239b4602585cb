use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::linalg::{min_symmetric_eigenvalue, spectral_norm, Matrix, Vector};
use crate::problem::{Regularizer, VIProblem};
use crate::problems::OperatorData;
use crate::prox::FeasibleSetSpec;
use crate::rng::{make_rng, uniform};

/// `F(x) = Mx + q` over `g`, with `L = ‖M‖` and `μ = λ_min(sym M)` filled in.
pub fn affine_problem(m: Matrix, q: Vector, regularizer: Regularizer, x0: Vector) -> Result<VIProblem> {
    let op = OperatorData::Affine { m, q };
    op.validate()?;
    let (l, mu) = match &op {
        OperatorData::Affine { m, .. } => (spectral_norm(m), min_symmetric_eigenvalue(m)),
        _ => unreachable!(),
    };
    let mut p = VIProblem::new("affine", Arc::new(op), regularizer, x0)?
        .with_lipschitz(l)
        .with_monotone(mu >= -1e-12 * l.max(1.0));
    if mu > 0.0 {
        p = p.with_strong_monotonicity(mu);
    }
    Ok(p)
}

/// `M = AAᵀ + B + D` with `A ∼ U(−5,5)`, `B` skew from a `U(−5,5)` upper
/// triangle, `D = diag(U(0,0.3))`, `q ∼ U(−500,0)`, over the simplex of
/// radius `n`, started at the all-ones point.
pub fn strongly_monotone_affine(n: usize, seed: u64) -> Result<VIProblem> {
    if n == 0 {
        return Err(invalid("affine family needs n >= 1"));
    }
    let mut rng = make_rng(seed);
    let a = Matrix::from_fn(n, n, |_, _| uniform(&mut rng, -5.0, 5.0));
    let mut b = Matrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = uniform(&mut rng, -5.0, 5.0);
            b[(i, j)] = v;
            b[(j, i)] = -v;
        }
    }
    let d = Vector::from_fn(n, |_, _| uniform(&mut rng, 0.0, 0.3));
    let q = Vector::from_fn(n, |_, _| uniform(&mut rng, -500.0, 0.0));
    let m = &a * a.transpose() + b + Matrix::from_diagonal(&d);
    let set = FeasibleSetSpec::Simplex { radius: n as f64 };
    let mut p = affine_problem(m, q, Regularizer::indicator(set), Vector::from_element(n, 1.0))?;
    p.name = format!("affine-n{n}");
    Ok(p.with_seed(seed))
}
