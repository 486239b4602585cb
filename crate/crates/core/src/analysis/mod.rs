//! Merit functions, residuals and ergodic-rate monitoring.

pub mod certificate;

pub use certificate::{
    check_descent_inequality, default_radius, descent_sides, probe_set, CertificateMonitor, CertificateReport,
    DescentSides, DescentWindow, IterationSlack, Probe,
};

use serde::Serialize;

use crate::error::{invalid, Result, VIError};
use crate::linalg::Vector;
use crate::problem::{evaluate_operator, EvalCounter, VIProblem};
use crate::rng::SolverRng;
use crate::solvers::RunObserver;
use crate::trace::TraceRow;

/// `‖x − prox_g(x − F(x))‖`, counting one operator and one prox evaluation.
pub fn residual(problem: &VIProblem, x: &Vector, counter: &mut EvalCounter) -> Result<f64> {
    let fx = evaluate_operator(problem, x, counter)?;
    Ok(natural_residual(problem, x, &fx, counter))
}

/// Residual from an already evaluated `F(x)`; counts the prox only.
pub fn natural_residual(problem: &VIProblem, x: &Vector, fx: &Vector, counter: &mut EvalCounter) -> f64 {
    let p = problem.prox_counted(&(x - fx), 1.0, counter);
    (x - p).norm()
}

/// `Ψ(x, y) = ⟨F(x), y − x⟩ + g(y) − g(x)`.
pub fn merit_psi(problem: &VIProblem, x: &Vector, y: &Vector) -> Result<f64> {
    problem.check_dim(x)?;
    problem.check_dim(y)?;
    Ok(problem.apply(x).dot(&(y - x)) + problem.g(y)? - problem.g(x)?)
}

/// Running `Σλᵢxⁱ` and `Σλᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErgodicAccumulator {
    pub weighted_sum: Vector,
    pub weight_total: f64,
}

impl ErgodicAccumulator {
    pub fn new(dim: usize) -> Self {
        Self { weighted_sum: Vector::zeros(dim), weight_total: 0.0 }
    }

    pub fn update(&mut self, x: &Vector, lambda: f64) -> Result<()> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(invalid(format!("ergodic weight must be positive, got {lambda}")));
        }
        if x.len() != self.weighted_sum.len() {
            return Err(VIError::DimensionMismatch { expected: self.weighted_sum.len(), got: x.len() });
        }
        self.weighted_sum.axpy(lambda, x, 1.0);
        self.weight_total += lambda;
        Ok(())
    }

    /// `None` before the first update.
    pub fn point(&self) -> Option<Vector> {
        (self.weight_total > 0.0).then(|| &self.weighted_sum / self.weight_total)
    }
}

/// Functional form of [`ErgodicAccumulator::update`].
pub fn ergodic_update(acc: &ErgodicAccumulator, x: &Vector, lambda: f64) -> Result<ErgodicAccumulator> {
    let mut next = acc.clone();
    next.update(x, lambda)?;
    Ok(next)
}

/// A fixed sample of `𝒰 = dom g ∩ B(center, radius)` with `F` and `g`
/// cached, used to bound `e_r(y) = max_{x∈𝒰} Ψ(x, y)` from below.
///
/// Samples are drawn sequentially from `rng`, so with equal seeds a larger
/// sample contains the smaller one.
#[derive(Debug, Clone)]
pub struct MeritSample {
    points: Vec<Probe>,
}

impl MeritSample {
    pub fn draw(
        problem: &VIProblem,
        center: &Vector,
        radius: f64,
        n_samples: usize,
        rng: &mut SolverRng,
    ) -> Result<Self> {
        problem.check_dim(center)?;
        if !(radius > 0.0) {
            return Err(invalid(format!("radius must be positive, got {radius}")));
        }
        if !problem.regularizer.in_domain(center) {
            return Err(VIError::Domain("center must lie in dom g".into()));
        }
        let mut points = Vec::with_capacity(n_samples);
        for _ in 0..n_samples {
            let x = problem.sample_near(rng, center, radius);
            if (&x - center).norm() <= radius * (1.0 + 1e-12) {
                points.push(Probe::new(problem, x)?);
            }
        }
        if points.is_empty() {
            return Err(VIError::Sampling);
        }
        Ok(Self { points })
    }

    pub fn from_points(problem: &VIProblem, points: Vec<Vector>) -> Result<Self> {
        if points.is_empty() {
            return Err(VIError::Sampling);
        }
        let points = points.into_iter().map(|x| Probe::new(problem, x)).collect::<Result<_>>()?;
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `max_j Ψ(x_j, y)` over the sample, unclamped.
    pub fn max_psi(&self, problem: &VIProblem, y: &Vector) -> Result<f64> {
        let gy = problem.g(y)?;
        Ok(self.points.iter().map(|p| p.f.dot(&(y - &p.x)) + gy - p.g).fold(f64::NEG_INFINITY, f64::max))
    }
}

/// Sampled lower bound on `e_r(y)`, reported as `max(·, 0)`.
pub fn estimate_e_r(
    problem: &VIProblem,
    y: &Vector,
    center: &Vector,
    radius: f64,
    n_samples: usize,
    rng: &mut SolverRng,
) -> Result<f64> {
    let sample = MeritSample::draw(problem, center, radius, n_samples, rng)?;
    Ok(sample.max_psi(problem, y)?.max(0.0))
}

/// Collects `(xᵏ, λₖ)` for `k ≥ 1` from a run.
#[derive(Debug, Clone, Default)]
pub struct IterateRecorder {
    pub iterates: Vec<(u64, Vector, f64)>,
}

impl RunObserver for IterateRecorder {
    fn on_row(&mut self, row: &TraceRow, x: &Vector, _window: Option<&DescentWindow>) {
        self.iterates.push((row.iter, x.clone(), row.lambda));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErgodicPoint {
    pub k: u64,
    pub e_r: f64,
    pub weight_total: f64,
    /// `e_r(X_k)·Σλᵢ`, bounded along admissible runs.
    pub product: f64,
}

/// `e_r(X_k)·Σ_{i≤k}λᵢ` along the ergodic sequence `X_k = Σλᵢxⁱ / Σλᵢ`, `i ≥ 1`.
pub fn ergodic_rate_audit(
    problem: &VIProblem,
    iterates: &[(u64, Vector, f64)],
    sample: &MeritSample,
) -> Result<Vec<ErgodicPoint>> {
    let mut acc = ErgodicAccumulator::new(problem.dim());
    let mut out = Vec::new();
    for (k, x, lambda) in iterates.iter().filter(|(k, _, _)| *k >= 1) {
        acc.update(x, *lambda)?;
        let point = acc.point().expect("updated at least once");
        let e_r = sample.max_psi(problem, &point)?.max(0.0);
        out.push(ErgodicPoint { k: *k, e_r, weight_total: acc.weight_total, product: e_r * acc.weight_total });
    }
    Ok(out)
}
