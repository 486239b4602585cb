//! The variational inequality `find x*: ⟨F(x*), x − x*⟩ + g(x) − g(x*) ≥ 0`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, VIError};
use crate::linalg::{dist_sq, Vector};
use crate::problems::OperatorData;
use crate::prox::{prox_l1, FeasibleSetSpec};
use crate::rng::{standard_normal, uniform, SolverRng};

/// A single-valued operator `F: ℝⁿ → ℝⁿ`.
pub trait Operator: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;
    fn apply(&self, x: &Vector) -> Vector;

    /// The serializable description, when the operator has one.
    fn data(&self) -> Option<&OperatorData> {
        None
    }
}

/// Wraps a closure as an [`Operator`].
pub struct FnOperator<F> {
    dim: usize,
    f: F,
}

impl<F> FnOperator<F>
where
    F: Fn(&Vector) -> Vector + Send + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F> fmt::Debug for FnOperator<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnOperator").field("dim", &self.dim).finish()
    }
}

impl<F> Operator for FnOperator<F>
where
    F: Fn(&Vector) -> Vector + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &Vector) -> Vector {
        (self.f)(x)
    }
}

/// The convex term `g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Regularizer {
    Zero,
    L1 { weight: f64 },
    Indicator { set: FeasibleSetSpec },
}

impl Regularizer {
    pub fn indicator(set: FeasibleSetSpec) -> Self {
        Regularizer::Indicator { set }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        match self {
            Regularizer::Zero => Ok(()),
            Regularizer::L1 { weight } if *weight >= 0.0 && weight.is_finite() => Ok(()),
            Regularizer::L1 { weight } => Err(invalid(format!("l1 weight must be nonnegative, got {weight}"))),
            Regularizer::Indicator { set } => set.validate(dim),
        }
    }

    /// `prox_{λg}(z)`.
    pub fn prox(&self, z: &Vector, lambda: f64) -> Vector {
        match self {
            Regularizer::Zero => z.clone(),
            Regularizer::L1 { weight } => prox_l1(z, lambda * weight),
            Regularizer::Indicator { set } => set.project(z),
        }
    }

    /// `g(x)`; points outside an indicator's set are a domain error.
    pub fn value(&self, x: &Vector) -> Result<f64> {
        match self {
            Regularizer::Zero => Ok(0.0),
            Regularizer::L1 { weight } => Ok(weight * x.lp_norm(1)),
            Regularizer::Indicator { set } => {
                if set.contains(x, domain_tol(x)) {
                    Ok(0.0)
                } else {
                    Err(VIError::Domain(format!("{set:?}")))
                }
            }
        }
    }

    /// Projection onto `dom g`.
    pub fn project_domain(&self, x: &Vector) -> Vector {
        match self {
            Regularizer::Indicator { set } => set.project(x),
            _ => x.clone(),
        }
    }

    pub fn in_domain(&self, x: &Vector) -> bool {
        match self {
            Regularizer::Indicator { set } => set.contains(x, domain_tol(x)),
            _ => x.iter().all(|v| v.is_finite()),
        }
    }
}

fn domain_tol(x: &Vector) -> f64 {
    1e-9 * (1.0 + x.amax())
}

/// Operator, prox and prox evaluation counts. Monitoring evaluations that a
/// method needs only to report its residual are kept apart in `monitor_evals`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalCounter {
    pub operator_evals: u64,
    pub prox_evals: u64,
    pub monitor_evals: u64,
}

/// An immutable VI instance plus provenance metadata.
#[derive(Debug, Clone)]
pub struct VIProblem {
    pub name: String,
    pub seed: u64,
    pub scenario: Option<String>,
    operator: Arc<dyn Operator>,
    pub regularizer: Regularizer,
    pub x0: Vector,
    pub lipschitz: Option<f64>,
    pub strong_monotonicity: Option<f64>,
    pub monotone: bool,
    /// A known solution, when the generator can supply one.
    pub reference: Option<Vector>,
}

impl VIProblem {
    pub fn new(
        name: impl Into<String>,
        operator: Arc<dyn Operator>,
        regularizer: Regularizer,
        x0: Vector,
    ) -> Result<Self> {
        let dim = operator.dim();
        if dim == 0 {
            return Err(invalid("problem dimension must be positive"));
        }
        if x0.len() != dim {
            return Err(VIError::DimensionMismatch { expected: dim, got: x0.len() });
        }
        regularizer.validate(dim)?;
        Ok(Self {
            name: name.into(),
            seed: 0,
            scenario: None,
            operator,
            regularizer,
            x0,
            lipschitz: None,
            strong_monotonicity: None,
            monotone: true,
            reference: None,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_scenario(mut self, scenario: impl Into<String>) -> Self {
        self.scenario = Some(scenario.into());
        self
    }

    pub fn with_lipschitz(mut self, l: f64) -> Self {
        self.lipschitz = Some(l);
        self
    }

    pub fn with_strong_monotonicity(mut self, mu: f64) -> Self {
        self.strong_monotonicity = Some(mu);
        self
    }

    pub fn with_monotone(mut self, monotone: bool) -> Self {
        self.monotone = monotone;
        self
    }

    pub fn with_reference(mut self, reference: Vector) -> Result<Self> {
        self.check_dim(&reference)?;
        self.reference = Some(reference);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.operator.dim()
    }

    pub fn operator(&self) -> &dyn Operator {
        self.operator.as_ref()
    }

    pub fn check_dim(&self, x: &Vector) -> Result<()> {
        if x.len() == self.dim() {
            Ok(())
        } else {
            Err(VIError::DimensionMismatch { expected: self.dim(), got: x.len() })
        }
    }

    /// `F(x)` without touching any counter.
    pub fn apply(&self, x: &Vector) -> Vector {
        self.operator.apply(x)
    }

    /// `prox_{λg}(z)` without touching any counter.
    pub fn prox(&self, z: &Vector, lambda: f64) -> Vector {
        self.regularizer.prox(z, lambda)
    }

    pub fn g(&self, x: &Vector) -> Result<f64> {
        self.regularizer.value(x)
    }

    pub fn prox_counted(&self, z: &Vector, lambda: f64, counter: &mut EvalCounter) -> Vector {
        counter.prox_evals += 1;
        self.prox(z, lambda)
    }

    /// Samples a point of `dom g ∩ B(center, radius)` candidate: uniform in
    /// the ball, then projected onto `dom g`. The caller decides whether to
    /// keep it.
    pub fn sample_near(&self, rng: &mut SolverRng, center: &Vector, radius: f64) -> Vector {
        let n = center.len();
        let dir = Vector::from_fn(n, |_, _| standard_normal(rng));
        let norm = dir.norm();
        let r = radius * uniform(rng, 0.0, 1.0).powf(1.0 / n as f64);
        let z = if norm > 0.0 { center + dir * (r / norm) } else { center.clone() };
        self.regularizer.project_domain(&z)
    }
}

/// `F(x)`, counting one operator evaluation.
pub fn evaluate_operator(problem: &VIProblem, x: &Vector, counter: &mut EvalCounter) -> Result<Vector> {
    problem.check_dim(x)?;
    counter.operator_evals += 1;
    Ok(problem.apply(x))
}

/// Smallest `⟨F(x) − F(y), x − y⟩ / ‖x − y‖²` over `pairs` sampled pairs
/// around `x0`. Negative values mean the sample found non-monotone behaviour.
pub fn sampled_monotonicity(problem: &VIProblem, pairs: usize, scale: f64, rng: &mut SolverRng) -> f64 {
    let mut worst = f64::INFINITY;
    for _ in 0..pairs {
        let x = problem.sample_near(rng, &problem.x0, scale);
        let y = problem.sample_near(rng, &problem.x0, scale);
        let d = dist_sq(&x, &y);
        if d == 0.0 {
            continue;
        }
        let ratio = (problem.apply(&x) - problem.apply(&y)).dot(&(&x - &y)) / d;
        worst = worst.min(ratio);
    }
    worst
}

/// Reproducibility snapshot of a generated problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSnapshot {
    pub family: String,
    pub name: String,
    pub seed: u64,
    pub scenario: Option<String>,
    pub regularizer: Regularizer,
    pub lipschitz: Option<f64>,
    pub strong_monotonicity: Option<f64>,
    pub monotone: bool,
    #[serde(with = "crate::serde_linalg::vector")]
    pub x0: Vector,
    #[serde(with = "crate::serde_linalg::opt_vector", default)]
    pub reference: Option<Vector>,
    pub operator: OperatorData,
}

impl VIProblem {
    /// Fails for operators without a serializable description.
    pub fn snapshot(&self) -> Result<ProblemSnapshot> {
        let data = self.operator.data().ok_or_else(|| invalid("operator has no serializable description"))?;
        Ok(ProblemSnapshot {
            family: data.family().to_string(),
            name: self.name.clone(),
            seed: self.seed,
            scenario: self.scenario.clone(),
            regularizer: self.regularizer.clone(),
            lipschitz: self.lipschitz,
            strong_monotonicity: self.strong_monotonicity,
            monotone: self.monotone,
            x0: self.x0.clone(),
            reference: self.reference.clone(),
            operator: data.clone(),
        })
    }

    pub fn from_snapshot(s: ProblemSnapshot) -> Result<Self> {
        s.operator.validate()?;
        let mut p = VIProblem::new(s.name, Arc::new(s.operator), s.regularizer, s.x0)?;
        p.seed = s.seed;
        p.scenario = s.scenario;
        p.lipschitz = s.lipschitz;
        p.strong_monotonicity = s.strong_monotonicity;
        p.monotone = s.monotone;
        if let Some(r) = s.reference {
            p = p.with_reference(r)?;
        }
        Ok(p)
    }
}
