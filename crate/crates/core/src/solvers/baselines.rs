//! Projected gradient, extragradient, projected reflected gradient, GRAAL
//! and adaptive GRAAL.

use crate::analysis::natural_residual;
use crate::error::{invalid, Result, VIError};
use crate::linalg::{golden_anchor, Vector};
use crate::problem::{evaluate_operator, EvalCounter, VIProblem};
use crate::rng::make_rng;
use crate::solvers::golden::GoldenCore;
use crate::solvers::{MethodParams, Solver, Step, StepInfo};

const LIPSCHITZ_PAIRS: usize = 100;

/// Largest `‖F(x) − F(y)‖ / ‖x − y‖` over seeded pairs drawn from
/// `dom g ∩ B(x⁰, 1)`. These evaluations are not counted.
pub fn estimate_lipschitz(problem: &VIProblem, pairs: usize, seed: u64) -> Result<f64> {
    let mut rng = make_rng(seed);
    let mut best: f64 = 0.0;
    for _ in 0..pairs {
        let x = problem.sample_near(&mut rng, &problem.x0, 1.0);
        let y = problem.sample_near(&mut rng, &problem.x0, 1.0);
        let d = (&x - &y).norm();
        if d == 0.0 {
            continue;
        }
        let r = (problem.apply(&x) - problem.apply(&y)).norm() / d;
        if !r.is_finite() {
            return Err(VIError::NonFinite("Lipschitz estimate"));
        }
        best = best.max(r);
    }
    Ok(best.max(1e-12))
}

/// Applies `rule` to the known `L`, or to an estimate and halves the result.
fn fixed_step(problem: &VIProblem, params: &MethodParams, seed: u64, rule: impl Fn(f64) -> f64) -> Result<f64> {
    let lambda = match (params.fixed_step, problem.lipschitz) {
        (Some(s), _) => s,
        (None, Some(l)) => rule(l),
        (None, None) => 0.5 * rule(estimate_lipschitz(problem, LIPSCHITZ_PAIRS, seed)?),
    };
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(invalid(format!("fixed step must be positive and finite, got {lambda}")));
    }
    Ok(lambda)
}

fn cached(f: &Option<Vector>) -> Result<&Vector> {
    f.as_ref().ok_or_else(|| invalid("advance called before observe"))
}

fn accepted(lambda: f64, phi: f64) -> Step {
    Step::Accepted(StepInfo { lambda, phi, flg: 0, window: None })
}

/// `xᵏ⁺¹ = prox(xᵏ − λF(xᵏ))`.
#[derive(Debug, Clone)]
pub struct PgdSolver {
    pub x: Vector,
    pub lambda: f64,
    f: Option<Vector>,
}

impl PgdSolver {
    /// `λ = μ/L²` when `μ` is known, else `0.9/L`.
    pub fn new(problem: &VIProblem, params: &MethodParams, seed: u64) -> Result<Self> {
        let mu = problem.strong_monotonicity;
        let lambda = fixed_step(problem, params, seed, |l| match mu {
            Some(mu) => mu / (l * l),
            None => 0.9 / l,
        })?;
        Ok(Self::with_step(problem.x0.clone(), lambda))
    }

    pub fn with_step(x: Vector, lambda: f64) -> Self {
        Self { x, lambda, f: None }
    }
}

impl Solver for PgdSolver {
    fn observe(&mut self, problem: &VIProblem, counter: &mut EvalCounter) -> Result<f64> {
        let f = evaluate_operator(problem, &self.x, counter)?;
        let j = natural_residual(problem, &self.x, &f, counter);
        self.f = Some(f);
        Ok(j)
    }

    fn advance(&mut self, problem: &VIProblem, counter: &mut EvalCounter) -> Result<Step> {
        let z = &self.x - cached(&self.f)? * self.lambda;
        self.x = problem.prox_counted(&z, self.lambda, counter);
        self.f = None;
        Ok(accepted(self.lambda, f64::INFINITY))
    }

    fn iterate(&self) -> &Vector {
        &self.x
    }

    fn status(&self) -> (f64, f64, u8) {
        (self.lambda, f64::INFINITY, 0)
    }
}

/// `yᵏ = prox(xᵏ − λF(xᵏ))`, `xᵏ⁺¹ = prox(xᵏ − λF(yᵏ))`.
#[derive(Debug, Clone)]
pub struct ExtragradientSolver {
    pub x: Vector,
    pub lambda: f64,
    f: Option<Vector>,
}

impl ExtragradientSolver {
    /// `λ = 0.9/L`.
    pub fn new(problem: &VIProblem, params: &MethodParams, seed: u64) -> Result<Self> {
        Ok(Self::with_step(problem.x0.clone(), fixed_step(problem, params, seed, |l| 0.9 / l)?))
    }

    pub fn with_step(x: Vector, lambda: f64) -> Self {
        Self { x, lambda, f: None }
    }
}

impl Solver for ExtragradientSolver {
    fn observe(&mut self, problem: &VIProblem, counter: &mut EvalCounter) -> Result<f64> {
        let f = evaluate_operator(problem, &self.x, counter)?;
        let j = natural_residual(problem, &self.x, &f, counter);
        self.f = Some(f);
        Ok(j)
    }

    fn advance(&mut self, problem: &VIProblem, counter: &mut EvalCounter) -> Result<Step> {
        let y = problem.prox_counted(&(&self.x - cached(&self.f)? * self.lambda), self.lambda, counter);
        let fy = evaluate_operator(problem, &y, counter)?;
        self.x = problem.prox_counted(&(&self.x - fy * self.lambda), self.lambda, counter);
        self.f = None;
        Ok(accepted(self.lambda, f64::INFINITY))
    }

    fn iterate(&self) -> &Vector {
        &self.x
    }

    fn status(&self) -> (f64, f64, u8) {
        (self.lambda, f64::INFINITY, 0)
    }
}

/// `xᵏ⁺¹ = prox(xᵏ − λF(2xᵏ − xᵏ⁻¹))`.
///
/// The step never evaluates `F(xᵏ)`, so the residual's evaluation is
/// counted in `monitor_evals` rather than `operator_evals`.
#[derive(Debug, Clone)]
pub struct ReflectedSolver {
    pub x: Vector,
    pub x_prev: Vector,
    pub lambda: f64,
}

impl ReflectedSolver {
    /// `λ = 0.9(√2 − 1)/L`.
    pub fn new(problem: &VIProblem, params: &MethodParams, seed: u64) -> Result<Self> {
        let lambda = fixed_step(problem, params, seed, |l| 0.9 * (2f64.sqrt() - 1.0) / l)?;
        Ok(Self::with_step(problem.x0.clone(), problem.x0.clone(), lambda))
    }

    pub fn with_step(x: Vector, x_prev: Vector, lambda: f64) -> Self {
        Self { x, x_prev, lambda }
    }
}

impl Solver for ReflectedSolver {
    fn observe(&mut self, problem: &VIProblem, counter: &mut EvalCounter) -> Result<f64> {
        problem.check_dim(&self.x)?;
        counter.monitor_evals += 1;
        let f = problem.apply(&self.x);
        Ok(natural_residual(problem, &self.x, &f, counter))
    }

    fn advance(&mut self, problem: &VIProblem, counter: &mut EvalCounter) -> Result<Step> {
        let w = &self.x * 2.0 - &self.x_prev;
        let fw = evaluate_operator(problem, &w, counter)?;
        let next = problem.prox_counted(&(&self.x - fw * self.lambda), self.lambda, counter);
        self.x_prev = std::mem::replace(&mut self.x, next);
        Ok(accepted(self.lambda, f64::INFINITY))
    }

    fn iterate(&self) -> &Vector {
        &self.x
    }

    fn status(&self) -> (f64, f64, u8) {
        (self.lambda, f64::INFINITY, 0)
    }
}

/// Fixed-step golden ratio method: `ȳᵏ = (1−β)xᵏ + βȳᵏ⁻¹`, `xᵏ⁺¹ = prox(ȳᵏ − λF(xᵏ))`, `β = 1/φ`.
#[derive(Debug, Clone)]
pub struct GraalSolver {
    pub x: Vector,
    pub y_bar: Vector,
    pub lambda: f64,
    pub phi: f64,
    f: Option<Vector>,
}

impl GraalSolver {
    /// `λ = 0.9/(2βL)`.
    pub fn new(problem: &VIProblem, params: &MethodParams, seed: u64) -> Result<Self> {
        let phi = params.agraal_phi;
        if !(phi > 1.0) {
            return Err(invalid(format!("GRAAL needs phi > 1, got {phi}")));
        }
        let lambda = fixed_step(problem, params, seed, |l| 0.9 * phi / (2.0 * l))?;
        Ok(Self::with_step(problem.x0.clone(), lambda, phi))
    }

    pub fn with_step(x: Vector, lambda: f64, phi: f64) -> Self {
        Self { y_bar: x.clone(), x, lambda, phi, f: None }
    }
}

impl Solver for GraalSolver {
    fn observe(&mut self, problem: &VIProblem, counter: &mut EvalCounter) -> Result<f64> {
        let f = evaluate_operator(problem, &self.x, counter)?;
        let j = natural_residual(problem, &self.x, &f, counter);
        self.f = Some(f);
        Ok(j)
    }

    fn advance(&mut self, problem: &VIProblem, counter: &mut EvalCounter) -> Result<Step> {
        self.y_bar = golden_anchor(&self.x, &self.y_bar, self.phi);
        let z = &self.y_bar - cached(&self.f)? * self.lambda;
        self.x = problem.prox_counted(&z, self.lambda, counter);
        self.f = None;
        Ok(accepted(self.lambda, self.phi))
    }

    fn iterate(&self) -> &Vector {
        &self.x
    }

    fn status(&self) -> (f64, f64, u8) {
        (self.lambda, self.phi, 0)
    }
}

/// Adaptive golden ratio method with a constant anchor ratio `φ`.
#[derive(Debug, Clone)]
pub struct AGraalSolver {
    core: GoldenCore,
    pub phi: f64,
}

impl AGraalSolver {
    pub fn new(problem: &VIProblem, params: &MethodParams) -> Result<Self> {
        let phi = params.agraal_phi;
        Ok(Self { core: GoldenCore::new(problem, phi, params)?, phi })
    }
}

impl Solver for AGraalSolver {
    fn observe(&mut self, problem: &VIProblem, counter: &mut EvalCounter) -> Result<f64> {
        self.core.observe(problem, counter)
    }

    fn advance(&mut self, problem: &VIProblem, counter: &mut EvalCounter) -> Result<Step> {
        if !self.core.started {
            let lambda = self.core.step.lambda;
            self.core.init_pass(problem, counter)?;
            return Ok(accepted(lambda, f64::INFINITY));
        }
        let (lambda_prev, theta_prev) = self.core.update_step(self.phi)?;
        let x_bar = golden_anchor(&self.core.x, &self.core.x_bar_prev, self.phi);
        let x_next = self.core.prox_step(problem, &x_bar, counter)?;
        let window = self.core.window(&x_next, &x_bar, lambda_prev, theta_prev, self.phi, self.phi);
        let lambda = self.core.step.lambda;
        self.core.shift(x_next, x_bar);
        Ok(Step::Accepted(StepInfo { lambda, phi: self.phi, flg: 0, window: Some(window) }))
    }

    fn iterate(&self) -> &Vector {
        &self.core.x
    }

    fn status(&self) -> (f64, f64, u8) {
        (self.core.step.lambda, self.phi, 0)
    }
}
