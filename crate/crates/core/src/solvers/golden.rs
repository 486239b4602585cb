//! State shared by the adaptive golden-ratio methods.

use crate::analysis::{natural_residual, DescentWindow};
use crate::error::{invalid, Result};
use crate::linalg::{dist_sq, golden_anchor, Vector};
use crate::problem::{evaluate_operator, EvalCounter, VIProblem};
use crate::solvers::MethodParams;
use crate::stepsize::StepSizeState;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct GoldenCore {
    pub x_prev: Vector,
    pub x: Vector,
    /// `x̄ᵏ⁻¹`.
    pub x_bar_prev: Vector,
    pub f_prev: Vector,
    /// `F(xᵏ)`, present between `observe` and `advance`.
    pub f: Option<Vector>,
    pub step: StepSizeState,
    pub started: bool,
}

impl GoldenCore {
    pub fn new(problem: &VIProblem, phi: f64, params: &MethodParams) -> Result<Self> {
        let step = StepSizeState::new(phi, params.lambda0, params.lambda_bar)?;
        let x0 = problem.x0.clone();
        Ok(Self {
            x_prev: x0.clone(),
            x_bar_prev: x0.clone(),
            f_prev: Vector::zeros(x0.len()),
            x: x0,
            f: None,
            step,
            started: false,
        })
    }

    pub fn observe(&mut self, problem: &VIProblem, counter: &mut EvalCounter) -> Result<f64> {
        let f = evaluate_operator(problem, &self.x, counter)?;
        let j = natural_residual(problem, &self.x, &f, counter);
        self.f = Some(f);
        Ok(j)
    }

    pub fn f(&self) -> Result<&Vector> {
        self.f.as_ref().ok_or_else(|| invalid("advance called before observe"))
    }

    /// `x¹ = prox(x⁰ − λ₀F(x⁰), λ₀)` with `x̄⁰ = x⁰`.
    pub fn init_pass(&mut self, problem: &VIProblem, counter: &mut EvalCounter) -> Result<()> {
        let x_next = self.prox_step(problem, &self.x.clone(), counter)?;
        let x_bar = self.x.clone();
        self.shift(x_next, x_bar);
        self.started = true;
        Ok(())
    }

    /// Step-size update; returns the previous `(λ, θ)`.
    pub fn update_step(&mut self, phi: f64) -> Result<(f64, f64)> {
        let before = (self.step.lambda, self.step.theta);
        let f = self.f()?;
        let dx = dist_sq(&self.x, &self.x_prev);
        let df = dist_sq(f, &self.f_prev);
        self.step.update(phi, dx, df)?;
        Ok(before)
    }

    /// `prox_{λg}(x̄ − λF(xᵏ))` with the current `λ`.
    pub fn prox_step(&self, problem: &VIProblem, x_bar: &Vector, counter: &mut EvalCounter) -> Result<Vector> {
        let lambda = self.step.lambda;
        let z = x_bar - self.f()? * lambda;
        Ok(problem.prox_counted(&z, lambda, counter))
    }

    pub fn shift(&mut self, x_next: Vector, x_bar: Vector) {
        self.x_prev = std::mem::replace(&mut self.x, x_next);
        self.x_bar_prev = x_bar;
        if let Some(f) = self.f.take() {
            self.f_prev = f;
        }
    }

    /// Window for the step `xᵏ → x_next` taken from anchor `x_bar` with ratio `phi`.
    #[allow(clippy::too_many_arguments)]
    pub fn window(
        &self,
        x_next: &Vector,
        x_bar: &Vector,
        lambda_prev: f64,
        theta_prev: f64,
        phi: f64,
        phi_next: f64,
    ) -> DescentWindow {
        DescentWindow {
            x_prev: self.x_prev.clone(),
            x: self.x.clone(),
            x_next: x_next.clone(),
            x_bar_prev: self.x_bar_prev.clone(),
            x_bar: x_bar.clone(),
            x_bar_next: golden_anchor(x_next, x_bar, phi_next),
            lambda_prev,
            lambda: self.step.lambda,
            theta_prev,
            theta: self.step.theta,
            phi,
            phi_next,
        }
    }
}
