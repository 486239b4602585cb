//! Sum-switching golden-ratio method.
//!
//! Runs with the large ratio `φ̄` (little momentum) while the running sums of
//! the descent terms stay non-positive, and falls back to the small ratio `α`
//! otherwise. Leaving the `φ̄` regime discards the pass that broke the test.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{golden_anchor, Vector};
use crate::problem::{EvalCounter, VIProblem};
use crate::solvers::golden::GoldenCore;
use crate::solvers::terms::{sum_term_12, sum_term_13, SumWindow};
use crate::solvers::{MethodParams, Solver, Step, StepInfo, GOLDEN_RATIO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SwitchPolicy {
    #[default]
    Adaptive,
    /// Always continue with `φₖ₊₁ = α` and never roll back.
    ForceMomentum,
}

#[derive(Debug, Clone)]
pub struct Alg2Solver {
    core: GoldenCore,
    alpha: f64,
    phi_bar: f64,
    policy: SwitchPolicy,
    phi: f64,
    sum1: f64,
    sum2: f64,
    flg: u8,
}

impl Alg2Solver {
    pub fn new(problem: &VIProblem, params: &MethodParams) -> Result<Self> {
        let (alpha, phi_bar) = (params.alpha, params.phi_bar);
        if !(alpha > 1.0 && alpha <= GOLDEN_RATIO + 1e-12) {
            return Err(invalid(format!("alpha must lie in (1, golden ratio], got {alpha}")));
        }
        if !(phi_bar >= alpha) || !phi_bar.is_finite() {
            return Err(invalid(format!("phi_bar must be finite and at least alpha, got {phi_bar}")));
        }
        let phi = match params.alg2_policy {
            SwitchPolicy::Adaptive => phi_bar,
            SwitchPolicy::ForceMomentum => alpha,
        };
        Ok(Self {
            core: GoldenCore::new(problem, alpha, params)?,
            alpha,
            phi_bar,
            policy: params.alg2_policy,
            phi,
            sum1: 0.0,
            sum2: 0.0,
            flg: 1,
        })
    }

    /// `φₖ` of the next pass.
    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn flg(&self) -> u8 {
        self.flg
    }

    pub fn sums(&self) -> (f64, f64) {
        (self.sum1, self.sum2)
    }

    pub fn lambda(&self) -> f64 {
        self.core.step.lambda
    }

    pub fn theta(&self) -> f64 {
        self.core.step.theta
    }

    /// `(xᵏ, xᵏ⁻¹, x̄ᵏ⁻¹)`.
    pub fn points(&self) -> (&Vector, &Vector, &Vector) {
        (&self.core.x, &self.core.x_prev, &self.core.x_bar_prev)
    }
}

impl Solver for Alg2Solver {
    fn observe(&mut self, problem: &VIProblem, counter: &mut EvalCounter) -> Result<f64> {
        self.core.observe(problem, counter)
    }

    fn advance(&mut self, problem: &VIProblem, counter: &mut EvalCounter) -> Result<Step> {
        if !self.core.started {
            let lambda = self.core.step.lambda;
            self.core.init_pass(problem, counter)?;
            return Ok(Step::Accepted(StepInfo { lambda, phi: f64::INFINITY, flg: self.flg, window: None }));
        }
        let snapshot = self.core.clone();
        let phi = self.phi;
        let (lambda_prev, theta_prev) = self.core.update_step(self.alpha)?;
        let (lambda, theta) = (self.core.step.lambda, self.core.step.theta);
        let x_bar = golden_anchor(&self.core.x, &self.core.x_bar_prev, phi);
        let x_next = self.core.prox_step(problem, &x_bar, counter)?;
        let w = SumWindow { x_prev: &self.core.x_prev, x: &self.core.x, x_next: &x_next, x_bar: &x_bar };
        let term13 = |phi_next: f64| sum_term_13(w, phi, phi_next, lambda, lambda_prev, theta);

        let phi_next = match self.policy {
            SwitchPolicy::ForceMomentum => self.alpha,
            SwitchPolicy::Adaptive => {
                let s1 = self.sum1 + sum_term_12(w, phi, self.phi_bar, lambda, lambda_prev, theta, theta_prev);
                let s2 = self.sum2 + term13(self.phi_bar);
                if (s1 <= 0.0 && self.flg == 1) || (s2 <= 0.0 && self.flg == 0) {
                    self.flg = 1;
                    self.sum1 = s1;
                    self.sum2 = s2;
                    self.phi_bar
                } else if self.flg == 1 {
                    self.core = snapshot;
                    self.phi = self.alpha;
                    self.sum1 = 0.0;
                    self.sum2 = 0.0;
                    self.flg = 0;
                    return Ok(Step::Discarded);
                } else {
                    self.sum2 += term13(self.alpha);
                    self.sum1 = 0.0;
                    self.alpha
                }
            }
        };
        let window = self.core.window(&x_next, &x_bar, lambda_prev, theta_prev, phi, phi_next);
        self.core.shift(x_next, x_bar);
        self.phi = phi_next;
        Ok(Step::Accepted(StepInfo { lambda, phi, flg: self.flg, window: Some(window) }))
    }

    fn iterate(&self) -> &Vector {
        &self.core.x
    }

    fn status(&self) -> (f64, f64, u8) {
        (self.core.step.lambda, self.phi, self.flg)
    }
}
