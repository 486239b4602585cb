//! Residual-switching golden-ratio method.
//!
//! Each pass compares the residual `J_k` of the current iterate with its
//! history and either applies the golden-ratio anchor (momentum) or resets
//! the anchor to the iterate.

use serde::{Deserialize, Serialize};

use crate::analysis::DescentWindow;
use crate::error::{invalid, Result};
use crate::linalg::{golden_anchor, Vector};
use crate::problem::{EvalCounter, VIProblem};
use crate::solvers::golden::GoldenCore;
use crate::solvers::{MethodParams, Solver, Step, StepInfo, GOLDEN_RATIO};

/// Which reading of the switching predicate to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alg1Rule {
    /// Momentum iff `(J_k > J_prev ∧ flg = 1) ∨ J_min < J_k + 1/k̄`.
    #[default]
    Literal,
    /// Momentum iff `(J_k > J_prev ∧ flg = 1) ∨ (flg = 0 ∧ J_k ≥ J_min + 1/k̄)`:
    /// momentum persists until the residual falls below the running minimum plus `1/k̄`.
    Prose,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Momentum,
    NoMomentum,
}

pub fn alg1_branch(rule: Alg1Rule, j: f64, j_prev: f64, j_min: f64, flg: u8, k_bar: u64) -> Branch {
    let rising = j - j_prev > 0.0 && flg == 1;
    let slack = 1.0 / k_bar as f64;
    let second = match rule {
        Alg1Rule::Literal => j_min < j + slack,
        Alg1Rule::Prose => flg == 0 && j >= j_min + slack,
    };
    if rising || second {
        Branch::Momentum
    } else {
        Branch::NoMomentum
    }
}

/// Window of the previous pass, waiting for `φₖ₊₁` and `x̄ᵏ⁺¹`.
#[derive(Debug, Clone)]
struct Pending(DescentWindow);

impl Pending {
    fn complete(mut self, phi_next: f64) -> DescentWindow {
        self.0.phi_next = phi_next;
        self.0.x_bar_next = golden_anchor(&self.0.x_next, &self.0.x_bar, phi_next);
        self.0
    }
}

#[derive(Debug, Clone)]
pub struct Alg1Solver {
    core: GoldenCore,
    phi: f64,
    rule: Alg1Rule,
    flg: u8,
    k_bar: u64,
    j: Option<f64>,
    j_prev: f64,
    j_min: f64,
    pending: Option<Pending>,
}

impl Alg1Solver {
    pub fn new(problem: &VIProblem, params: &MethodParams) -> Result<Self> {
        let phi = params.phi;
        if !(phi > 1.0 && phi <= GOLDEN_RATIO + 1e-12) {
            return Err(invalid(format!("phi must lie in (1, golden ratio], got {phi}")));
        }
        Ok(Self {
            core: GoldenCore::new(problem, phi, params)?,
            phi,
            rule: params.alg1_rule,
            flg: 0,
            k_bar: 1,
            j: None,
            j_prev: f64::INFINITY,
            j_min: f64::INFINITY,
            pending: None,
        })
    }

    pub fn flg(&self) -> u8 {
        self.flg
    }

    pub fn k_bar(&self) -> u64 {
        self.k_bar
    }

    pub fn j_min(&self) -> f64 {
        self.j_min
    }

    pub fn lambda(&self) -> f64 {
        self.core.step.lambda
    }

    pub fn anchor(&self) -> &Vector {
        &self.core.x_bar_prev
    }
}

impl Solver for Alg1Solver {
    fn observe(&mut self, problem: &VIProblem, counter: &mut EvalCounter) -> Result<f64> {
        let j = self.core.observe(problem, counter)?;
        self.j = Some(j);
        Ok(j)
    }

    fn advance(&mut self, problem: &VIProblem, counter: &mut EvalCounter) -> Result<Step> {
        let j = self.j.take().ok_or_else(|| invalid("advance called before observe"))?;
        if !self.core.started {
            let lambda = self.core.step.lambda;
            self.core.init_pass(problem, counter)?;
            self.j_prev = j;
            self.j_min = j;
            return Ok(Step::Accepted(StepInfo { lambda, phi: f64::INFINITY, flg: self.flg, window: None }));
        }
        let (lambda_prev, theta_prev) = self.core.update_step(self.phi)?;
        let (x_bar, phi_k) = match alg1_branch(self.rule, j, self.j_prev, self.j_min, self.flg, self.k_bar) {
            Branch::Momentum => {
                self.flg = 0;
                (golden_anchor(&self.core.x, &self.core.x_bar_prev, self.phi), self.phi)
            }
            Branch::NoMomentum => {
                self.flg = 1;
                self.k_bar += 1;
                (self.core.x.clone(), f64::INFINITY)
            }
        };
        let window = self.pending.take().map(|p| p.complete(phi_k));
        let x_next = self.core.prox_step(problem, &x_bar, counter)?;
        // x̄ᵏ⁺¹ and φₖ₊₁ are placeholders until the next pass
        self.pending = Some(Pending(self.core.window(&x_next, &x_bar, lambda_prev, theta_prev, phi_k, f64::INFINITY)));
        let lambda = self.core.step.lambda;
        self.core.shift(x_next, x_bar);
        self.j_min = self.j_min.min(j);
        self.j_prev = j;
        Ok(Step::Accepted(StepInfo { lambda, phi: phi_k, flg: self.flg, window }))
    }

    fn iterate(&self) -> &Vector {
        &self.core.x
    }

    fn status(&self) -> (f64, f64, u8) {
        (self.core.step.lambda, self.phi, self.flg)
    }
}
