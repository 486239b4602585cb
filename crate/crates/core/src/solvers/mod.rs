//! First-order methods behind one stepping interface, and the driver loop.
//!
//! A solver alternates two calls. [`Solver::observe`] evaluates `F` at the
//! current iterate and returns its natural residual; [`Solver::advance`]
//! then performs one pass from that iterate, reusing the cached `F(xᵏ)`.
//! Golden-ratio methods start with one projected-gradient pass that produces
//! `x¹` from `x⁰` and sets `x̄⁰ = x⁰`.

mod alg1;
mod alg2;
mod baselines;
mod golden;
pub mod terms;

pub use alg1::{alg1_branch, Alg1Rule, Alg1Solver, Branch};
pub use alg2::{Alg2Solver, SwitchPolicy};
pub use baselines::{estimate_lipschitz, AGraalSolver, ExtragradientSolver, GraalSolver, PgdSolver, ReflectedSolver};
pub use terms::{sum_term_12, sum_term_13, SumWindow};

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::analysis::DescentWindow;
use crate::error::{invalid, Result, VIError};
use crate::linalg::{is_finite, Vector};
use crate::problem::{EvalCounter, VIProblem};
use crate::trace::TraceRow;

pub const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Pgd,
    Eg,
    PrjRef,
    Graal,
    AGraal,
    Alg1,
    Alg2,
}

impl Method {
    pub const ALL: [Method; 7] =
        [Method::Pgd, Method::Eg, Method::PrjRef, Method::Graal, Method::AGraal, Method::Alg1, Method::Alg2];

    pub fn name(self) -> &'static str {
        match self {
            Method::Pgd => "pgd",
            Method::Eg => "eg",
            Method::PrjRef => "prjref",
            Method::Graal => "graal",
            Method::AGraal => "agraal",
            Method::Alg1 => "alg1",
            Method::Alg2 => "alg2",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = VIError;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL.into_iter().find(|m| m.name() == s.to_ascii_lowercase()).ok_or_else(|| {
            let valid: Vec<&str> = Method::ALL.iter().map(|m| m.name()).collect();
            invalid(format!("unknown method '{s}'; valid methods: {}", valid.join(", ")))
        })
    }
}

/// Tunables of all methods; each method reads the fields it needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MethodParams {
    /// Anchor ratio of the residual-switching method.
    pub phi: f64,
    /// Small anchor ratio of the sum-switching method.
    pub alpha: f64,
    /// Large anchor ratio of the sum-switching method.
    pub phi_bar: f64,
    /// Anchor ratio of aGRAAL and GRAAL, in `(1, golden ratio]`.
    pub agraal_phi: f64,
    pub lambda0: f64,
    pub lambda_bar: f64,
    pub alg1_rule: Alg1Rule,
    pub alg2_policy: SwitchPolicy,
    /// Overrides the Lipschitz-based step of the fixed-step baselines.
    pub fixed_step: Option<f64>,
}

impl Default for MethodParams {
    fn default() -> Self {
        Self {
            phi: 1.5,
            alpha: 1.5,
            phi_bar: 10.0,
            agraal_phi: 1.5,
            lambda0: 1.0,
            lambda_bar: 1.0,
            alg1_rule: Alg1Rule::Literal,
            alg2_policy: SwitchPolicy::Adaptive,
            fixed_step: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub max_operator_evals: u64,
    pub tol: f64,
    /// Seeds the Lipschitz estimate of the fixed-step baselines.
    pub seed: u64,
    pub params: MethodParams,
    /// Record elapsed nanoseconds per row; off by default so traces are reproducible.
    pub wall_clock: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self { max_operator_evals: 20_000, tol: 1e-6, seed: 0, params: MethodParams::default(), wall_clock: false }
    }
}

/// What one [`Solver::advance`] call did.
#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Accepted(StepInfo),
    /// The pass was rolled back; its evaluations stay counted.
    Discarded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepInfo {
    /// Step size used to leave the observed iterate.
    pub lambda: f64,
    /// Anchor ratio of the pass; infinite without momentum.
    pub phi: f64,
    pub flg: u8,
    pub window: Option<DescentWindow>,
}

pub trait Solver {
    /// Evaluates `F(xᵏ)` and returns `‖xᵏ − prox_g(xᵏ − F(xᵏ))‖`.
    fn observe(&mut self, problem: &VIProblem, counter: &mut EvalCounter) -> Result<f64>;

    /// One pass from the observed iterate. Must follow [`Solver::observe`].
    fn advance(&mut self, problem: &VIProblem, counter: &mut EvalCounter) -> Result<Step>;

    fn iterate(&self) -> &Vector;

    /// `(λ, φ, flg)` describing the pending pass, for rows written without advancing.
    fn status(&self) -> (f64, f64, u8);
}

/// Called for every trace row with the iterate the row was measured at.
pub trait RunObserver {
    fn on_row(&mut self, row: &TraceRow, x: &Vector, window: Option<&DescentWindow>);
}

impl RunObserver for () {
    fn on_row(&mut self, _row: &TraceRow, _x: &Vector, _window: Option<&DescentWindow>) {}
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub method: Method,
    pub status: Status,
    pub rows: Vec<TraceRow>,
    /// Final iterate.
    pub x: Vector,
    pub counter: EvalCounter,
    pub rollbacks: u64,
}

impl RunRecord {
    pub fn final_residual(&self) -> Option<f64> {
        self.rows.last().map(|r| r.residual)
    }
}

pub fn make_solver(problem: &VIProblem, method: Method, config: &SolveConfig) -> Result<Box<dyn Solver>> {
    let p = &config.params;
    Ok(match method {
        Method::Pgd => Box::new(PgdSolver::new(problem, p, config.seed)?),
        Method::Eg => Box::new(ExtragradientSolver::new(problem, p, config.seed)?),
        Method::PrjRef => Box::new(ReflectedSolver::new(problem, p, config.seed)?),
        Method::Graal => Box::new(GraalSolver::new(problem, p, config.seed)?),
        Method::AGraal => Box::new(AGraalSolver::new(problem, p)?),
        Method::Alg1 => Box::new(Alg1Solver::new(problem, p)?),
        Method::Alg2 => Box::new(Alg2Solver::new(problem, p)?),
    })
}

pub fn solve(problem: &VIProblem, method: Method, config: &SolveConfig) -> Result<RunRecord> {
    solve_observed(problem, method, config, &mut ())
}

/// Iterates until the residual drops to `tol` or `max_operator_evals` is reached.
///
/// The budget is checked before every pass, so a multi-evaluation pass that
/// starts below the budget is completed.
pub fn solve_observed(
    problem: &VIProblem,
    method: Method,
    config: &SolveConfig,
    observer: &mut dyn RunObserver,
) -> Result<RunRecord> {
    if !(config.tol >= 0.0) {
        return Err(invalid(format!("tolerance must be nonnegative, got {}", config.tol)));
    }
    let mut solver = make_solver(problem, method, config)?;
    run_solver(solver.as_mut(), problem, method, config, observer)
}

/// The driver loop over an already constructed solver.
pub fn run_solver(
    solver: &mut dyn Solver,
    problem: &VIProblem,
    method: Method,
    config: &SolveConfig,
    observer: &mut dyn RunObserver,
) -> Result<RunRecord> {
    let start = config.wall_clock.then(Instant::now);
    let elapsed = || start.map_or(0, |s| s.elapsed().as_nanos() as u64);
    let mut counter = EvalCounter::default();
    let mut rows = Vec::new();
    let mut rollbacks = 0;
    let mut iter = 0u64;
    let status = loop {
        if counter.operator_evals >= config.max_operator_evals {
            break Status::BudgetExhausted;
        }
        let residual = solver.observe(problem, &mut counter)?;
        if !residual.is_finite() {
            return Err(VIError::Divergence { iteration: iter as usize });
        }
        if residual <= config.tol {
            let (lambda, phi, flg) = solver.status();
            let row = TraceRow {
                iter,
                op_evals: counter.operator_evals,
                prox_evals: counter.prox_evals,
                residual,
                lambda,
                phi,
                flg,
                wall_nanos: elapsed(),
            };
            observer.on_row(&row, solver.iterate(), None);
            rows.push(row);
            break Status::Converged;
        }
        let x = solver.iterate().clone();
        match solver.advance(problem, &mut counter)? {
            Step::Accepted(info) => {
                if !is_finite(solver.iterate()) {
                    return Err(VIError::Divergence { iteration: iter as usize });
                }
                let row = TraceRow {
                    iter,
                    op_evals: counter.operator_evals,
                    prox_evals: counter.prox_evals,
                    residual,
                    lambda: info.lambda,
                    phi: info.phi,
                    flg: info.flg,
                    wall_nanos: elapsed(),
                };
                observer.on_row(&row, &x, info.window.as_ref());
                rows.push(row);
                iter += 1;
            }
            Step::Discarded => rollbacks += 1,
        }
    };
    Ok(RunRecord { method, status, rows, x: solver.iterate().clone(), counter, rollbacks })
}
