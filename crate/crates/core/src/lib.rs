//! Adaptive golden-ratio switching methods for monotone variational
//! inequalities `find x* : ⟨F(x*), x − x*⟩ + g(x) − g(x*) ≥ 0`, together with
//! classical baselines, benchmark generators and runtime certificates.

pub mod analysis;
pub mod error;
pub mod linalg;
pub mod problem;
pub mod problems;
pub mod prox;
pub mod rng;
mod serde_linalg;
pub mod solvers;
pub mod stepsize;
pub mod trace;

pub use error::{Result, VIError};
pub use linalg::{Matrix, Vector};
pub use problem::{EvalCounter, Operator, ProblemSnapshot, Regularizer, VIProblem};
pub use prox::FeasibleSetSpec;
pub use solvers::{solve, solve_observed, Method, MethodParams, RunRecord, SolveConfig, Status};
pub use trace::TraceRow;
