use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, VIError};
use crate::linalg::Vector;
use crate::problem::{Regularizer, VIProblem};
use crate::problems::OperatorData;
use crate::prox::FeasibleSetSpec;
use crate::rng::{make_rng, uniform, SolverRng};

/// Floor applied to total output before evaluating the inverse demand.
pub const MIN_TOTAL_OUTPUT: f64 = 1e-12;

/// Cournot oligopoly with inverse demand `p(Q) = 5000^{1/γ} Q^{−1/γ}` and
/// marginal costs `cᵢ + (Lᵢxᵢ)^{1/βᵢ}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NashCournotParams {
    pub gamma: f64,
    #[serde(with = "crate::serde_linalg::vector")]
    pub beta: Vector,
    #[serde(with = "crate::serde_linalg::vector")]
    pub c: Vector,
    #[serde(with = "crate::serde_linalg::vector")]
    pub l_cap: Vector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NashScenario {
    /// `γ = 1.1`, `βᵢ ∼ U(0.5, 2)`.
    I,
    /// `γ = 1.5`, `βᵢ ∼ U(0.3, 4)`.
    II,
}

impl FromStr for NashScenario {
    type Err = VIError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "i" | "1" | "I" => Ok(NashScenario::I),
            "ii" | "2" | "II" => Ok(NashScenario::II),
            other => Err(invalid(format!("unknown Nash-Cournot scenario '{other}' (expected i or ii)"))),
        }
    }
}

impl NashScenario {
    pub fn tag(self) -> &'static str {
        match self {
            NashScenario::I => "i",
            NashScenario::II => "ii",
        }
    }
}

impl NashCournotParams {
    /// Draws all `βᵢ`, then all `cᵢ ∼ U(1,100)`, then all `Lᵢ ∼ U(0.5,5)`.
    pub fn draw(n: usize, scenario: NashScenario, rng: &mut SolverRng) -> Self {
        let (gamma, lo, hi) = match scenario {
            NashScenario::I => (1.1, 0.5, 2.0),
            NashScenario::II => (1.5, 0.3, 4.0),
        };
        let beta = Vector::from_fn(n, |_, _| uniform(rng, lo, hi));
        let c = Vector::from_fn(n, |_, _| uniform(rng, 1.0, 100.0));
        let l_cap = Vector::from_fn(n, |_, _| uniform(rng, 0.5, 5.0));
        Self { gamma, beta, c, l_cap }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.c.len();
        if n == 0 || self.beta.len() != n || self.l_cap.len() != n {
            return Err(invalid("Nash-Cournot parameter vectors must be nonempty and equally long"));
        }
        if !(self.gamma >= 1.0) || !self.gamma.is_finite() {
            return Err(invalid(format!("Nash-Cournot gamma must be >= 1, got {}", self.gamma)));
        }
        let positive = |v: &Vector| v.iter().all(|x| *x > 0.0 && x.is_finite());
        if !positive(&self.beta) || !positive(&self.l_cap) {
            return Err(invalid("Nash-Cournot beta and L must be strictly positive"));
        }
        if !self.c.iter().all(|x| *x >= 0.0 && x.is_finite()) {
            return Err(invalid("Nash-Cournot costs must be nonnegative"));
        }
        Ok(())
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        let q = x.sum().max(MIN_TOTAL_OUTPUT);
        let inv_g = 1.0 / self.gamma;
        let p = 5000f64.powf(inv_g) * q.powf(-inv_g);
        let dp = -inv_g * p / q;
        Vector::from_fn(x.len(), |i, _| {
            let e = 1.0 / self.beta[i];
            let marginal = self.c[i] + self.l_cap[i].powf(e) * x[i].max(0.0).powf(e);
            marginal - p - x[i] * dp
        })
    }
}

/// The Cournot VI over `ℝⁿ₊`, started at a seeded `U(0,1)` point.
pub fn nash_cournot(params: NashCournotParams, seed: u64) -> Result<VIProblem> {
    build(params, &mut make_rng(seed), seed, None)
}

/// Parameters and start point drawn from one seeded stream.
pub fn nash_cournot_scenario(n: usize, scenario: NashScenario, seed: u64) -> Result<VIProblem> {
    let mut rng = make_rng(seed);
    let params = NashCournotParams::draw(n, scenario, &mut rng);
    build(params, &mut rng, seed, Some(scenario))
}

fn build(
    params: NashCournotParams,
    rng: &mut SolverRng,
    seed: u64,
    scenario: Option<NashScenario>,
) -> Result<VIProblem> {
    params.validate()?;
    let n = params.c.len();
    let x0 = Vector::from_fn(n, |_, _| uniform(rng, 0.0, 1.0));
    let mut p = VIProblem::new(
        format!("nash-n{n}"),
        Arc::new(OperatorData::NashCournot(params)),
        Regularizer::indicator(FeasibleSetSpec::NonnegOrthant),
        x0,
    )?
    .with_seed(seed);
    if let Some(s) = scenario {
        p = p.with_scenario(s.tag());
    }
    Ok(p)
}
