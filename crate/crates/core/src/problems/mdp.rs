use std::sync::Arc;

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{Matrix, Vector};
use crate::problem::{Regularizer, VIProblem};
use crate::problems::OperatorData;
use crate::rng::{make_rng, uniform};

/// Sparse MDP with `transitions[s * n_actions + a]` listing `(successor, prob)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GarnetMdp {
    pub n_states: usize,
    pub n_actions: usize,
    pub branching: usize,
    pub gamma: f64,
    pub transitions: Vec<Vec<(usize, f64)>>,
    /// `cost[(s, a)]`.
    #[serde(with = "crate::serde_linalg::matrix")]
    pub cost: Matrix,
}

impl GarnetMdp {
    pub fn validate(&self) -> Result<()> {
        if self.n_states == 0 || self.n_actions == 0 {
            return Err(invalid("MDP needs at least one state and one action"));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(invalid(format!("discount must lie in (0, 1), got {}", self.gamma)));
        }
        if self.cost.shape() != (self.n_states, self.n_actions)
            || self.transitions.len() != self.n_states * self.n_actions
        {
            return Err(invalid("MDP cost/transition tables have the wrong shape"));
        }
        for row in &self.transitions {
            let total: f64 = row.iter().map(|(_, p)| p).sum();
            let bad = row.iter().any(|(s, p)| *s >= self.n_states || *p < 0.0);
            if bad || (total - 1.0).abs() > 1e-12 || row.len() > self.branching {
                return Err(invalid("MDP transition row is not a sparse probability vector"));
            }
        }
        Ok(())
    }

    /// `[T v](s) = min_a { c(s,a) + γ Σ_{s⁺} P(s⁺|s,a) v(s⁺) }`.
    pub fn bellman(&self, v: &Vector) -> Vector {
        Vector::from_fn(self.n_states, |s, _| {
            (0..self.n_actions)
                .map(|a| {
                    let ev: f64 = self.transitions[s * self.n_actions + a].iter().map(|(t, p)| p * v[*t]).sum();
                    self.cost[(s, a)] + self.gamma * ev
                })
                .fold(f64::INFINITY, f64::min)
        })
    }
}

/// Garnet recipe: for every `(s, a)` pick `branching` distinct successors,
/// weight them by normalized `U(0,1)` draws, and draw the cost from `U(0,1)`.
/// The VI is `F = Id − T` on the whole space, started at zero.
pub fn garnet_mdp(n_states: usize, n_actions: usize, branching: usize, gamma: f64, seed: u64) -> Result<VIProblem> {
    if n_states == 0 || n_actions == 0 {
        return Err(invalid("MDP needs at least one state and one action"));
    }
    if branching == 0 || branching > n_states {
        return Err(invalid(format!("branching must lie in 1..={n_states}, got {branching}")));
    }
    let mut rng = make_rng(seed);
    let mut transitions = Vec::with_capacity(n_states * n_actions);
    let mut cost = Matrix::zeros(n_states, n_actions);
    for s in 0..n_states {
        for a in 0..n_actions {
            let succ = index::sample(&mut rng, n_states, branching).into_vec();
            let w: Vec<f64> = (0..branching).map(|_| uniform(&mut rng, 0.0, 1.0)).collect();
            let total: f64 = w.iter().sum();
            let mut row: Vec<(usize, f64)> = succ.into_iter().zip(w.iter().map(|x| x / total)).collect();
            // renormalize so the row sums to one up to a single rounding
            let drift: f64 = 1.0 - row.iter().map(|(_, p)| p).sum::<f64>();
            row[0].1 += drift;
            transitions.push(row);
            cost[(s, a)] = uniform(&mut rng, 0.0, 1.0);
        }
    }
    let mdp = GarnetMdp { n_states, n_actions, branching, gamma, transitions, cost };
    mdp.validate()?;
    Ok(VIProblem::new(
        format!("mdp-s{n_states}-a{n_actions}-g{gamma}"),
        Arc::new(OperatorData::Garnet(mdp)),
        Regularizer::Zero,
        Vector::zeros(n_states),
    )?
    .with_monotone(false)
    .with_seed(seed))
}
