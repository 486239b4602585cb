//! Seeded generators for the benchmark families.
//!
//! Every generator is a pure function of its parameters and seed. The
//! operators are stored as [`OperatorData`], which both evaluates `F` and
//! serializes into a problem snapshot.

mod affine;
mod logistic;
mod mdp;
mod nash;
mod rank2;
mod zerosum;

pub use affine::{affine_problem, strongly_monotone_affine};
pub use logistic::{logistic_loss, sparse_logistic};
pub use mdp::{garnet_mdp, GarnetMdp};
pub use nash::{nash_cournot, nash_cournot_scenario, NashCournotParams, NashScenario};
pub use rank2::nonmonotone_rank2;
pub use zerosum::{duality_gap, zero_sum_from_matrix, zero_sum_game};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{Matrix, Vector};
use crate::problem::Operator;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum OperatorData {
    /// `F(x) = Mx + q`.
    Affine {
        #[serde(with = "crate::serde_linalg::matrix")]
        m: Matrix,
        #[serde(with = "crate::serde_linalg::vector")]
        q: Vector,
    },
    /// `F(x, y) = (Ay, −Aᵀx)`.
    ZeroSum {
        #[serde(with = "crate::serde_linalg::matrix")]
        a: Matrix,
    },
    /// `F(x) = Dᵀσ(Dx)`.
    Logistic {
        #[serde(with = "crate::serde_linalg::matrix")]
        d: Matrix,
    },
    NashCournot(NashCournotParams),
    Garnet(GarnetMdp),
    /// `F(x) = t₁(t₁ᵀx) + t₂(t₂ᵀx)` with `t₁ = A sin x`, `t₂ = B exp x`.
    Rank2 {
        #[serde(with = "crate::serde_linalg::matrix")]
        a: Matrix,
        #[serde(with = "crate::serde_linalg::matrix")]
        b: Matrix,
    },
}

impl OperatorData {
    pub fn family(&self) -> &'static str {
        match self {
            OperatorData::Affine { .. } => "affine",
            OperatorData::ZeroSum { .. } => "zerosum",
            OperatorData::Logistic { .. } => "logistic",
            OperatorData::NashCournot(_) => "nash",
            OperatorData::Garnet(_) => "mdp",
            OperatorData::Rank2 { .. } => "rank2",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            OperatorData::Affine { m, q } => {
                if !m.is_square() || m.nrows() != q.len() {
                    return Err(invalid("affine operator needs a square M matching q"));
                }
            }
            OperatorData::ZeroSum { a } | OperatorData::Logistic { d: a } => {
                if a.nrows() == 0 || a.ncols() == 0 {
                    return Err(invalid("empty matrix"));
                }
            }
            OperatorData::NashCournot(p) => p.validate()?,
            OperatorData::Garnet(g) => g.validate()?,
            OperatorData::Rank2 { a, b } => {
                if !a.is_square() || a.shape() != b.shape() {
                    return Err(invalid("rank-2 operator needs square A and B of equal size"));
                }
            }
        }
        Ok(())
    }
}

impl Operator for OperatorData {
    fn dim(&self) -> usize {
        match self {
            OperatorData::Affine { q, .. } => q.len(),
            OperatorData::ZeroSum { a } => a.nrows() + a.ncols(),
            OperatorData::Logistic { d } => d.ncols(),
            OperatorData::NashCournot(p) => p.c.len(),
            OperatorData::Garnet(g) => g.n_states,
            OperatorData::Rank2 { a, .. } => a.nrows(),
        }
    }

    fn apply(&self, x: &Vector) -> Vector {
        match self {
            OperatorData::Affine { m, q } => m * x + q,
            OperatorData::ZeroSum { a } => zerosum::apply(a, x),
            OperatorData::Logistic { d } => logistic::apply(d, x),
            OperatorData::NashCournot(p) => p.apply(x),
            OperatorData::Garnet(g) => x - g.bellman(x),
            OperatorData::Rank2 { a, b } => rank2::apply(a, b, x),
        }
    }

    fn data(&self) -> Option<&OperatorData> {
        Some(self)
    }
}
