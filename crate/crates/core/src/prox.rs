//! Closed-form proximal maps and Euclidean projections.
//!
//! All the sets used by the benchmark families (orthant, box, scaled simplex,
//! products of simplices, whole space) have exact projections, so no inner
//! QP solver is needed.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::Vector;

/// One factor of a product of simplices: `size` coordinates summing to `radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplexBlock {
    pub size: usize,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeasibleSetSpec {
    NonnegOrthant,
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Simplex { radius: f64 },
    ProductOfSimplices { blocks: Vec<SimplexBlock> },
    WholeSpace,
}

impl FeasibleSetSpec {
    pub fn validate(&self, dim: usize) -> Result<()> {
        match self {
            FeasibleSetSpec::NonnegOrthant | FeasibleSetSpec::WholeSpace => Ok(()),
            FeasibleSetSpec::Box { lo, hi } => {
                if lo.len() != dim || hi.len() != dim {
                    return Err(invalid(format!("box bounds have lengths {}/{}, expected {dim}", lo.len(), hi.len())));
                }
                check_box(lo, hi)
            }
            FeasibleSetSpec::Simplex { radius } => {
                if dim == 0 {
                    return Err(invalid("simplex of dimension 0"));
                }
                check_radius(*radius)
            }
            FeasibleSetSpec::ProductOfSimplices { blocks } => check_blocks(blocks, dim),
        }
    }

    /// Euclidean projection. The set must already be validated for `z.len()`.
    pub fn project(&self, z: &Vector) -> Vector {
        match self {
            FeasibleSetSpec::NonnegOrthant => z.map(|v| v.max(0.0)),
            FeasibleSetSpec::Box { lo, hi } => {
                Vector::from_iterator(z.len(), z.iter().zip(lo.iter().zip(hi)).map(|(v, (l, h))| v.clamp(*l, *h)))
            }
            FeasibleSetSpec::Simplex { radius } => {
                let mut out = z.clone();
                simplex_in_place(out.as_mut_slice(), *radius);
                out
            }
            FeasibleSetSpec::ProductOfSimplices { blocks } => {
                let mut out = z.clone();
                let mut start = 0;
                for b in blocks {
                    simplex_in_place(&mut out.as_mut_slice()[start..start + b.size], b.radius);
                    start += b.size;
                }
                out
            }
            FeasibleSetSpec::WholeSpace => z.clone(),
        }
    }

    /// Membership test with absolute slack `tol` on every constraint.
    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        match self {
            FeasibleSetSpec::NonnegOrthant => x.iter().all(|v| *v >= -tol),
            FeasibleSetSpec::Box { lo, hi } => {
                x.iter().zip(lo.iter().zip(hi)).all(|(v, (l, h))| *v >= l - tol && *v <= h + tol)
            }
            FeasibleSetSpec::Simplex { radius } => on_simplex(x.as_slice(), *radius, tol),
            FeasibleSetSpec::ProductOfSimplices { blocks } => {
                let mut start = 0;
                blocks.iter().all(|b| {
                    let ok = on_simplex(&x.as_slice()[start..start + b.size], b.radius, tol);
                    start += b.size;
                    ok
                })
            }
            FeasibleSetSpec::WholeSpace => true,
        }
    }
}

fn on_simplex(x: &[f64], radius: f64, tol: f64) -> bool {
    x.iter().all(|v| *v >= -tol) && (x.iter().sum::<f64>() - radius).abs() <= tol * (1.0 + x.len() as f64)
}

fn check_radius(radius: f64) -> Result<()> {
    if radius > 0.0 && radius.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("simplex radius must be positive, got {radius}")))
    }
}

fn check_box(lo: &[f64], hi: &[f64]) -> Result<()> {
    if lo.len() != hi.len() {
        return Err(invalid("box bounds have different lengths"));
    }
    match lo.iter().zip(hi).position(|(l, h)| !(l <= h)) {
        Some(i) => Err(invalid(format!("box bound lo[{i}] = {} exceeds hi[{i}] = {}", lo[i], hi[i]))),
        None => Ok(()),
    }
}

fn check_blocks(blocks: &[SimplexBlock], dim: usize) -> Result<()> {
    let total: usize = blocks.iter().map(|b| b.size).sum();
    if total != dim {
        return Err(invalid(format!("simplex blocks cover {total} coordinates, vector has {dim}")));
    }
    for b in blocks {
        if b.size == 0 {
            return Err(invalid("empty simplex block"));
        }
        check_radius(b.radius)?;
    }
    Ok(())
}

/// Sort-and-threshold projection onto `{v ≥ 0, Σv = s}`.
fn simplex_in_place(z: &mut [f64], s: f64) {
    let mut sorted: Vec<f64> = z.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut tau = 0.0;
    for (j, u) in sorted.iter().enumerate() {
        cumsum += u;
        let t = (cumsum - s) / (j as f64 + 1.0);
        if u - t > 0.0 {
            tau = t;
        }
    }
    for v in z.iter_mut() {
        *v = (*v - tau).max(0.0);
    }
}

/// Soft-thresholding `sign(zᵢ)·max(|zᵢ| − τ, 0)`, the prox of `τ‖·‖₁`.
pub fn prox_l1(z: &Vector, tau: f64) -> Vector {
    z.map(|v| v.signum() * (v.abs() - tau).max(0.0))
}

pub fn project_simplex(z: &Vector, s: f64) -> Result<Vector> {
    if z.is_empty() {
        return Err(invalid("cannot project an empty vector onto a simplex"));
    }
    check_radius(s)?;
    let mut out = z.clone();
    simplex_in_place(out.as_mut_slice(), s);
    Ok(out)
}

pub fn project_box(z: &Vector, lo: &Vector, hi: &Vector) -> Result<Vector> {
    if lo.len() != z.len() || hi.len() != z.len() {
        return Err(invalid("box bounds do not match the vector length"));
    }
    check_box(lo.as_slice(), hi.as_slice())?;
    Ok(Vector::from_iterator(z.len(), z.iter().zip(lo.iter().zip(hi.iter())).map(|(v, (l, h))| v.clamp(*l, *h))))
}

pub fn project_product_simplices(z: &Vector, blocks: &[SimplexBlock]) -> Result<Vector> {
    check_blocks(blocks, z.len())?;
    Ok(FeasibleSetSpec::ProductOfSimplices { blocks: blocks.to_vec() }.project(z))
}

/// A prox map `(z, λ) ↦ prox_{λg}(z)`.
pub type ProxMap = Box<dyn Fn(&Vector, f64) -> Vector + Send + Sync>;

/// Prox of the indicator of `set`, i.e. the projection (independent of λ).
pub fn prox_for(set: &FeasibleSetSpec) -> ProxMap {
    let set = set.clone();
    Box::new(move |z: &Vector, _lambda: f64| set.project(z))
}
