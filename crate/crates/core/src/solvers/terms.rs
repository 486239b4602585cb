//! The running-sum increments that drive the sum-switching method.

use crate::linalg::{dist_sq, Vector};

/// `xᵏ⁻¹, xᵏ, xᵏ⁺¹` and the anchor `x̄ᵏ` of one pass.
#[derive(Debug, Clone, Copy)]
pub struct SumWindow<'a> {
    pub x_prev: &'a Vector,
    pub x: &'a Vector,
    pub x_next: &'a Vector,
    pub x_bar: &'a Vector,
}

/// `−c‖xᵏ−x̄ᵏ‖² + (c−1−1/φₖ₊₁)‖xᵏ⁺¹−x̄ᵏ‖² − (c−θₖ)‖xᵏ⁺¹−xᵏ‖²` with `c = λₖφₖ/λₖ₋₁`.
pub fn sum_term_13(w: SumWindow<'_>, phi: f64, phi_next: f64, lambda: f64, lambda_prev: f64, theta: f64) -> f64 {
    let c = lambda * phi / lambda_prev;
    let inv_next = if phi_next.is_infinite() { 0.0 } else { 1.0 / phi_next };
    -c * dist_sq(w.x, w.x_bar) + (c - 1.0 - inv_next) * dist_sq(w.x_next, w.x_bar)
        - (c - theta) * dist_sq(w.x_next, w.x)
}

/// [`sum_term_13`] plus `θₖ₋₁/2‖xᵏ−xᵏ⁻¹‖² − θₖ/2‖xᵏ⁺¹−xᵏ‖²`.
#[allow(clippy::too_many_arguments)]
pub fn sum_term_12(
    w: SumWindow<'_>,
    phi: f64,
    phi_next: f64,
    lambda: f64,
    lambda_prev: f64,
    theta: f64,
    theta_prev: f64,
) -> f64 {
    0.5 * theta_prev * dist_sq(w.x, w.x_prev) + sum_term_13(w, phi, phi_next, lambda, lambda_prev, theta)
        - 0.5 * theta * dist_sq(w.x_next, w.x)
}
