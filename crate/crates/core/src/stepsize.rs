//! Adaptive step-size rule shared by aGRAAL and both switching methods.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, VIError};

/// `ρ = 1/φ + 1/φ²`, the admissible growth factor of the step.
pub fn growth_factor(phi: f64) -> f64 {
    1.0 / phi + 1.0 / (phi * phi)
}

/// Current step `λ_k`, the previous one, `θ_k`, the growth factor and the cap `λ̄`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepSizeState {
    pub lambda: f64,
    pub lambda_prev: f64,
    pub theta: f64,
    pub rho: f64,
    pub lambda_bar: f64,
}

impl StepSizeState {
    /// Initial state with `θ₀ = 1`.
    pub fn new(phi: f64, lambda0: f64, lambda_bar: f64) -> Result<Self> {
        if !(phi > 1.0) || !phi.is_finite() {
            return Err(invalid(format!("step-size phi must be a finite value > 1, got {phi}")));
        }
        if !(lambda0 > 0.0) || !(lambda_bar > 0.0) || !lambda0.is_finite() || !lambda_bar.is_finite() {
            return Err(invalid("lambda0 and lambda_bar must be positive and finite"));
        }
        if lambda0 > lambda_bar {
            return Err(invalid(format!("lambda0 = {lambda0} exceeds the cap lambda_bar = {lambda_bar}")));
        }
        Ok(Self { lambda: lambda0, lambda_prev: lambda0, theta: 1.0, rho: growth_factor(phi), lambda_bar })
    }

    /// Advance in place; returns the new step.
    pub fn update(&mut self, phi: f64, dx_norm_sq: f64, df_norm_sq: f64) -> Result<f64> {
        *self = step_size_update(self, phi, dx_norm_sq, df_norm_sq)?;
        Ok(self.lambda)
    }
}

/// `λ⁺ = min{ρλ, (φθ/(4λ))·‖Δx‖²/‖ΔF‖², λ̄}` followed by `θ⁺ = φλ⁺/λ`.
///
/// The middle term is dropped when `‖ΔF‖² = 0`.
pub fn step_size_update(state: &StepSizeState, phi: f64, dx_norm_sq: f64, df_norm_sq: f64) -> Result<StepSizeState> {
    if !phi.is_finite() || !dx_norm_sq.is_finite() || !df_norm_sq.is_finite() {
        return Err(VIError::NonFinite("step-size update"));
    }
    if !(phi > 1.0) {
        return Err(invalid(format!("step-size phi must be > 1, got {phi}")));
    }
    let local = if df_norm_sq > 0.0 {
        phi * state.theta / (4.0 * state.lambda) * dx_norm_sq / df_norm_sq
    } else {
        f64::INFINITY
    };
    let next = (state.rho * state.lambda).min(local).min(state.lambda_bar);
    if !next.is_finite() || !(next > 0.0) {
        return Err(VIError::NonFinite("step-size update"));
    }
    Ok(StepSizeState { lambda: next, lambda_prev: state.lambda, theta: phi * next / state.lambda, ..*state })
}
