//! Trajectory certificates for the one-step descent inequality and its
//! telescoped form.
//!
//! For an accepted golden-ratio step and any probe point `p` the iterates satisfy
//!
//! ```text
//! r‖x̄ᵏ⁺¹−p‖² + θₖ/2‖xᵏ⁺¹−xᵏ‖² + 2λₖΨ(p,xᵏ)
//!   ≤ r‖x̄ᵏ−p‖² + θₖ₋₁/2‖xᵏ−xᵏ⁻¹‖² + tail,    r = φₖ₊₁/(φₖ₊₁−1)
//! ```
//!
//! where, with `c = λₖφₖ/λₖ₋₁`,
//! `tail = −c‖xᵏ−x̄ᵏ‖² + (c−1−1/φₖ₊₁)‖xᵏ⁺¹−x̄ᵏ‖² − (c−θₖ)‖xᵏ⁺¹−xᵏ‖²`.
//! A pass without momentum (`φₖ = ∞`, `x̄ᵏ = xᵏ`) uses the equivalent form
//! `2(λₖ/λₖ₋₁)⟨xᵏ−x̄ᵏ⁻¹, xᵏ⁺¹−xᵏ⟩ − (1+1/φₖ₊₁)‖xᵏ⁺¹−x̄ᵏ‖² + θₖ‖xᵏ⁺¹−xᵏ‖²`,
//! which is the finite expression before `xᵏ−x̄ᵏ⁻¹ = φₖ(xᵏ−x̄ᵏ)` is substituted.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::linalg::{dist_sq, Vector};
use crate::problem::VIProblem;
use crate::rng::make_rng;
use crate::solvers::RunObserver;
use crate::trace::TraceRow;

/// Everything one accepted step contributes to the descent inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct DescentWindow {
    pub x_prev: Vector,
    pub x: Vector,
    pub x_next: Vector,
    pub x_bar_prev: Vector,
    pub x_bar: Vector,
    pub x_bar_next: Vector,
    pub lambda_prev: f64,
    pub lambda: f64,
    pub theta_prev: f64,
    pub theta: f64,
    /// `φₖ`; infinite for a pass without momentum.
    pub phi: f64,
    /// `φₖ₊₁`; infinite when the next pass has no momentum.
    pub phi_next: f64,
}

fn ratio(phi: f64) -> f64 {
    if phi.is_infinite() {
        1.0
    } else {
        phi / (phi - 1.0)
    }
}

fn inv(phi: f64) -> f64 {
    if phi.is_infinite() {
        0.0
    } else {
        1.0 / phi
    }
}

impl DescentWindow {
    fn check(&self) -> Result<()> {
        if !(self.phi > 1.0) || !(self.phi_next > 1.0) {
            return Err(invalid(format!("momentum parameters must exceed 1, got {} and {}", self.phi, self.phi_next)));
        }
        if !(self.lambda > 0.0) || !(self.lambda_prev > 0.0) {
            return Err(invalid("step sizes must be positive"));
        }
        Ok(())
    }

    /// The three trailing terms (non-positive along admissible runs).
    pub fn tail(&self) -> f64 {
        let step = dist_sq(&self.x_next, &self.x);
        let to_anchor = dist_sq(&self.x_next, &self.x_bar);
        if self.phi.is_infinite() {
            let cross = (&self.x - &self.x_bar_prev).dot(&(&self.x_next - &self.x));
            2.0 * self.lambda / self.lambda_prev * cross - (1.0 + inv(self.phi_next)) * to_anchor + self.theta * step
        } else {
            let c = self.lambda / self.lambda_prev * self.phi;
            -c * dist_sq(&self.x, &self.x_bar) + (c - 1.0 - inv(self.phi_next)) * to_anchor - (c - self.theta) * step
        }
    }
}

/// A probe point with `F(p)` and `g(p)` cached.
#[derive(Debug, Clone)]
pub struct Probe {
    pub x: Vector,
    pub f: Vector,
    pub g: f64,
}

impl Probe {
    pub fn new(problem: &VIProblem, x: Vector) -> Result<Self> {
        problem.check_dim(&x)?;
        let f = problem.apply(&x);
        let g = problem.g(&x)?;
        Ok(Self { x, f, g })
    }

    /// `Ψ(p, y) = ⟨F(p), y − p⟩ + g(y) − g(p)`.
    pub fn psi(&self, problem: &VIProblem, y: &Vector) -> Result<f64> {
        Ok(self.f.dot(&(y - &self.x)) + problem.g(y)? - self.g)
    }
}

/// Both sides of the inequality at one probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentSides {
    pub lhs: f64,
    pub rhs: f64,
    pub psi: f64,
    pub tail: f64,
}

impl DescentSides {
    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }
}

pub fn descent_sides(problem: &VIProblem, w: &DescentWindow, probe: &Probe) -> Result<DescentSides> {
    w.check()?;
    let r = ratio(w.phi_next);
    let psi = probe.psi(problem, &w.x)?;
    let tail = w.tail();
    let lhs = r * dist_sq(&w.x_bar_next, &probe.x) + 0.5 * w.theta * dist_sq(&w.x_next, &w.x) + 2.0 * w.lambda * psi;
    let rhs = r * dist_sq(&w.x_bar, &probe.x) + 0.5 * w.theta_prev * dist_sq(&w.x, &w.x_prev) + tail;
    Ok(DescentSides { lhs, rhs, psi, tail })
}

/// `RHS − LHS` of the descent inequality at `probe_x`; non-negative when it holds.
pub fn check_descent_inequality(problem: &VIProblem, window: &DescentWindow, probe_x: &Vector) -> Result<f64> {
    let probe = Probe::new(problem, probe_x.clone())?;
    Ok(descent_sides(problem, window, &probe)?.slack())
}

/// Default localization radius: twice the distance from the start to the
/// reference solution, or 10 without a reference.
pub fn default_radius(problem: &VIProblem) -> f64 {
    match &problem.reference {
        Some(r) => {
            let d = 2.0 * (&problem.x0 - r).norm();
            if d > 0.0 {
                d
            } else {
                10.0
            }
        }
        None => 10.0,
    }
}

/// The reference solution (when known) followed by seeded samples of
/// `dom g ∩ B(x⁰, radius)`, `count` points in total.
pub fn probe_set(problem: &VIProblem, count: usize, radius: f64, seed: u64) -> Result<Vec<Probe>> {
    let mut probes = Vec::with_capacity(count);
    if let Some(r) = &problem.reference {
        if count > 0 {
            probes.push(Probe::new(problem, r.clone())?);
        }
    }
    let mut rng = make_rng(seed);
    while probes.len() < count {
        let x = problem.sample_near(&mut rng, &problem.x0, radius);
        probes.push(Probe::new(problem, x)?);
    }
    Ok(probes)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationSlack {
    pub iter: u64,
    pub min_slack: f64,
    /// `min_p slack / (1 + ‖p‖²)`.
    pub min_scaled_slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub problem: String,
    pub method: String,
    pub monotone: bool,
    pub probes: usize,
    pub windows: usize,
    /// Per-step tolerance factor: a step passes at `p` when
    /// `slack ≥ −tolerance·(1 + ‖p‖²)`.
    pub tolerance: f64,
    pub min_slack: f64,
    pub min_scaled_slack: f64,
    pub violations: usize,
    pub per_iteration: Vec<IterationSlack>,
    /// Sum of per-step slacks at the first probe.
    pub cumulative_slack: f64,
    /// `cumulative_tolerance·T`.
    pub cumulative_bound: f64,
    /// `RHS − LHS` of the telescoped inequality at the first probe.
    pub telescoped_slack: f64,
    /// Sum of the trailing terms over all windows.
    pub d_estimate: f64,
    /// Largest right-hand side of the telescoped inequality over the probes.
    pub m_estimate: f64,
    pub passed: bool,
}

/// Run observer that evaluates every emitted descent window at a fixed probe set.
pub struct CertificateMonitor<'a> {
    problem: &'a VIProblem,
    probes: Vec<Probe>,
    probe_scale: Vec<f64>,
    pub tolerance: f64,
    pub cumulative_tolerance: f64,
    per_iteration: Vec<IterationSlack>,
    min_slack: f64,
    min_scaled: f64,
    violations: usize,
    cumulative: f64,
    d_sum: f64,
    /// `r‖x̄¹−p‖² + θ₀/2‖x¹−x⁰‖²` of the first window, per probe.
    initial: Option<Vec<f64>>,
    /// `Σ 2λₖΨ(p, xᵏ)` per probe.
    psi_sums: Vec<f64>,
    /// `r‖x̄ᵀ−p‖² + θ/2‖xᵀ−xᵀ⁻¹‖²` of the last window, per probe.
    terminal: Vec<f64>,
    error: Option<crate::error::VIError>,
}

impl<'a> CertificateMonitor<'a> {
    pub fn new(problem: &'a VIProblem, probes: Vec<Probe>, tolerance: f64) -> Self {
        let k = probes.len();
        let probe_scale = probes.iter().map(|p| 1.0 + p.x.norm_squared()).collect();
        Self {
            problem,
            probes,
            probe_scale,
            tolerance,
            cumulative_tolerance: 1e-6,
            per_iteration: Vec::new(),
            min_slack: f64::INFINITY,
            min_scaled: f64::INFINITY,
            violations: 0,
            cumulative: 0.0,
            d_sum: 0.0,
            initial: None,
            psi_sums: vec![0.0; k],
            terminal: vec![0.0; k],
            error: None,
        }
    }

    pub fn windows(&self) -> usize {
        self.per_iteration.len()
    }

    fn record(&mut self, iter: u64, w: &DescentWindow) -> Result<()> {
        let mut it_min = f64::INFINITY;
        let mut it_scaled = f64::INFINITY;
        let mut first = Vec::new();
        let r_prev = ratio(w.phi_next);
        for (i, probe) in self.probes.iter().enumerate() {
            let sides = descent_sides(self.problem, w, probe)?;
            let s = sides.slack();
            let scaled = s / self.probe_scale[i];
            if !s.is_finite() {
                return Err(crate::error::VIError::NonFinite("descent certificate"));
            }
            if scaled < -self.tolerance {
                self.violations += 1;
            }
            it_min = it_min.min(s);
            it_scaled = it_scaled.min(scaled);
            if i == 0 {
                self.cumulative += s;
            }
            self.psi_sums[i] += 2.0 * w.lambda * sides.psi;
            self.terminal[i] = sides.lhs - 2.0 * w.lambda * sides.psi;
            if self.initial.is_none() {
                first.push(r_prev * dist_sq(&w.x_bar, &probe.x) + 0.5 * w.theta_prev * dist_sq(&w.x, &w.x_prev));
            }
        }
        if self.initial.is_none() {
            self.initial = Some(first);
        }
        self.d_sum += w.tail();
        self.min_slack = self.min_slack.min(it_min);
        self.min_scaled = self.min_scaled.min(it_scaled);
        self.per_iteration.push(IterationSlack { iter, min_slack: it_min, min_scaled_slack: it_scaled });
        Ok(())
    }

    /// Fails if any window could not be evaluated.
    pub fn report(self, method: &str) -> Result<CertificateReport> {
        if let Some(e) = self.error {
            return Err(e);
        }
        let t = self.per_iteration.len();
        let initial = self.initial.unwrap_or_else(|| vec![0.0; self.probes.len()]);
        let rhs: Vec<f64> = initial.iter().map(|v| v + self.d_sum).collect();
        let telescoped =
            if self.probes.is_empty() || t == 0 { 0.0 } else { rhs[0] - (self.terminal[0] + self.psi_sums[0]) };
        let cumulative_bound = self.cumulative_tolerance * t as f64;
        let min_scaled = if t == 0 { 0.0 } else { self.min_scaled };
        Ok(CertificateReport {
            problem: self.problem.name.clone(),
            method: method.to_string(),
            monotone: self.problem.monotone,
            probes: self.probes.len(),
            windows: t,
            tolerance: self.tolerance,
            min_slack: if t == 0 { 0.0 } else { self.min_slack },
            min_scaled_slack: min_scaled,
            violations: self.violations,
            per_iteration: self.per_iteration,
            cumulative_slack: self.cumulative,
            cumulative_bound,
            telescoped_slack: telescoped,
            d_estimate: self.d_sum,
            m_estimate: rhs.iter().copied().fold(f64::NEG_INFINITY, f64::max).max(0.0),
            passed: self.violations == 0 && self.cumulative >= -cumulative_bound,
        })
    }
}

impl RunObserver for CertificateMonitor<'_> {
    fn on_row(&mut self, row: &TraceRow, _x: &Vector, window: Option<&DescentWindow>) {
        if self.error.is_some() {
            return;
        }
        if let Some(w) = window {
            if let Err(e) = self.record(row.iter, w) {
                self.error = Some(e);
            }
        }
    }
}
