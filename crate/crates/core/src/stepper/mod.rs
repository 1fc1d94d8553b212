//! Time integration of the projected, truncated momentum equation.
//!
//! All schemes share the linear part: each step ends with the diagonal solve
//! `(I - τνΔ)^{-1}`. They differ in where the transported factor of
//! `u^n·∇(·)` is taken.

mod config;
mod krylov;
mod run;

pub use config::{
    Forcing, Scheme, StepperConfig, DEFAULT_KRYLOV_MAX_ITERATIONS, DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE,
};
pub use run::{run, step_count, RunOutcome, StepEvent, StepObserver};

use crate::error::{Result, SolverError};
use crate::spectral::{l2_norm, leray_project, truncate_vector, Advection, SpectralVectorField};

/// Outcome of a single time step.
#[derive(Debug, Clone)]
pub struct StepResult {
    pub state: SpectralVectorField,
    /// Picard sweeps or Krylov iterations spent on this step (1 for the
    /// explicit scheme).
    pub iterations_used: usize,
    /// Last Picard increment or Krylov residual (`L²`); 0 for the explicit scheme.
    pub final_residual: f64,
    /// `‖u^{(m+1)} - u^{(m)}‖_{L²}` for every Picard sweep, or the residual
    /// after every Krylov restart.
    pub residual_history: Vec<f64>,
}

/// `(I - τνΔ)^{-1}`: every coefficient divided by `1 + τν|k|²`.
pub fn implicit_viscous_solve(rhs: &SpectralVectorField, tau: f64, nu: f64) -> SpectralVectorField {
    if nu == 0.0 {
        return rhs.clone();
    }
    let a = tau * nu;
    rhs.map(|c| c.scale_modes(|k1, k2| 1.0 / (1.0 + a * (k1 * k1 + k2 * k2) as f64)))
}

/// `(I - τνΔ) v`, the operator inverted by [`implicit_viscous_solve`].
pub fn viscous_operator(v: &SpectralVectorField, tau: f64, nu: f64) -> SpectralVectorField {
    let a = tau * nu;
    v.map(|c| c.scale_modes(|k1, k2| 1.0 + a * (k1 * k1 + k2 * k2) as f64))
}

/// Advances one step with the scheme selected in `cfg`.
pub fn step(u_n: &SpectralVectorField, cfg: &StepperConfig, t_n: f64) -> Result<StepResult> {
    match cfg.scheme {
        Scheme::SemiImplicitIterative => picard_step(u_n, cfg, t_n),
        Scheme::SemiImplicitKrylov => krylov_step(u_n, cfg, t_n),
        Scheme::ExplicitGuoZou => explicit_step(u_n, cfg, t_n),
    }
}

/// State restricted to the configured radius, plus the common right-hand
/// side `u^n + τ Π_N P f(t_n)`.
fn prepare(u_n: &SpectralVectorField, cfg: &StepperConfig, t_n: f64) -> Result<(SpectralVectorField, SpectralVectorField)> {
    cfg.validate()?;
    if !u_n.is_finite() {
        return Err(SolverError::non_finite("state entering step"));
    }
    let u = truncate_vector(u_n, cfg.truncation)?;
    let rhs = match &cfg.forcing {
        None => u.clone(),
        Some(f) => {
            let f_n = f(t_n);
            if f_n.grid() != u.grid() {
                return Err(SolverError::invalid("forcing lives on a different grid"));
            }
            let f_n = leray_project(&truncate_vector(&f_n, cfg.truncation)?);
            u.axpy(cfg.tau, &f_n)
        }
    };
    Ok((u, rhs))
}

fn finite_or_err(v: SpectralVectorField, what: &str) -> Result<SpectralVectorField> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SolverError::non_finite(what.to_string()))
    }
}

/// Semi-implicit step resolved by fixed-point iteration:
/// `u^{(m+1)} = (I - τνΔ)^{-1}[u^n - τ Π_N P(u^n·∇u^{(m)}) + τ Π_N P f_n]`
/// from `u^{(0)} = u^n` until the `L²` increment drops below `cfg.tolerance`.
pub fn picard_step(u_n: &SpectralVectorField, cfg: &StepperConfig, t_n: f64) -> Result<StepResult> {
    let (u, rhs) = prepare(u_n, cfg, t_n)?;
    let transport = Advection::new(&u);
    let mut current = u;
    let mut history = Vec::new();
    for it in 1..=cfg.max_iterations {
        let conv = transport.apply(&current)?;
        let next = implicit_viscous_solve(&rhs.axpy(-cfg.tau, &conv), cfg.tau, cfg.nu);
        let increment = l2_norm(&(&next - &current));
        if !increment.is_finite() || !next.is_finite() {
            return Err(SolverError::Diverged {
                iteration: it,
                residual: history.last().copied().unwrap_or(f64::NAN),
            });
        }
        history.push(increment);
        current = next;
        if increment < cfg.tolerance {
            return Ok(StepResult {
                state: current,
                iterations_used: it,
                final_residual: increment,
                residual_history: history,
            });
        }
    }
    Err(SolverError::IterationLimit {
        iterations: cfg.max_iterations,
        residual: history.last().copied().unwrap_or(f64::NAN),
    })
}

/// Comparison scheme with the transported factor at `u^n`:
/// `u^{n+1} = (I - τνΔ)^{-1}[u^n - τ Π_N P(u^n·∇u^n) + τ Π_N P f_n]`.
pub fn explicit_step(u_n: &SpectralVectorField, cfg: &StepperConfig, t_n: f64) -> Result<StepResult> {
    let (u, rhs) = prepare(u_n, cfg, t_n)?;
    let conv = Advection::new(&u).apply(&u)?;
    let next = implicit_viscous_solve(&rhs.axpy(-cfg.tau, &conv), cfg.tau, cfg.nu);
    Ok(StepResult {
        state: finite_or_err(next, "explicit step")?,
        iterations_used: 1,
        final_residual: 0.0,
        residual_history: Vec::new(),
    })
}

/// Semi-implicit step solved directly: finds `v` with
/// `(I - τνΔ)v + τ Π_N P(u^n·∇v) = u^n + τ Π_N P f_n`
/// to an absolute `L²` residual below `cfg.tolerance`.
pub fn krylov_step(u_n: &SpectralVectorField, cfg: &StepperConfig, t_n: f64) -> Result<StepResult> {
    let (u, rhs) = prepare(u_n, cfg, t_n)?;
    let transport = Advection::new(&u);
    let solve = krylov::solve(&transport, &rhs, cfg.tau, cfg.nu, cfg.tolerance, cfg.krylov_max_iterations)?;
    Ok(StepResult {
        state: finite_or_err(solve.solution, "Krylov solution")?,
        iterations_used: solve.iterations,
        final_residual: solve.residual,
        residual_history: solve.restart_residuals,
    })
}
