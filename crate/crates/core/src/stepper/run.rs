use crate::diagnostics::DiagnosticsRecord;
use crate::error::{Result, SolverError};
use crate::spectral::{leray_project, truncate_vector, SpectralVectorField};

use super::{step, StepperConfig};

/// What an observer sees after each completed step.
#[derive(Debug)]
pub struct StepEvent<'a> {
    pub step: usize,
    pub time: f64,
    pub previous: &'a SpectralVectorField,
    pub current: &'a SpectralVectorField,
    pub iterations: usize,
    pub residual: f64,
    pub record: &'a DiagnosticsRecord,
}

/// Per-step callback.
pub trait StepObserver {
    fn observe(&mut self, event: &StepEvent<'_>);
}

impl<F: FnMut(&StepEvent<'_>)> StepObserver for F {
    fn observe(&mut self, event: &StepEvent<'_>) {
        self(event)
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub state: SpectralVectorField,
    /// One record for the initial state (step 0) and one per step.
    pub records: Vec<DiagnosticsRecord>,
    pub steps: usize,
}

/// Number of steps covering `[0, horizon]`; the horizon must be a whole
/// number of steps.
pub fn step_count(horizon: f64, tau: f64) -> Result<usize> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(SolverError::invalid(format!("horizon must be > 0, got {horizon}")));
    }
    let n = (horizon / tau).round();
    if n < 1.0 || n > u32::MAX as f64 {
        return Err(SolverError::invalid(format!(
            "horizon {horizon} with tau {tau} gives an unusable step count"
        )));
    }
    if (n * tau - horizon).abs() > 1e-9 * horizon.max(tau) {
        return Err(SolverError::invalid(format!(
            "horizon {horizon} is not a whole number of steps of size {tau}"
        )));
    }
    Ok(n as usize)
}

/// Integrates from `u0` to `horizon`.
///
/// The initial data is truncated to `cfg.truncation` and Leray-projected
/// first. Step `n` samples the forcing at `t_n = n·τ`.
pub fn run(
    u0: &SpectralVectorField,
    cfg: &StepperConfig,
    horizon: f64,
    observers: &mut [&mut dyn StepObserver],
) -> Result<RunOutcome> {
    cfg.validate()?;
    let steps = step_count(horizon, cfg.tau)?;
    let mut state = leray_project(&truncate_vector(u0, cfg.truncation)?);
    let mut records = Vec::with_capacity(steps + 1);
    records.push(DiagnosticsRecord::capture(0, 0.0, &state, &cfg.monitored_orders, 0)?);
    for n in 0..steps {
        let t_n = n as f64 * cfg.tau;
        let result = step(&state, cfg, t_n).map_err(|e| SolverError::StepFailed {
            step: n + 1,
            time: t_n,
            source: Box::new(e),
        })?;
        let time = (n + 1) as f64 * cfg.tau;
        let record = DiagnosticsRecord::capture(n + 1, time, &result.state, &cfg.monitored_orders, result.iterations_used)?;
        let event = StepEvent {
            step: n + 1,
            time,
            previous: &state,
            current: &result.state,
            iterations: result.iterations_used,
            residual: result.final_residual,
            record: &record,
        };
        for obs in observers.iter_mut() {
            obs.observe(&event);
        }
        records.push(record);
        state = result.state;
    }
    Ok(RunOutcome { state, records, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::taylor_green_family;
    use crate::spectral::{l2_norm, PhysicalGrid};

    #[test]
    fn step_counts() {
        assert_eq!(step_count(0.1, 0.1).unwrap(), 1);
        assert_eq!(step_count(2.0, 0.1 / 32.0).unwrap(), 640);
        assert!(step_count(1.0, 0.3).is_err());
        assert!(step_count(0.0, 0.1).is_err());
    }

    #[test]
    fn single_step_horizon() {
        let g = PhysicalGrid::new(16).unwrap();
        let u0 = taylor_green_family(2, g).unwrap();
        let cfg = StepperConfig::new(0.01, 1e-3, 7);
        let mut count = 0;
        let mut counter = |_: &StepEvent<'_>| count += 1;
        let out = run(&u0, &cfg, 0.01, &mut [&mut counter]).unwrap();
        assert_eq!(out.steps, 1);
        assert_eq!(out.records.len(), 2);
        assert_eq!(count, 1);
    }

    #[test]
    fn failures_carry_step_index() {
        let g = PhysicalGrid::new(16).unwrap();
        let u0 = taylor_green_family(8, g).unwrap();
        let cfg = StepperConfig::new(5.0, 0.0, 7).with_max_iterations(3);
        match run(&u0, &cfg, 10.0, &mut []) {
            Err(SolverError::StepFailed { step, .. }) => assert_eq!(step, 1),
            other => panic!("expected step failure, got {other:?}"),
        }
    }

    #[test]
    fn identical_runs_are_bit_identical() {
        let g = PhysicalGrid::new(32).unwrap();
        let u0 = taylor_green_family(2, g).unwrap();
        let cfg = StepperConfig::new(0.01, 1e-3, 15);
        let a = run(&u0, &cfg, 0.1, &mut []).unwrap();
        let b = run(&u0, &cfg, 0.1, &mut []).unwrap();
        assert_eq!(a.state, b.state);
        assert!(l2_norm(&a.state) > 0.0);
    }
}
