use crate::stepper::{StepEvent, StepObserver};
use crate::spectral::homogeneous_norm;

use super::DiagnosticsRecord;

/// Slack allowed when checking `‖u^{n+1}‖ <= ‖u^n‖`.
pub const ENERGY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub step: usize,
    pub before: f64,
    pub after: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EnergyReport {
    pub violations: Vec<Violation>,
    /// Set when the run was forced and the check does not apply.
    pub disabled: bool,
}

impl EnergyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Scans consecutive records for `L²` growth beyond [`ENERGY_TOLERANCE`].
/// Forced runs are not checked.
pub fn energy_monitor(records: &[DiagnosticsRecord], forced: bool) -> EnergyReport {
    if forced {
        return EnergyReport {
            violations: Vec::new(),
            disabled: true,
        };
    }
    let violations = records
        .windows(2)
        .filter(|w| w[1].l2_energy > w[0].l2_energy + ENERGY_TOLERANCE)
        .map(|w| Violation {
            step: w[1].step,
            before: w[0].l2_energy,
            after: w[1].l2_energy,
        })
        .collect();
    EnergyReport {
        violations,
        disabled: false,
    }
}

/// Online version of [`energy_monitor`].
#[derive(Debug, Default)]
pub struct EnergyMonitor {
    pub report: EnergyReport,
    last: Option<f64>,
}

impl StepObserver for EnergyMonitor {
    fn observe(&mut self, event: &StepEvent<'_>) {
        let before = self.last.unwrap_or_else(|| crate::spectral::l2_norm(event.previous));
        let after = event.record.l2_energy;
        if after > before + ENERGY_TOLERANCE {
            self.report.violations.push(Violation {
                step: event.step,
                before,
                after,
            });
        }
        self.last = Some(after);
    }
}

/// Checks `‖∇u^{n+1}‖² + ‖∇(u^{n+1} - u^n)‖² <= ‖∇u^n‖² + tolerance` each step.
#[derive(Debug)]
pub struct GradientDissipationMonitor {
    pub tolerance: f64,
    pub violations: Vec<Violation>,
    /// Largest observed `lhs - rhs`.
    pub worst_excess: f64,
    pub steps_checked: usize,
}

impl GradientDissipationMonitor {
    pub fn new(tolerance: f64) -> Self {
        Self {
            tolerance,
            violations: Vec::new(),
            worst_excess: f64::NEG_INFINITY,
            steps_checked: 0,
        }
    }
}

impl StepObserver for GradientDissipationMonitor {
    fn observe(&mut self, event: &StepEvent<'_>) {
        let g = |v| homogeneous_norm(v, 1.0).expect("order 1 is valid").powi(2);
        let before = g(event.previous);
        let after = g(event.current) + g(&(event.current - event.previous));
        self.steps_checked += 1;
        self.worst_excess = self.worst_excess.max(after - before);
        if after > before + self.tolerance {
            self.violations.push(Violation {
                step: event.step,
                before,
                after,
            });
        }
    }
}
