//! Parameter sweeps producing error tables with observed orders.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Result, SolverError};
use crate::scenarios::Scenario;
use crate::spectral::PhysicalGrid;
use crate::stepper::{run, Scheme, StepperConfig, DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE};

use super::{error_norms, NormKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Tau,
    Nu,
    /// Grid points per axis; truncation follows as `M/2 - 1`.
    Resolution,
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepAxis::Tau => "tau",
            SweepAxis::Nu => "nu",
            SweepAxis::Resolution => "resolution",
        })
    }
}

impl FromStr for SweepAxis {
    type Err = SolverError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tau" | "dt" => Ok(SweepAxis::Tau),
            "nu" | "viscosity" => Ok(SweepAxis::Nu),
            "resolution" | "grid" | "n" => Ok(SweepAxis::Resolution),
            other => Err(SolverError::invalid(format!("unknown sweep axis '{other}'"))),
        }
    }
}

/// Parameters held fixed across a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepBase {
    pub grid_points: usize,
    pub tau: f64,
    pub nu: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub scheme: Scheme,
}

impl SweepBase {
    pub fn new(grid_points: usize, tau: f64, nu: f64) -> Self {
        Self {
            grid_points,
            tau,
            nu,
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            scheme: Scheme::SemiImplicitIterative,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub vary: SweepAxis,
    pub values: Vec<f64>,
    pub base: SweepBase,
    pub horizon: f64,
    pub norms: Vec<NormKind>,
    pub scenario: Scenario,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(SolverError::invalid("sweep needs at least one value"));
        }
        let inc = self.values.windows(2).all(|w| w[1] > w[0]);
        let dec = self.values.windows(2).all(|w| w[1] < w[0]);
        if !(inc || dec) {
            return Err(SolverError::invalid("sweep values must be strictly monotone"));
        }
        if self.norms.is_empty() {
            return Err(SolverError::invalid("sweep needs at least one norm"));
        }
        if !self.scenario.has_exact_solution() {
            return Err(SolverError::invalid(format!(
                "scenario '{}' has no exact solution to compare against",
                self.scenario
            )));
        }
        if self.vary == SweepAxis::Resolution && self.values.iter().any(|v| v.fract() != 0.0) {
            return Err(SolverError::invalid("resolution values must be integers"));
        }
        Ok(())
    }

    /// Stepper configuration and grid for one sweep value.
    pub fn config_for(&self, value: f64) -> Result<(PhysicalGrid, StepperConfig)> {
        let b = &self.base;
        let (points, tau, nu) = match self.vary {
            SweepAxis::Tau => (b.grid_points, value, b.nu),
            SweepAxis::Nu => (b.grid_points, b.tau, value),
            SweepAxis::Resolution => (value as usize, b.tau, b.nu),
        };
        let grid = PhysicalGrid::new(points)?;
        let mut cfg = StepperConfig::new(tau, nu, grid.max_radius())
            .with_scheme(b.scheme)
            .with_tolerance(b.tolerance)
            .with_max_iterations(b.max_iterations)
            .with_monitored_orders(vec![]);
        if let Some(f) = self.scenario.forcing(grid) {
            cfg = cfg.with_forcing(f);
        }
        Ok((grid, cfg))
    }
}

/// `base / 2^k` for `k = 0..count`.
pub fn halvings(base: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| base / 2f64.powi(k as i32)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    /// One entry per requested norm, in order.
    pub errors: Vec<f64>,
    pub steps: usize,
    pub total_iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepFailure {
    pub index: usize,
    pub value: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub axis: SweepAxis,
    pub norms: Vec<NormKind>,
    pub rows: Vec<SweepRow>,
    /// `orders[i][j] = log₂(e_i / e_{i+1})` for norm `j`.
    pub orders: Vec<Vec<f64>>,
    /// First failing value; rows after it are dropped.
    pub failure: Option<SweepFailure>,
}

/// `log₂(e_k / e_{k+1})` for consecutive rows.
pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

fn run_value(spec: &SweepSpec, value: f64) -> Result<SweepRow> {
    let (grid, cfg) = spec.config_for(value)?;
    let u0 = spec.scenario.initial_velocity(grid)?;
    let out = run(&u0, &cfg, spec.horizon, &mut [])?;
    let exact = spec
        .scenario
        .exact_solution(spec.horizon, grid)
        .expect("validated: scenario has an exact solution")?;
    let errs = error_norms(&out.state, &exact, &spec.norms)?;
    Ok(SweepRow {
        value,
        errors: errs.values(),
        steps: out.steps,
        total_iterations: out.records.iter().map(|r| r.picard_iterations).sum(),
    })
}

/// Runs every sweep value (in parallel) and assembles the error table.
///
/// Results are merged by sweep index, so the table does not depend on
/// scheduling. A failing value truncates the table there and is reported in
/// [`SweepTable::failure`].
pub fn convergence_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let results: Vec<Result<SweepRow>> = spec.values.par_iter().map(|&v| run_value(spec, v)).collect();
    let mut rows = Vec::new();
    let mut failure = None;
    for (index, r) in results.into_iter().enumerate() {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => {
                failure = Some(SweepFailure {
                    index,
                    value: spec.values[index],
                    message: e.to_string(),
                });
                break;
            }
        }
    }
    let orders = (0..rows.len().saturating_sub(1))
        .map(|i| {
            (0..spec.norms.len())
                .map(|j| (rows[i].errors[j] / rows[i + 1].errors[j]).log2())
                .collect()
        })
        .collect();
    Ok(SweepTable {
        axis: spec.vary,
        norms: spec.norms.clone(),
        rows,
        orders,
        failure,
    })
}

impl SweepTable {
    /// Error column for one norm.
    pub fn column(&self, kind: NormKind) -> Option<Vec<f64>> {
        let j = self.norms.iter().position(|k| *k == kind)?;
        Some(self.rows.iter().map(|r| r.errors[j]).collect())
    }

    /// Consecutive error ratios `e_k / e_{k+1}` for one norm.
    pub fn ratios(&self, kind: NormKind) -> Option<Vec<f64>> {
        let c = self.column(kind)?;
        Some(c.windows(2).map(|w| w[0] / w[1]).collect())
    }

    /// CSV: a `#` comment line, a header, then one row per value with the
    /// observed order against the previous row (empty on the first row).
    pub fn to_csv(&self, comment: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {comment}");
        let mut header = vec![self.axis.to_string()];
        header.extend(self.norms.iter().map(|n| n.to_string()));
        header.extend(self.norms.iter().map(|n| format!("order_{n}")));
        let _ = writeln!(s, "{}", header.join(","));
        for (i, row) in self.rows.iter().enumerate() {
            let mut cells = vec![format!("{}", row.value)];
            cells.extend(row.errors.iter().map(|e| format!("{e:.6e}")));
            if i == 0 {
                cells.extend(self.norms.iter().map(|_| String::new()));
            } else {
                cells.extend(self.orders[i - 1].iter().map(|o| format!("{o:.4}")));
            }
            let _ = writeln!(s, "{}", cells.join(","));
        }
        if let Some(f) = &self.failure {
            let _ = writeln!(s, "# FAILED at {}={}: {}", self.axis, f.value, f.message);
        }
        s
    }

    /// Fixed-width text rendering for terminals.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "{:>12}", self.axis.to_string());
        for n in &self.norms {
            let _ = write!(s, " {:>12}", n.to_string());
        }
        for n in &self.norms {
            let _ = write!(s, " {:>9}", format!("ord_{n}"));
        }
        s.push('\n');
        for (i, row) in self.rows.iter().enumerate() {
            let _ = write!(s, "{:>12.6e}", row.value);
            for e in &row.errors {
                let _ = write!(s, " {:>12.4e}", e);
            }
            if i > 0 {
                for o in &self.orders[i - 1] {
                    let _ = write!(s, " {:>9.4}", o);
                }
            }
            s.push('\n');
        }
        if let Some(f) = &self.failure {
            let _ = writeln!(s, "FAILED at {}={}: {}", self.axis, f.value, f.message);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(values: Vec<f64>) -> SweepSpec {
        SweepSpec {
            vary: SweepAxis::Tau,
            values,
            base: SweepBase::new(16, 0.1, 1e-3),
            horizon: 0.2,
            norms: vec![NormKind::L2, NormKind::LInf],
            scenario: Scenario::Manufactured,
        }
    }

    #[test]
    fn halving_values() {
        assert_eq!(halvings(0.1, 3), vec![0.1, 0.05, 0.025]);
        assert_eq!(observed_orders(&[4.0, 2.0, 1.0]), vec![1.0, 1.0]);
    }

    #[test]
    fn single_value_sweep_has_no_orders() {
        let t = convergence_sweep(&spec(vec![0.1])).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert!(t.orders.is_empty());
        assert!(t.failure.is_none());
        let csv = t.to_csv("test");
        assert!(csv.starts_with("# test\ntau,L2,Linf,order_L2,order_Linf\n"));
    }

    #[test]
    fn spec_validation() {
        assert!(spec(vec![]).validate().is_err());
        assert!(spec(vec![0.1, 0.1]).validate().is_err());
        assert!(spec(vec![0.1, 0.05, 0.2]).validate().is_err());
        let mut s = spec(vec![0.1]);
        s.scenario = Scenario::GaussianVortices;
        assert!(s.validate().is_err());
    }

    #[test]
    fn failing_value_truncates_table() {
        // 0.3 does not divide the horizon 0.2
        let t = convergence_sweep(&spec(vec![0.1, 0.05, 0.03])).unwrap();
        assert_eq!(t.rows.len(), 2);
        let f = t.failure.unwrap();
        assert_eq!(f.index, 2);
    }
}
