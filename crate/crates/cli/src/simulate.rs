//! `simulate`: one run with snapshots, diagnostics CSV and a manifest echo.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use vislimit_core::diagnostics::{
    error_norms, parse_norm_list, vorticity_snapshot, EnergyMonitor, NormKind, ERROR_NORM_CONVENTION,
};
use vislimit_core::scenarios::Scenario;
use vislimit_core::snapshot::save_snapshot;
use vislimit_core::spectral::{inverse_vector, leray_project, truncate_vector};
use vislimit_core::stepper::{run, step_count, StepEvent, StepObserver};
use vislimit_core::{PhysicalGrid, Scheme, SolverError, SpectralVectorField, StepperConfig};

use crate::config::ConfigFile;
use crate::CliError;

const DEFAULT_SNAPSHOTS: usize = 10;

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Flat key=value file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// taylor-green[-m], double-shear, gaussian-vortices or manufactured.
    #[arg(long)]
    scenario: Option<String>,
    /// Exponent of the Taylor–Green family.
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    /// Grid points per axis.
    #[arg(long)]
    grid: Option<usize>,
    /// Final time; must be a whole number of steps.
    #[arg(long = "T")]
    horizon: Option<f64>,
    /// semi-implicit-iterative, semi-implicit-krylov or explicit.
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    max_iterations: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Steps between snapshots (default: ten snapshots per run).
    #[arg(long)]
    cadence: Option<usize>,
    /// Error norms for scenarios with an exact solution, e.g. L2,Linf,H1.
    #[arg(long)]
    norms: Option<String>,
    /// Recorded in the manifest; runs are deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct Manifest {
    pub scenario: Scenario,
    pub grid: usize,
    pub nu: f64,
    pub tau: f64,
    pub horizon: f64,
    pub scheme: Scheme,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub out: PathBuf,
    pub cadence: usize,
    pub norms: Vec<NormKind>,
    pub seed: u64,
}

impl Manifest {
    fn resolve(args: SimulateArgs) -> Result<Self, CliError> {
        let file = ConfigFile::load(args.config.as_deref())?;
        let mut scenario: Scenario = file.require(args.scenario, "scenario").and_then(|s: String| {
            s.parse().map_err(|e: SolverError| CliError::Usage(e.to_string()))
        })?;
        if let Some(m) = file.get(args.m, "m")? {
            match scenario {
                Scenario::TaylorGreen { .. } => scenario = Scenario::TaylorGreen { m },
                _ => return Err(CliError::Usage("--m only applies to the taylor-green scenario".into())),
            }
        }
        let tau: f64 = file.require(args.tau, "tau")?;
        let horizon: f64 = file.require(args.horizon, "T")?;
        let steps = step_count(horizon, tau)?;
        let defaults = StepperConfig::new(1.0, 0.0, 1);
        let scheme: String = file.or(args.scheme, "scheme", Scheme::SemiImplicitIterative.name().to_string())?;
        let norms: String = file.or(args.norms, "norms", "L2,Linf".to_string())?;
        let cadence = file.or(args.cadence, "cadence", (steps / DEFAULT_SNAPSHOTS).max(1))?;
        if cadence == 0 {
            return Err(CliError::Usage("--cadence must be at least 1".into()));
        }
        Ok(Self {
            scenario,
            grid: file.or(args.grid, "grid", 128)?,
            nu: file.require(args.nu, "nu")?,
            tau,
            horizon,
            scheme: scheme.parse()?,
            tolerance: file.or(args.tolerance, "tolerance", defaults.tolerance)?,
            max_iterations: file.or(args.max_iterations, "max-iterations", defaults.max_iterations)?,
            out: file.or(args.out, "out", PathBuf::from("out"))?,
            cadence,
            norms: parse_norm_list(&norms)?,
            seed: file.or(args.seed, "seed", 0)?,
        })
    }

    /// The manifest as `key=value` lines, readable back with `--config`.
    pub fn to_config(&self) -> String {
        let norms: Vec<String> = self.norms.iter().map(|n| n.to_string()).collect();
        let mut s = String::new();
        let _ = writeln!(s, "scenario={}", self.scenario);
        let _ = writeln!(s, "grid={}", self.grid);
        let _ = writeln!(s, "nu={:?}", self.nu);
        let _ = writeln!(s, "tau={:?}", self.tau);
        let _ = writeln!(s, "T={:?}", self.horizon);
        let _ = writeln!(s, "scheme={}", self.scheme);
        let _ = writeln!(s, "tolerance={:?}", self.tolerance);
        let _ = writeln!(s, "max-iterations={}", self.max_iterations);
        let _ = writeln!(s, "out={}", self.out.display());
        let _ = writeln!(s, "cadence={}", self.cadence);
        let _ = writeln!(s, "norms={}", norms.join(","));
        let _ = writeln!(s, "seed={}", self.seed);
        s
    }

    fn summary(&self) -> String {
        let mut s = self.to_config().lines().collect::<Vec<_>>().join(" ");
        if self.scenario.has_exact_solution() {
            s.push(' ');
            s.push_str(ERROR_NORM_CONVENTION);
        }
        s
    }
}

struct Snapshots {
    dir: PathBuf,
    cadence: usize,
    last_step: usize,
    written: usize,
    error: Option<SolverError>,
}

impl Snapshots {
    fn write(&mut self, step: usize, time: f64, u: &SpectralVectorField) {
        if self.error.is_some() {
            return;
        }
        let result = (|| {
            save_snapshot(self.dir.join(format!("vorticity_{step:06}.txt")), &vorticity_snapshot(u)?, time)?;
            save_snapshot(self.dir.join(format!("velocity_{step:06}.txt")), &inverse_vector(u)?, time)
        })();
        match result {
            Ok(()) => self.written += 1,
            Err(e) => self.error = Some(e),
        }
    }
}

impl StepObserver for Snapshots {
    fn observe(&mut self, event: &StepEvent<'_>) {
        if event.step % self.cadence == 0 || event.step == self.last_step {
            self.write(event.step, event.time, event.current);
        }
    }
}

/// Collects CSV rows as the run progresses so a failed run still leaves them.
struct Rows {
    scenario: Scenario,
    grid: PhysicalGrid,
    norms: Vec<NormKind>,
    lines: Vec<String>,
    last_errors: Vec<f64>,
    error: Option<SolverError>,
}

impl Rows {
    fn header(&self, orders: &[f64]) -> String {
        let mut cols = vec!["step", "time", "energy_L2", "norm_H1", "grad_L2"]
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>();
        cols.extend(orders.iter().map(|s| format!("norm_H{s}")));
        cols.push("iterations".into());
        if self.scenario.has_exact_solution() {
            cols.extend(self.norms.iter().map(|n| format!("err_{n}")));
        }
        cols.join(",")
    }

    fn push(&mut self, event: &StepEvent<'_>) {
        let r = event.record;
        let mut line = format!(
            "{},{:.10e},{:.16e},{:.16e},{:.16e}",
            r.step, r.time, r.l2_energy, r.h1_norm, r.gradient_norm
        );
        for (_, v) in &r.hs_norms {
            let _ = write!(line, ",{v:.16e}");
        }
        let _ = write!(line, ",{}", r.picard_iterations);
        if let Some(exact) = self.scenario.exact_solution(event.time, self.grid) {
            match exact.and_then(|e| error_norms(event.current, &e, &self.norms)) {
                Ok(errs) => {
                    self.last_errors = errs.values();
                    for v in &self.last_errors {
                        let _ = write!(line, ",{v:.16e}");
                    }
                }
                Err(e) => self.error = Some(e),
            }
        }
        self.lines.push(line);
    }
}

impl StepObserver for Rows {
    fn observe(&mut self, event: &StepEvent<'_>) {
        self.push(event);
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

pub fn execute(args: SimulateArgs) -> Result<(), CliError> {
    let manifest = Manifest::resolve(args)?;
    let grid = PhysicalGrid::new(manifest.grid)?;
    let mut cfg = StepperConfig::new(manifest.tau, manifest.nu, grid.max_radius())
        .with_scheme(manifest.scheme)
        .with_tolerance(manifest.tolerance)
        .with_max_iterations(manifest.max_iterations);
    if let Some(f) = manifest.scenario.forcing(grid) {
        cfg = cfg.with_forcing(f);
    }
    cfg.validate()?;
    let steps = step_count(manifest.horizon, manifest.tau)?;

    fs::create_dir_all(&manifest.out)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", manifest.out.display())))?;
    let snap_dir = manifest.out.join("snapshots");
    fs::create_dir_all(&snap_dir)?;
    write_file(&manifest.out.join("manifest.txt"), &manifest.to_config())?;

    let u0 = leray_project(&truncate_vector(&manifest.scenario.initial_velocity(grid)?, cfg.truncation)?);
    let mut snapshots = Snapshots {
        dir: snap_dir,
        cadence: manifest.cadence,
        last_step: steps,
        written: 0,
        error: None,
    };
    snapshots.write(0, 0.0, &u0);
    let mut rows = Rows {
        scenario: manifest.scenario,
        grid,
        norms: manifest.norms.clone(),
        lines: Vec::new(),
        last_errors: Vec::new(),
        error: None,
    };
    let mut energy = EnergyMonitor::default();
    let initial = vislimit_core::diagnostics::DiagnosticsRecord::capture(0, 0.0, &u0, &cfg.monitored_orders, 0)?;
    rows.push(&StepEvent {
        step: 0,
        time: 0.0,
        previous: &u0,
        current: &u0,
        iterations: 0,
        residual: 0.0,
        record: &initial,
    });

    let outcome = run(&u0, &cfg, manifest.horizon, &mut [&mut snapshots, &mut rows, &mut energy]);

    let mut csv = format!("# {}\n{}\n", manifest.summary(), rows.header(&cfg.monitored_orders));
    for line in &rows.lines {
        csv.push_str(line);
        csv.push('\n');
    }
    write_file(&manifest.out.join("diagnostics.csv"), &csv)?;

    let outcome = outcome?;
    if let Some(e) = snapshots.error.take().or(rows.error.take()) {
        return Err(e.into());
    }
    println!(
        "{}: {} steps to T={}, {} snapshots in {}",
        manifest.scenario,
        outcome.steps,
        manifest.horizon,
        snapshots.written,
        manifest.out.display()
    );
    if !manifest.scenario.is_forced() {
        let report = &energy.report;
        if report.passed() {
            println!("energy monitor: no increases");
        } else {
            eprintln!("warning: energy increased at {} steps", report.violations.len());
            for v in report.violations.iter().take(5) {
                eprintln!("  step {}: {:.16e} -> {:.16e}", v.step, v.before, v.after);
            }
        }
    }
    if manifest.scenario.has_exact_solution() {
        let named: Vec<String> = manifest
            .norms
            .iter()
            .zip(&rows.last_errors)
            .map(|(n, v)| format!("{n}={v:.6e}"))
            .collect();
        println!("errors at T: {}", named.join(" "));
    }
    Ok(())
}
