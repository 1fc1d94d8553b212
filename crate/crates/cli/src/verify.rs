//! `verify`: fast invariant checks with one pass/fail line each.

use std::time::Instant;

use clap::Args;
use vislimit_core::diagnostics::{EnergyMonitor, GradientDissipationMonitor};
use vislimit_core::scenarios::{manufactured_forcing, manufactured_velocity, ForcingModel, Scenario, DOUBLE_SHEAR_RHO};
use vislimit_core::spectral::{
    forward_transform, gradient, inner_product, inverse_vector, l2_norm, leray_project, truncate_vector, Advection,
};
use vislimit_core::stepper::{picard_step, run};
use vislimit_core::testing::{direct_transport, random_scalar, random_solenoidal, random_unit_sobolev, random_vector, seeded};
use vislimit_core::{PhysicalGrid, Scheme, SolverError, SpectralVectorField, StepperConfig};

use crate::CliError;

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Print the available checks and exit.
    #[arg(long)]
    list: bool,
    /// Run only these checks (repeatable or comma-separated).
    #[arg(long, value_delimiter = ',')]
    check: Vec<String>,
    /// Time step for the contraction, energy and H1 checks.
    #[arg(long)]
    tau: Option<f64>,
    /// Viscosity for the contraction, energy and H1 checks.
    #[arg(long)]
    nu: Option<f64>,
    /// Seed for the random fields.
    #[arg(long, default_value_t = 2024)]
    seed: u64,
}

struct Params {
    tau: Option<f64>,
    nu: Option<f64>,
    seed: u64,
}

type Check = fn(&Params) -> Result<String, String>;

const TOL: f64 = 1e-12;
const FIELDS: usize = 20;

const CHECKS: [(&str, &str, Check); 10] = [
    ("round-trip", "inverse then forward transform reproduces coefficients", round_trip),
    ("parseval", "grid quadrature of |u|² equals the coefficient sum", parseval),
    ("truncation", "Π_N is an idempotent self-adjoint projection", truncation),
    ("leray", "Leray projection is idempotent, kills gradients, outputs divergence-free fields", leray),
    ("orthogonality", "<Π_N P(a·∇b), b> = 0 for divergence-free a, b", orthogonality),
    ("convolution", "dealiased product equals direct convolution on small grids", convolution),
    ("contraction", "Picard increments shrink by at least half per iteration (random states and the m=2 vortex)", contraction),
    ("energy", "L² energy never increases on unforced benchmarks", energy),
    ("h1-dissipation", "gradient energy inequality on the m=2 vortex", h1_dissipation),
    ("forcing", "manufactured forcing equals -u_e", forcing),
];

fn max_coeff(v: &SpectralVectorField) -> f64 {
    v.u1().max_abs_coefficient().max(v.u2().max_abs_coefficient())
}

fn worst_of(name: &str, worst: f64, tol: f64) -> Result<String, String> {
    let msg = format!("worst {name} {worst:.2e} (tolerance {tol:.0e})");
    if worst <= tol {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn grid(points: usize) -> PhysicalGrid {
    PhysicalGrid::new(points).expect("valid grid size")
}

fn round_trip(p: &Params) -> Result<String, String> {
    let g = grid(32);
    let mut rng = seeded(p.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..FIELDS {
        let f = random_vector(&mut rng, g, g.max_radius());
        let back = inverse_vector(&f).and_then(|x| forward_transform(&x)).map_err(|e| e.to_string())?;
        let back = SpectralVectorField::new(back[0].clone(), back[1].clone()).map_err(|e| e.to_string())?;
        worst = worst.max(max_coeff(&(&f - &back)) / max_coeff(&f));
    }
    worst_of("relative defect", worst, TOL)
}

fn parseval(p: &Params) -> Result<String, String> {
    let g = grid(32);
    let mut rng = seeded(p.seed);
    let h2 = g.spacing().powi(2);
    let mut worst: f64 = 0.0;
    for _ in 0..FIELDS {
        let f = random_vector(&mut rng, g, g.max_radius());
        let phys = inverse_vector(&f).map_err(|e| e.to_string())?;
        let quad: f64 = (0..2).map(|c| phys.component(c).iter().map(|v| v * v).sum::<f64>()).sum::<f64>() * h2;
        let spec = l2_norm(&f).powi(2);
        worst = worst.max((quad - spec).abs() / spec);
    }
    worst_of("relative defect", worst, TOL)
}

fn truncation(p: &Params) -> Result<String, String> {
    let g = grid(32);
    let mut rng = seeded(p.seed);
    let mut worst: f64 = 0.0;
    for i in 0..FIELDS {
        let n = 1 + i % g.max_radius();
        let f = random_vector(&mut rng, g, g.max_radius());
        let h = random_vector(&mut rng, g, g.max_radius());
        let tf = truncate_vector(&f, n).map_err(|e| e.to_string())?;
        let ttf = truncate_vector(&tf, n).map_err(|e| e.to_string())?;
        worst = worst.max(max_coeff(&(&tf - &ttf)) / max_coeff(&f));
        let th = truncate_vector(&h, n).map_err(|e| e.to_string())?;
        let lhs = inner_product(&tf, &h).map_err(|e| e.to_string())?;
        let rhs = inner_product(&f, &th).map_err(|e| e.to_string())?;
        worst = worst.max((lhs - rhs).abs() / (l2_norm(&f) * l2_norm(&h)));
    }
    worst_of("relative defect", worst, TOL)
}

fn leray(p: &Params) -> Result<String, String> {
    let g = grid(32);
    let mut rng = seeded(p.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..FIELDS {
        let f = random_vector(&mut rng, g, g.max_radius());
        let pf = leray_project(&f);
        worst = worst.max(max_coeff(&(&pf - &leray_project(&pf))) / max_coeff(&f));
        worst = worst.max(pf.divergence_defect());
        let grad = gradient(&random_scalar(&mut rng, g, g.max_radius()));
        worst = worst.max(max_coeff(&leray_project(&grad)) / max_coeff(&grad));
    }
    worst_of("relative defect", worst, TOL)
}

fn orthogonality(p: &Params) -> Result<String, String> {
    let g = grid(32);
    let mut rng = seeded(p.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..FIELDS {
        let a = random_solenoidal(&mut rng, g, g.max_radius());
        let b = random_solenoidal(&mut rng, g, g.max_radius());
        let t = Advection::new(&a).apply(&b).map_err(|e| e.to_string())?;
        let dot = inner_product(&t, &b).map_err(|e| e.to_string())?;
        worst = worst.max(dot.abs() / (l2_norm(&t) * l2_norm(&b)));
    }
    worst_of("relative inner product", worst, TOL)
}

fn convolution(p: &Params) -> Result<String, String> {
    let mut rng = seeded(p.seed);
    let mut worst: f64 = 0.0;
    for (points, radius) in [(8, 2), (12, 4), (16, 5)] {
        let g = grid(points);
        for _ in 0..FIELDS / 3 + 1 {
            let a = random_solenoidal(&mut rng, g, radius);
            let b = random_vector(&mut rng, g, radius);
            let fast = Advection::new(&a).apply(&b).map_err(|e| e.to_string())?;
            let slow = direct_transport(&a, &b);
            worst = worst.max(max_coeff(&(&fast - &slow)) / max_coeff(&slow));
        }
    }
    worst_of("relative defect", worst, TOL)
}

fn contraction(p: &Params) -> Result<String, String> {
    let g = grid(32);
    let n = g.max_radius();
    let nu = p.nu.unwrap_or(1e-3);
    let tau = p.tau.unwrap_or((0.01 * nu).min(0.1 / n as f64));
    let mut rng = seeded(p.seed);
    let mut states: Vec<(String, SpectralVectorField)> = (0..10)
        .map(|i| (format!("random state {i}"), random_unit_sobolev(&mut rng, g, n, 3.0)))
        .collect();
    let vortex = Scenario::TaylorGreen { m: 2 };
    states.push((vortex.to_string(), vortex.initial_velocity(g).map_err(|e| e.to_string())?));
    let mut worst: f64 = 0.0;
    for (label, u) in &states {
        let cfg = StepperConfig::new(tau, nu, n);
        let r = picard_step(u, &cfg, 0.0).map_err(|e| format!("tau={tau:e} nu={nu:e}, {label}: {e}"))?;
        for w in r.residual_history.windows(2) {
            worst = worst.max(w[1] / w[0]);
        }
    }
    let msg = format!("tau={tau:e} nu={nu:e}, worst increment ratio {worst:.3e} (limit 0.5)");
    if worst <= 0.5 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn energy(p: &Params) -> Result<String, String> {
    let g = grid(32);
    let nu = p.nu.unwrap_or(1e-4);
    let taus = p.tau.map_or(vec![1e-3, 1e-2, 1e-1, 1.0], |t| vec![t]);
    let mut violations = Vec::new();
    let mut runs = 0;
    for scenario in [Scenario::TaylorGreen { m: 2 }, Scenario::DoubleShear { rho0: DOUBLE_SHEAR_RHO }] {
        let u0 = scenario.initial_velocity(g).map_err(|e| e.to_string())?;
        for &tau in &taus {
            let cfg = StepperConfig::new(tau, nu, g.max_radius()).with_tolerance(1e-13);
            let mut monitor = EnergyMonitor::default();
            let mut result = run(&u0, &cfg, 20.0 * tau, &mut [&mut monitor]);
            if matches!(result, Err(SolverError::StepFailed { .. })) {
                monitor = EnergyMonitor::default();
                let krylov = cfg.clone().with_scheme(Scheme::SemiImplicitKrylov);
                result = run(&u0, &krylov, 20.0 * tau, &mut [&mut monitor]);
            }
            runs += 1;
            match result {
                Err(e) => violations.push(format!("{scenario} tau={tau}: {e}")),
                Ok(_) => {
                    for v in &monitor.report.violations {
                        violations.push(format!("{scenario} tau={tau} step {}: {:.3e} > {:.3e}", v.step, v.after, v.before));
                    }
                }
            }
        }
    }
    if violations.is_empty() {
        Ok(format!("{runs} runs of 20 steps, no increases"))
    } else {
        Err(violations.join("; "))
    }
}

fn h1_dissipation(p: &Params) -> Result<String, String> {
    let g = grid(32);
    let nu = p.nu.unwrap_or(0.1);
    let tau = p.tau.unwrap_or(0.01 * nu);
    let u0 = Scenario::TaylorGreen { m: 2 }.initial_velocity(g).map_err(|e| e.to_string())?;
    let cfg = StepperConfig::new(tau, nu, g.max_radius());
    let mut monitor = GradientDissipationMonitor::new(1e-10);
    run(&u0, &cfg, 50.0 * tau, &mut [&mut monitor]).map_err(|e| e.to_string())?;
    let msg = format!("{} steps, worst excess {:.3e}", monitor.steps_checked, monitor.worst_excess);
    if monitor.violations.is_empty() {
        Ok(msg)
    } else {
        let steps: Vec<String> = monitor.violations.iter().map(|v| v.step.to_string()).collect();
        Err(format!("{msg}; violated at steps {}", steps.join(",")))
    }
}

fn forcing(_: &Params) -> Result<String, String> {
    let g = grid(64);
    let mut worst: f64 = 0.0;
    for t in [0.0, 0.5, 1.0] {
        let f = manufactured_forcing(t, ForcingModel::Euler, g).map_err(|e| e.to_string())?;
        let u = manufactured_velocity(t, g).map_err(|e| e.to_string())?;
        worst = worst.max(l2_norm(&(&f + &u)));
    }
    worst_of("||f_e + u_e||", worst, 1e-10)
}

pub fn execute(args: VerifyArgs) -> Result<(), CliError> {
    if args.list {
        for (name, about, _) in CHECKS {
            println!("{name:<16} {about}");
        }
        return Ok(());
    }
    for name in &args.check {
        if !CHECKS.iter().any(|(n, _, _)| n == name) {
            return Err(CliError::Usage(format!("unknown check '{name}' (see --list)")));
        }
    }
    let params = Params {
        tau: args.tau,
        nu: args.nu,
        seed: args.seed,
    };
    if params.tau.is_some_and(|t| !(t > 0.0)) || params.nu.is_some_and(|n| !(n >= 0.0)) {
        return Err(CliError::Usage("--tau must be > 0 and --nu >= 0".into()));
    }
    let mut failed = Vec::new();
    for (name, _, check) in CHECKS {
        if !args.check.is_empty() && !args.check.iter().any(|c| c == name) {
            continue;
        }
        let start = Instant::now();
        let outcome = check(&params);
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {name}: {msg} ({secs:.1}s)"),
            Err(msg) => {
                println!("FAIL {name}: {msg} ({secs:.1}s)");
                failed.push(name);
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Runtime(format!("violated invariants: {}", failed.join(", "))))
    }
}
