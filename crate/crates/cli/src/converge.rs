//! `converge`: error tables under halving of τ, ν or the grid.

use std::fs;
use std::path::PathBuf;

use clap::Args;
use vislimit_core::diagnostics::{
    convergence_sweep, halvings, parse_norm_list, SweepAxis, SweepBase, SweepSpec, SweepTable, ERROR_NORM_CONVENTION,
};
use vislimit_core::scenarios::Scenario;
use vislimit_core::{Scheme, SolverError};

use crate::config::{parse_list, ConfigFile};
use crate::CliError;

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    /// Flat key=value file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// tau, nu or resolution.
    #[arg(long)]
    vary: Option<String>,
    /// First value of a halving sequence.
    #[arg(long)]
    base: Option<f64>,
    /// Number of values in the halving sequence.
    #[arg(long)]
    halvings: Option<usize>,
    /// Explicit comma-separated values (overrides --base/--halvings).
    #[arg(long)]
    values: Option<String>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    /// Grid points per axis when not sweeping resolution.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long = "T")]
    horizon: Option<f64>,
    /// Comma-separated norms: L2, Linf, H<s>.
    #[arg(long)]
    norms: Option<String>,
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    max_iterations: Option<usize>,
    /// With --vary resolution: a ν sweep per grid, given as a list...
    #[arg(long)]
    nu_values: Option<String>,
    /// ...or as a halving sequence.
    #[arg(long)]
    nu_base: Option<f64>,
    #[arg(long)]
    nu_halvings: Option<usize>,
    /// CSV output path.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn sequence(values: Option<String>, base: Option<f64>, count: Option<usize>, what: &str) -> Result<Option<Vec<f64>>, CliError> {
    match (values, base) {
        (Some(v), _) => parse_list(&v).map(Some),
        (None, Some(b)) => Ok(Some(halvings(b, count.unwrap_or(6)))),
        (None, None) if count.is_some() => Err(CliError::Usage(format!("--{what}halvings needs --{what}base"))),
        (None, None) => Ok(None),
    }
}

struct Plan {
    specs: Vec<SweepSpec>,
    /// Grid size heading each block of a per-resolution ν sweep.
    blocks: Option<Vec<usize>>,
    out: PathBuf,
    comment: String,
}

fn plan(args: ConvergeArgs) -> Result<Plan, CliError> {
    let file = ConfigFile::load(args.config.as_deref())?;
    let vary: SweepAxis = file
        .require::<String>(args.vary, "vary")?
        .parse()
        .map_err(|e: SolverError| CliError::Usage(e.to_string()))?;
    let values = sequence(
        file.get(args.values, "values")?,
        file.get(args.base, "base")?,
        file.get(args.halvings, "halvings")?,
        "",
    )?
    .ok_or_else(|| CliError::Usage("give --values or --base with --halvings".into()))?;
    let horizon: f64 = file.require(args.horizon, "T")?;
    let norms = parse_norm_list(&file.or(args.norms, "norms", "L2".to_string())?)?;
    let scenario: Scenario = file.or(args.scenario, "scenario", "manufactured".to_string())?.parse()?;
    let scheme: Scheme = file.or(args.scheme, "scheme", Scheme::SemiImplicitIterative.name().to_string())?.parse()?;
    let grid: usize = file.or(args.grid, "grid", 128)?;
    let nu_list = sequence(
        file.get(args.nu_values, "nu-values")?,
        file.get(args.nu_base, "nu-base")?,
        file.get(args.nu_halvings, "nu-halvings")?,
        "nu-",
    )?;
    let (tau, nu) = match vary {
        SweepAxis::Tau => (values[0], file.require(args.nu, "nu")?),
        SweepAxis::Nu => (file.require(args.tau, "tau")?, values[0]),
        SweepAxis::Resolution => {
            let nu = match &nu_list {
                Some(list) => list[0],
                None => file.require(args.nu, "nu")?,
            };
            (file.require(args.tau, "tau")?, nu)
        }
    };
    let mut base = SweepBase::new(grid, tau, nu);
    base.scheme = scheme;
    base.tolerance = file.or(args.tolerance, "tolerance", base.tolerance)?;
    base.max_iterations = file.or(args.max_iterations, "max-iterations", base.max_iterations)?;
    let out = file.or(args.out, "out", PathBuf::from(format!("converge-{vary}.csv")))?;
    let norm_names: Vec<String> = norms.iter().map(|n| n.to_string()).collect();
    let values_text: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    let mut comment = format!(
        "vary={vary} values={} scenario={scenario} scheme={scheme} T={horizon:?} norms={} tolerance={:?} max-iterations={} {ERROR_NORM_CONVENTION}",
        values_text.join(","),
        norm_names.join(","),
        base.tolerance,
        base.max_iterations
    );
    let template = |vary, values, base: SweepBase| SweepSpec {
        vary,
        values,
        base,
        horizon,
        norms: norms.clone(),
        scenario,
    };
    let (specs, blocks) = match (vary, nu_list) {
        (SweepAxis::Resolution, Some(nus)) => {
            let nus_text: Vec<String> = nus.iter().map(|v| v.to_string()).collect();
            comment.push_str(&format!(" tau={tau:?} nu-values={}", nus_text.join(",")));
            let mut specs = Vec::new();
            let mut blocks = Vec::new();
            for &points in &values {
                if points.fract() != 0.0 || points < 4.0 {
                    return Err(CliError::Usage(format!("bad grid size {points}")));
                }
                blocks.push(points as usize);
                let mut b = base.clone();
                b.grid_points = points as usize;
                specs.push(template(SweepAxis::Nu, nus.clone(), b));
            }
            (specs, Some(blocks))
        }
        _ => {
            match vary {
                SweepAxis::Tau => comment.push_str(&format!(" nu={nu:?} grid={grid}")),
                SweepAxis::Nu => comment.push_str(&format!(" tau={tau:?} grid={grid}")),
                SweepAxis::Resolution => comment.push_str(&format!(" tau={tau:?} nu={nu:?}")),
            }
            (vec![template(vary, values, base)], None)
        }
    };
    for s in &specs {
        s.validate()?;
    }
    Ok(Plan {
        specs,
        blocks,
        out,
        comment,
    })
}

fn failure_of(tables: &[SweepTable]) -> Option<String> {
    tables.iter().find_map(|t| {
        t.failure
            .as_ref()
            .map(|f| format!("sweep stopped at {}={}: {}", t.axis, f.value, f.message))
    })
}

pub fn execute(args: ConvergeArgs) -> Result<(), CliError> {
    let plan = plan(args)?;
    let mut tables = Vec::new();
    for spec in &plan.specs {
        tables.push(convergence_sweep(spec)?);
    }
    let csv = match &plan.blocks {
        None => {
            print!("{}", tables[0].render());
            tables[0].to_csv(&plan.comment)
        }
        Some(grids) => {
            let mut csv = String::new();
            for (i, (points, table)) in grids.iter().zip(&tables).enumerate() {
                println!("N = {points}");
                print!("{}", table.render());
                let body = table.to_csv(&plan.comment);
                for (j, line) in body.lines().enumerate() {
                    match (i, j, line.starts_with('#')) {
                        (0, 0, _) => csv.push_str(line),
                        (_, 0, _) => continue,
                        (0, 1, _) => csv.push_str(&format!("resolution,{line}")),
                        (_, 1, _) => continue,
                        (_, _, true) => csv.push_str(line),
                        _ => csv.push_str(&format!("{points},{line}")),
                    }
                    csv.push('\n');
                }
            }
            csv
        }
    };
    if let Some(parent) = plan.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(&plan.out, csv).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", plan.out.display())))?;
    println!("wrote {}", plan.out.display());
    match failure_of(&tables) {
        Some(msg) => Err(CliError::Runtime(msg)),
        None => Ok(()),
    }
}
