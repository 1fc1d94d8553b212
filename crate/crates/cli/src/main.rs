use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vislimit_core::SolverError;

mod config;
mod converge;
mod simulate;
mod verify;

/// Semi-implicit spectral solver for 2D Euler and Navier–Stokes on the torus.
#[derive(Debug, Parser)]
#[command(name = "vislimit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one scenario, writing snapshots and a diagnostics CSV.
    Simulate(simulate::SimulateArgs),
    /// Run a convergence sweep against the manufactured solution.
    Converge(converge::ConvergeArgs),
    /// Run the fast invariant checks.
    Verify(verify::VerifyArgs),
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or configuration; exit code 2.
    Usage(String),
    /// Numerical or I/O failure; exit code 1.
    Runtime(String),
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::InvalidArgument(_) | SolverError::Format(_) => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => simulate::execute(args),
        Command::Converge(args) => converge::execute(args),
        Command::Verify(args) => verify::execute(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run with --help for usage");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
