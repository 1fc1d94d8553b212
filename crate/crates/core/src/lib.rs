//! Semi-implicit Fourier spectral solver for the incompressible Euler and
//! Navier–Stokes equations on the periodic square `[0, 2π)²`.
//!
//! The solver state is a divergence-free [`SpectralVectorField`]. Each step
//! solves
//!
//! ```text
//! (u^{n+1} - u^n)/τ + P Π_N (u^n·∇u^{n+1}) = ν Δu^{n+1} + P Π_N f_n
//! ```
//!
//! either by fixed-point iteration on the transported factor, by a direct
//! Krylov solve, or (for comparison) with the nonlinearity fully explicit.
//! See [`stepper`] for the schemes, [`scenarios`] for the benchmark initial
//! data and [`diagnostics`] for error tables and monitors.

pub mod diagnostics;
pub mod error;
pub mod scenarios;
pub mod snapshot;
pub mod spectral;
pub mod stepper;
pub mod testing;

pub use error::{Result, SolverError};
pub use spectral::{PhysicalField, PhysicalGrid, SpectralScalarField, SpectralVectorField};
pub use stepper::{Scheme, StepResult, StepperConfig};
