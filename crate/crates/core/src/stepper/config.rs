use std::fmt;
use std::sync::Arc;

use crate::error::{Result, SolverError};
use crate::spectral::SpectralVectorField;

/// Time-dependent body force `t ↦ f(t)`.
pub type Forcing = Arc<dyn Fn(f64) -> SpectralVectorField + Send + Sync>;

/// How the implicit transported factor of each step is resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Fixed-point (Picard) iteration on `u^{(m)}` starting from `u^n`.
    SemiImplicitIterative,
    /// Direct solve of the same linear step with a Krylov method.
    SemiImplicitKrylov,
    /// Transported factor taken at `u^n`: one linear solve per step.
    ExplicitGuoZou,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::SemiImplicitIterative => "semi-implicit-iterative",
            Scheme::SemiImplicitKrylov => "semi-implicit-krylov",
            Scheme::ExplicitGuoZou => "explicit",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Scheme {
    type Err = SolverError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "semi-implicit-iterative" | "iterative" | "picard" => Ok(Scheme::SemiImplicitIterative),
            "semi-implicit-krylov" | "krylov" => Ok(Scheme::SemiImplicitKrylov),
            "explicit" | "guo-zou" => Ok(Scheme::ExplicitGuoZou),
            other => Err(SolverError::invalid(format!("unknown scheme '{other}'"))),
        }
    }
}

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_ITERATIONS: usize = 200;
pub const DEFAULT_KRYLOV_MAX_ITERATIONS: usize = 50_000;

/// Parameters of one time integration.
#[derive(Clone)]
pub struct StepperConfig {
    pub tau: f64,
    pub nu: f64,
    /// Truncation radius `N` (retained modes `|k|_∞ <= N`).
    pub truncation: usize,
    /// Absolute `L²` stopping threshold for the Picard increment and the
    /// Krylov residual.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub krylov_max_iterations: usize,
    pub scheme: Scheme,
    pub forcing: Option<Forcing>,
    /// Sobolev orders recorded in every diagnostics record.
    pub monitored_orders: Vec<f64>,
}

impl StepperConfig {
    pub fn new(tau: f64, nu: f64, truncation: usize) -> Self {
        Self {
            tau,
            nu,
            truncation,
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            krylov_max_iterations: DEFAULT_KRYLOV_MAX_ITERATIONS,
            scheme: Scheme::SemiImplicitIterative,
            forcing: None,
            monitored_orders: vec![2.5, 3.0],
        }
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_max_iterations(mut self, n: usize) -> Self {
        self.max_iterations = n;
        self
    }

    pub fn with_forcing(mut self, forcing: Forcing) -> Self {
        self.forcing = Some(forcing);
        self
    }

    pub fn with_monitored_orders(mut self, orders: Vec<f64>) -> Self {
        self.monitored_orders = orders;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0) || !self.tau.is_finite() {
            return Err(SolverError::invalid(format!("tau must be > 0, got {}", self.tau)));
        }
        if !(self.nu >= 0.0) || !self.nu.is_finite() {
            return Err(SolverError::invalid(format!("nu must be >= 0, got {}", self.nu)));
        }
        if !(self.tolerance > 0.0) {
            return Err(SolverError::invalid(format!(
                "tolerance must be > 0, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 || self.krylov_max_iterations == 0 {
            return Err(SolverError::invalid("iteration limits must be >= 1"));
        }
        if self.monitored_orders.iter().any(|s| !(*s >= 0.0)) {
            return Err(SolverError::invalid("monitored Sobolev orders must be >= 0"));
        }
        Ok(())
    }
}

impl fmt::Debug for StepperConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StepperConfig")
            .field("tau", &self.tau)
            .field("nu", &self.nu)
            .field("truncation", &self.truncation)
            .field("tolerance", &self.tolerance)
            .field("max_iterations", &self.max_iterations)
            .field("krylov_max_iterations", &self.krylov_max_iterations)
            .field("scheme", &self.scheme)
            .field("forcing", &self.forcing.as_ref().map(|_| "<fn>"))
            .field("monitored_orders", &self.monitored_orders)
            .finish()
    }
}
