use thiserror::Error;

/// Errors raised by field construction, transforms and time stepping.
#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value in {context}")]
    NonFinite { context: String },

    #[error("grid mismatch: {left} vs {right} points per axis (or truncation {left_radius} vs {right_radius})")]
    GridMismatch {
        left: usize,
        right: usize,
        left_radius: usize,
        right_radius: usize,
    },

    #[error("conjugate symmetry violated: relative defect {defect:.3e}")]
    SymmetryViolation { defect: f64 },

    #[error("imaginary residue {residue:.3e} (relative) after inverse transform")]
    ImaginaryResidue { residue: f64 },

    #[error("fixed-point iteration did not reach tolerance after {iterations} iterations (last residual {residual:.3e})")]
    IterationLimit { iterations: usize, residual: f64 },

    #[error("Picard iteration diverged at iteration {iteration} (last finite increment {residual:.3e})")]
    Diverged { iteration: usize, residual: f64 },

    #[error("linear solve stalled after {iterations} Krylov iterations (residual {residual:.3e})")]
    KrylovLimit { iterations: usize, residual: f64 },

    #[error("step {step} (t = {time}) failed: {source}")]
    StepFailed {
        step: usize,
        time: f64,
        #[source]
        source: Box<SolverError>,
    },

    #[error("snapshot format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = SolverError> = std::result::Result<T, E>;

impl SolverError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        SolverError::InvalidArgument(msg.into())
    }

    pub(crate) fn non_finite(context: impl Into<String>) -> Self {
        SolverError::NonFinite {
            context: context.into(),
        }
    }
}
