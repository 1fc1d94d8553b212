use std::fmt;
use std::str::FromStr;

use crate::error::{Result, SolverError};
use crate::spectral::{homogeneous_norm, l2_norm, sobolev_norm, SpectralVectorField};

/// A norm requested in an error table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormKind {
    L2,
    /// Sum over the two components of the grid maximum of `|e_i|`.
    LInf,
    /// `‖e‖_{L²} + ‖Λ^s e‖_{L²}`.
    Sobolev(f64),
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormKind::L2 => f.write_str("L2"),
            NormKind::LInf => f.write_str("Linf"),
            NormKind::Sobolev(s) => write!(f, "H{s}"),
        }
    }
}

impl FromStr for NormKind {
    type Err = SolverError;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "l2" => return Ok(NormKind::L2),
            "linf" | "l_inf" | "max" => return Ok(NormKind::LInf),
            _ => {}
        }
        let order = t
            .strip_prefix('H')
            .or_else(|| t.strip_prefix('h'))
            .and_then(|v| v.parse::<f64>().ok())
            .filter(|v| *v >= 0.0)
            .ok_or_else(|| SolverError::invalid(format!("unknown norm '{t}' (use L2, Linf, H<s>)")))?;
        Ok(NormKind::Sobolev(order))
    }
}

/// Parses a comma-separated norm list such as `L2,Linf,H1,H6`.
pub fn parse_norm_list(s: &str) -> Result<Vec<NormKind>> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect()
}

/// Error values keyed by norm, in request order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ErrorNorms(pub Vec<(NormKind, f64)>);

impl ErrorNorms {
    pub fn get(&self, kind: NormKind) -> Option<f64> {
        self.0.iter().find(|(k, _)| *k == kind).map(|(_, v)| *v)
    }

    pub fn values(&self) -> Vec<f64> {
        self.0.iter().map(|(_, v)| *v).collect()
    }
}

/// Per-step quantities recorded during a run.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRecord {
    pub step: usize,
    pub time: f64,
    pub l2_energy: f64,
    pub h1_norm: f64,
    /// `‖∇u‖_{L²}`.
    pub gradient_norm: f64,
    pub hs_norms: Vec<(f64, f64)>,
    pub picard_iterations: usize,
    pub errors: Option<ErrorNorms>,
}

impl DiagnosticsRecord {
    pub fn capture(
        step: usize,
        time: f64,
        state: &SpectralVectorField,
        orders: &[f64],
        iterations: usize,
    ) -> Result<Self> {
        let hs_norms = orders
            .iter()
            .map(|&s| sobolev_norm(state, s).map(|v| (s, v)))
            .collect::<Result<Vec<_>>>()?;
        let record = Self {
            step,
            time,
            l2_energy: l2_norm(state),
            h1_norm: sobolev_norm(state, 1.0)?,
            gradient_norm: homogeneous_norm(state, 1.0)?,
            hs_norms,
            picard_iterations: iterations,
            errors: None,
        };
        if !record.is_valid() {
            return Err(SolverError::non_finite(format!("diagnostics at step {step}")));
        }
        Ok(record)
    }

    pub fn hs(&self, s: f64) -> Option<f64> {
        self.hs_norms.iter().find(|(o, _)| *o == s).map(|(_, v)| *v)
    }

    /// All norms finite and non-negative.
    pub fn is_valid(&self) -> bool {
        let ok = |v: f64| v.is_finite() && v >= 0.0;
        ok(self.l2_energy)
            && ok(self.h1_norm)
            && ok(self.gradient_norm)
            && self.hs_norms.iter().all(|(_, v)| ok(*v))
            && self
                .errors
                .as_ref()
                .map_or(true, |e| e.0.iter().all(|(_, v)| ok(*v)))
    }
}
