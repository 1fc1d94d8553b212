//! Alias-free transport term `Π_N P (a·∇b)`.
//!
//! Derivatives are taken spectrally, products are formed on the padded
//! `3M/2` grid, and the result is truncated back to the radius of the
//! transported field before projection. For inputs supported in
//! `|k|_∞ <= N` with `N <= M/2 - 1` the padded grid satisfies `L >= 3N + 1`,
//! so the retained modes of the product are exact.

use super::field::{SpectralScalarField, SpectralVectorField};
use super::ops::{leray_project, spectral_derivative, Axis};
use super::transform::{analyze_pair, synthesize_pair};
use crate::error::{Result, SolverError};

/// Transport by a fixed velocity `a`, with its padded-grid samples cached.
///
/// The fixed-point iteration applies the same transporting velocity many
/// times per step, so only the transported field is re-synthesised.
#[derive(Debug, Clone)]
pub struct Advection {
    grid: super::PhysicalGrid,
    radius: usize,
    padded: usize,
    a1: Vec<f64>,
    a2: Vec<f64>,
}

impl Advection {
    pub fn new(a: &SpectralVectorField) -> Self {
        let grid = a.grid();
        let radius = a.truncation();
        let padded = grid.padded_points();
        let (a1, a2) = synthesize_pair(
            a.u1().coefficients(),
            Some(a.u2().coefficients()),
            grid.points(),
            radius,
            padded,
        );
        Self {
            grid,
            radius,
            padded,
            a1,
            a2,
        }
    }

    /// `Π_N P (a·∇b)` with `N` the truncation radius of `b`.
    pub fn apply(&self, b: &SpectralVectorField) -> Result<SpectralVectorField> {
        if b.grid() != self.grid {
            return Err(SolverError::GridMismatch {
                left: self.grid.points(),
                right: b.grid().points(),
                left_radius: self.radius,
                right_radius: b.truncation(),
            });
        }
        Ok(leray_project(&self.apply_unprojected(b)))
    }

    /// `Π_N (a·∇b)` without the Leray projection.
    pub fn apply_unprojected(&self, b: &SpectralVectorField) -> SpectralVectorField {
        let m = self.grid.points();
        let l = self.padded;
        let out_radius = b.truncation();
        let in_radius = self.radius.max(out_radius);
        let d = |f: &SpectralScalarField, axis| spectral_derivative(f, axis, 1);
        let (b1x, b1y) = synthesize_pair(
            d(b.u1(), Axis::X).coefficients(),
            Some(d(b.u1(), Axis::Y).coefficients()),
            m,
            in_radius,
            l,
        );
        let (b2x, b2y) = synthesize_pair(
            d(b.u2(), Axis::X).coefficients(),
            Some(d(b.u2(), Axis::Y).coefficients()),
            m,
            in_radius,
            l,
        );
        let n = l * l;
        let mut p1 = vec![0.0; n];
        let mut p2 = vec![0.0; n];
        for j in 0..n {
            p1[j] = self.a1[j] * b1x[j] + self.a2[j] * b1y[j];
            p2[j] = self.a1[j] * b2x[j] + self.a2[j] * b2y[j];
        }
        let (c1, c2) = analyze_pair(&p1, Some(&p2), l, m, out_radius);
        SpectralVectorField::from_parts(
            SpectralScalarField::from_parts(self.grid, out_radius, c1),
            SpectralScalarField::from_parts(self.grid, out_radius, c2),
        )
    }
}

/// Convenience wrapper: `Π_N P (a·∇b)` truncated to the radius of `b`.
pub fn convective_term(a: &SpectralVectorField, b: &SpectralVectorField) -> Result<SpectralVectorField> {
    a.check_compatible(b)?;
    Advection::new(a).apply(b)
}
