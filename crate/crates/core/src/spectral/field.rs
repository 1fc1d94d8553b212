use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::grid::PhysicalGrid;
use crate::error::{Result, SolverError};

/// Real samples of one or two scalar components on the collocation grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalField {
    grid: PhysicalGrid,
    components: Vec<Vec<f64>>,
}

impl PhysicalField {
    pub fn new(grid: PhysicalGrid, components: Vec<Vec<f64>>) -> Result<Self> {
        if components.is_empty() || components.len() > 2 {
            return Err(SolverError::invalid(format!(
                "physical field needs 1 or 2 components, got {}",
                components.len()
            )));
        }
        for (c, values) in components.iter().enumerate() {
            if values.len() != grid.len() {
                return Err(SolverError::invalid(format!(
                    "component {c} has {} samples, grid needs {}",
                    values.len(),
                    grid.len()
                )));
            }
            if let Some(j) = values.iter().position(|v| !v.is_finite()) {
                return Err(SolverError::non_finite(format!(
                    "physical field component {c} at sample {j}"
                )));
            }
        }
        Ok(Self { grid, components })
    }

    pub fn scalar(grid: PhysicalGrid, values: Vec<f64>) -> Result<Self> {
        Self::new(grid, vec![values])
    }

    /// Samples `f(x, y)` at every node.
    pub fn from_fn(grid: PhysicalGrid, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = grid.nodes().map(|(_, x, y)| f(x, y)).collect();
        Self::scalar(grid, values)
    }

    /// Samples a vector-valued function at every node.
    pub fn vector_from_fn(grid: PhysicalGrid, f: impl Fn(f64, f64) -> (f64, f64)) -> Result<Self> {
        let (a, b): (Vec<f64>, Vec<f64>) = grid.nodes().map(|(_, x, y)| f(x, y)).unzip();
        Self::new(grid, vec![a, b])
    }

    pub fn grid(&self) -> PhysicalGrid {
        self.grid
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, c: usize) -> &[f64] {
        &self.components[c]
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    /// Value of component `c` at node `(j1, j2)`.
    pub fn at(&self, c: usize, j1: usize, j2: usize) -> f64 {
        self.components[c][j2 * self.grid.points() + j1]
    }

    pub fn max_abs(&self) -> f64 {
        self.components
            .iter()
            .flatten()
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Fourier coefficients of a real scalar field on the torus.
///
/// Coefficients are stored on the `M × M` FFT layout of the grid and use the
/// integral convention `f̂(k) = ∫ f(x) e^{-ik·x} dx`. Every mode with
/// `|k|_∞ > truncation` (which always includes the Nyquist lines) is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralScalarField {
    grid: PhysicalGrid,
    truncation: usize,
    coeffs: Vec<Complex64>,
}

impl SpectralScalarField {
    pub fn zeros(grid: PhysicalGrid) -> Self {
        Self {
            grid,
            truncation: grid.max_radius(),
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    /// Wraps raw coefficients, zeroing everything outside the truncation box.
    ///
    /// Conjugate symmetry is the caller's responsibility; it is checked when
    /// the field is transformed back to physical space.
    pub fn from_coefficients(
        grid: PhysicalGrid,
        truncation: usize,
        mut coeffs: Vec<Complex64>,
    ) -> Result<Self> {
        check_radius(grid, truncation)?;
        if coeffs.len() != grid.len() {
            return Err(SolverError::invalid(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(SolverError::non_finite("spectral coefficients"));
        }
        mask(grid, truncation, &mut coeffs);
        Ok(Self {
            grid,
            truncation,
            coeffs,
        })
    }

    /// Builds coefficients from a function of the signed wavevector.
    pub fn from_modes(
        grid: PhysicalGrid,
        truncation: usize,
        mut f: impl FnMut(i64, i64) -> Complex64,
    ) -> Result<Self> {
        let coeffs = grid.wavevectors().map(|(_, k1, k2)| f(k1, k2)).collect();
        Self::from_coefficients(grid, truncation, coeffs)
    }

    pub(crate) fn from_parts(grid: PhysicalGrid, truncation: usize, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.len());
        Self {
            grid,
            truncation,
            coeffs,
        }
    }

    #[inline]
    pub fn grid(&self) -> PhysicalGrid {
        self.grid
    }

    #[inline]
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    #[inline]
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient at signed wavevector `(k1, k2)`; zero when not stored.
    pub fn coefficient(&self, k1: i64, k2: i64) -> Complex64 {
        match (self.grid.index_of(k1), self.grid.index_of(k2)) {
            (Some(i1), Some(i2)) => self.coeffs[i2 * self.grid.points() + i1],
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// Applies a Fourier multiplier `m(k1, k2)` to every coefficient.
    pub fn map_modes(&self, m: impl Fn(i64, i64) -> Complex64) -> Self {
        let coeffs = self
            .grid
            .wavevectors()
            .map(|(i, k1, k2)| {
                let c = self.coeffs[i];
                if c == Complex64::new(0.0, 0.0) {
                    c
                } else {
                    c * m(k1, k2)
                }
            })
            .collect();
        Self::from_parts(self.grid, self.truncation, coeffs)
    }

    /// Real-valued multiplier variant of [`map_modes`](Self::map_modes).
    pub fn scale_modes(&self, m: impl Fn(i64, i64) -> f64) -> Self {
        self.map_modes(|k1, k2| Complex64::new(m(k1, k2), 0.0))
    }

    /// Mean value over the torus.
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re / (super::grid::DOMAIN_LENGTH * super::grid::DOMAIN_LENGTH)
    }

    pub fn scale(&self, a: f64) -> Self {
        Self::from_parts(
            self.grid,
            self.truncation,
            self.coeffs.iter().map(|c| c * a).collect(),
        )
    }

    /// `self + a·other`; panics on grid mismatch (use [`check_compatible`](Self::check_compatible) first).
    pub fn axpy(&self, a: f64, other: &Self) -> Self {
        assert_eq!(self.grid, other.grid, "grid mismatch in field arithmetic");
        let truncation = self.truncation.max(other.truncation);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x + y * a)
            .collect();
        Self::from_parts(self.grid, truncation, coeffs)
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid || self.truncation != other.truncation {
            return Err(SolverError::GridMismatch {
                left: self.grid.points(),
                right: other.grid.points(),
                left_radius: self.truncation,
                right_radius: other.truncation,
            });
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.norm()))
    }

    /// Largest `|F(k) - conj F(-k)|` relative to the largest coefficient.
    pub fn symmetry_defect(&self) -> f64 {
        let scale = self.max_abs_coefficient();
        if scale == 0.0 {
            return 0.0;
        }
        let m = self.grid.points();
        let mut worst = 0.0_f64;
        for i2 in 0..m {
            let j2 = self.grid.mirror(i2);
            for i1 in 0..m {
                let j1 = self.grid.mirror(i1);
                let d = self.coeffs[i2 * m + i1] - self.coeffs[j2 * m + j1].conj();
                worst = worst.max(d.norm());
            }
        }
        worst / scale
    }

    /// Projects onto the conjugate-symmetric (real-field) subspace.
    pub(crate) fn symmetrized(&self) -> Self {
        let m = self.grid.points();
        let mut out = self.coeffs.clone();
        for i2 in 0..m {
            let j2 = self.grid.mirror(i2);
            for i1 in 0..m {
                let j1 = self.grid.mirror(i1);
                out[i2 * m + i1] = (self.coeffs[i2 * m + i1] + self.coeffs[j2 * m + j1].conj()) * 0.5;
            }
        }
        Self::from_parts(self.grid, self.truncation, out)
    }

    pub(crate) fn with_truncation(mut self, radius: usize) -> Self {
        mask(self.grid, radius, &mut self.coeffs);
        self.truncation = radius;
        self
    }
}

impl Add for &SpectralScalarField {
    type Output = SpectralScalarField;
    fn add(self, rhs: Self) -> SpectralScalarField {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &SpectralScalarField {
    type Output = SpectralScalarField;
    fn sub(self, rhs: Self) -> SpectralScalarField {
        self.axpy(-1.0, rhs)
    }
}

impl Mul<f64> for &SpectralScalarField {
    type Output = SpectralScalarField;
    fn mul(self, a: f64) -> SpectralScalarField {
        self.scale(a)
    }
}

impl Neg for &SpectralScalarField {
    type Output = SpectralScalarField;
    fn neg(self) -> SpectralScalarField {
        self.scale(-1.0)
    }
}

/// Two-component velocity field in Fourier space.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVectorField {
    u1: SpectralScalarField,
    u2: SpectralScalarField,
}

impl SpectralVectorField {
    pub fn new(u1: SpectralScalarField, u2: SpectralScalarField) -> Result<Self> {
        u1.check_compatible(&u2)?;
        Ok(Self { u1, u2 })
    }

    pub fn zeros(grid: PhysicalGrid) -> Self {
        Self {
            u1: SpectralScalarField::zeros(grid),
            u2: SpectralScalarField::zeros(grid),
        }
    }

    pub(crate) fn from_parts(u1: SpectralScalarField, u2: SpectralScalarField) -> Self {
        debug_assert!(u1.check_compatible(&u2).is_ok());
        Self { u1, u2 }
    }

    #[inline]
    pub fn u1(&self) -> &SpectralScalarField {
        &self.u1
    }

    #[inline]
    pub fn u2(&self) -> &SpectralScalarField {
        &self.u2
    }

    #[inline]
    pub fn grid(&self) -> PhysicalGrid {
        self.u1.grid()
    }

    #[inline]
    pub fn truncation(&self) -> usize {
        self.u1.truncation()
    }

    pub fn into_components(self) -> (SpectralScalarField, SpectralScalarField) {
        (self.u1, self.u2)
    }

    pub fn map(&self, f: impl Fn(&SpectralScalarField) -> SpectralScalarField) -> Self {
        Self::from_parts(f(&self.u1), f(&self.u2))
    }

    pub fn scale(&self, a: f64) -> Self {
        self.map(|c| c.scale(a))
    }

    pub fn axpy(&self, a: f64, other: &Self) -> Self {
        Self::from_parts(self.u1.axpy(a, &other.u1), self.u2.axpy(a, &other.u2))
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        self.u1.check_compatible(&other.u1)
    }

    pub fn is_finite(&self) -> bool {
        self.u1.is_finite() && self.u2.is_finite()
    }

    /// `max_k |k·v̂(k)|` relative to `max_k |k| |v̂(k)|`; zero for a zero field.
    pub fn divergence_defect(&self) -> f64 {
        let mut num = 0.0_f64;
        let mut den = 0.0_f64;
        let a = self.u1.coefficients();
        let b = self.u2.coefficients();
        for (i, k1, k2) in self.grid().wavevectors() {
            let (k1, k2) = (k1 as f64, k2 as f64);
            num = num.max((a[i] * k1 + b[i] * k2).norm());
            den = den.max((k1 * k1 + k2 * k2).sqrt() * (a[i].norm_sqr() + b[i].norm_sqr()).sqrt());
        }
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }

    pub(crate) fn with_truncation(self, radius: usize) -> Self {
        Self::from_parts(self.u1.with_truncation(radius), self.u2.with_truncation(radius))
    }
}

impl Add for &SpectralVectorField {
    type Output = SpectralVectorField;
    fn add(self, rhs: Self) -> SpectralVectorField {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &SpectralVectorField {
    type Output = SpectralVectorField;
    fn sub(self, rhs: Self) -> SpectralVectorField {
        self.axpy(-1.0, rhs)
    }
}

impl Mul<f64> for &SpectralVectorField {
    type Output = SpectralVectorField;
    fn mul(self, a: f64) -> SpectralVectorField {
        self.scale(a)
    }
}

impl Neg for &SpectralVectorField {
    type Output = SpectralVectorField;
    fn neg(self) -> SpectralVectorField {
        self.scale(-1.0)
    }
}

/// Uniform access to the scalar components of a field, so norms and inner
/// products work for both scalar and vector fields.
pub trait FieldComponents {
    fn components(&self) -> Vec<&SpectralScalarField>;
}

impl FieldComponents for SpectralScalarField {
    fn components(&self) -> Vec<&SpectralScalarField> {
        vec![self]
    }
}

impl FieldComponents for SpectralVectorField {
    fn components(&self) -> Vec<&SpectralScalarField> {
        vec![&self.u1, &self.u2]
    }
}

pub(crate) fn check_radius(grid: PhysicalGrid, radius: usize) -> Result<()> {
    if radius > grid.max_radius() {
        return Err(SolverError::invalid(format!(
            "truncation radius {radius} exceeds M/2 - 1 = {} for M = {}",
            grid.max_radius(),
            grid.points()
        )));
    }
    Ok(())
}

fn mask(grid: PhysicalGrid, radius: usize, coeffs: &mut [Complex64]) {
    let r = radius as i64;
    for (i, k1, k2) in grid.wavevectors() {
        if k1.abs() > r || k2.abs() > r {
            coeffs[i] = Complex64::new(0.0, 0.0);
        }
    }
}
