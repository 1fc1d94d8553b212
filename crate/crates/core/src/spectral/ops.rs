//! Linear spectral operators: transforms, truncation, Fourier multipliers,
//! norms and the Leray projector.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::field::{FieldComponents, PhysicalField, SpectralScalarField, SpectralVectorField};
use super::grid::PhysicalGrid;
use super::transform::{analyze_pair, synthesize_pair};
use crate::error::{Result, SolverError};

/// Relative conjugate-symmetry defect above which a spectrum is rejected.
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;
/// Relative imaginary residue tolerated (and discarded) after synthesis.
pub const IMAGINARY_TOLERANCE: f64 = 1e-12;

const TWO_PI: f64 = 2.0 * PI;

/// Transforms every component of a physical field to Fourier space using the
/// integral convention, keeping all non-Nyquist modes.
pub fn forward_transform(f: &PhysicalField) -> Result<Vec<SpectralScalarField>> {
    let grid = f.grid();
    let m = grid.points();
    let r = grid.max_radius();
    let out = match f.components() {
        [a] => {
            let (fa, _) = analyze_pair(a, None, m, m, r);
            vec![SpectralScalarField::from_parts(grid, r, fa)]
        }
        [a, b] => {
            let (fa, fb) = analyze_pair(a, Some(b), m, m, r);
            vec![
                SpectralScalarField::from_parts(grid, r, fa),
                SpectralScalarField::from_parts(grid, r, fb),
            ]
        }
        _ => unreachable!("PhysicalField enforces 1 or 2 components"),
    };
    Ok(out)
}

/// Synthesises grid samples from a scalar spectrum.
pub fn inverse_transform(f: &SpectralScalarField) -> Result<PhysicalField> {
    let values = synthesize_checked(f)?;
    PhysicalField::scalar(f.grid(), values)
}

/// Synthesises both velocity components on the grid.
pub fn inverse_vector(v: &SpectralVectorField) -> Result<PhysicalField> {
    for c in [v.u1(), v.u2()] {
        check_symmetry(c)?;
    }
    let grid = v.grid();
    let (a, b) = synthesize_pair(
        v.u1().coefficients(),
        Some(v.u2().coefficients()),
        grid.points(),
        v.truncation(),
        grid.points(),
    );
    PhysicalField::new(grid, vec![a, b])
}

fn check_symmetry(f: &SpectralScalarField) -> Result<()> {
    if !f.is_finite() {
        return Err(SolverError::non_finite("spectrum passed to inverse transform"));
    }
    let defect = f.symmetry_defect();
    if defect > SYMMETRY_TOLERANCE {
        return Err(SolverError::SymmetryViolation { defect });
    }
    Ok(())
}

fn synthesize_checked(f: &SpectralScalarField) -> Result<Vec<f64>> {
    check_symmetry(f)?;
    let grid = f.grid();
    let sym = f.symmetrized();
    let (re, im) = synthesize_pair(sym.coefficients(), None, grid.points(), f.truncation(), grid.points());
    let scale = re.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let residue = im.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale > 0.0 && residue > IMAGINARY_TOLERANCE * scale {
        return Err(SolverError::ImaginaryResidue {
            residue: residue / scale,
        });
    }
    Ok(re)
}

impl SpectralScalarField {
    /// Transforms row-major grid samples (see [`PhysicalGrid`]).
    pub fn from_samples(grid: PhysicalGrid, values: Vec<f64>) -> Result<Self> {
        let f = PhysicalField::scalar(grid, values)?;
        Ok(forward_transform(&f)?.remove(0))
    }

    /// Samples `f(x, y)` on the grid and transforms.
    pub fn from_fn(grid: PhysicalGrid, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let p = PhysicalField::from_fn(grid, f)?;
        Ok(forward_transform(&p)?.remove(0))
    }

    pub fn to_physical(&self) -> Result<PhysicalField> {
        inverse_transform(self)
    }
}

impl SpectralVectorField {
    pub fn from_physical(f: &PhysicalField) -> Result<Self> {
        if f.num_components() != 2 {
            return Err(SolverError::invalid("vector field needs two components"));
        }
        let mut c = forward_transform(f)?;
        let u2 = c.pop().expect("two components");
        let u1 = c.pop().expect("two components");
        Ok(Self::from_parts(u1, u2))
    }

    /// Samples a vector function on the grid and transforms.
    pub fn from_fn(grid: PhysicalGrid, f: impl Fn(f64, f64) -> (f64, f64)) -> Result<Self> {
        Self::from_physical(&PhysicalField::vector_from_fn(grid, f)?)
    }

    pub fn to_physical(&self) -> Result<PhysicalField> {
        inverse_vector(self)
    }
}

/// Fourier truncation `Π_N`: keeps modes with `|k|_∞ <= radius`.
pub fn truncate(f: &SpectralScalarField, radius: usize) -> Result<SpectralScalarField> {
    super::field::check_radius(f.grid(), radius)?;
    Ok(f.clone().with_truncation(radius))
}

/// Componentwise `Π_N` for vector fields.
pub fn truncate_vector(v: &SpectralVectorField, radius: usize) -> Result<SpectralVectorField> {
    super::field::check_radius(v.grid(), radius)?;
    Ok(v.clone().with_truncation(radius))
}

/// Coordinate axis for spectral differentiation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// `∂^order / ∂x_axis^order` via the multiplier `(i k_axis)^order`.
pub fn spectral_derivative(f: &SpectralScalarField, axis: Axis, order: u32) -> SpectralScalarField {
    let i_pow = Complex64::new(0.0, 1.0).powu(order);
    f.map_modes(|k1, k2| {
        let k = match axis {
            Axis::X => k1,
            Axis::Y => k2,
        } as f64;
        i_pow * k.powi(order as i32)
    })
}

pub fn laplacian(f: &SpectralScalarField) -> SpectralScalarField {
    f.scale_modes(|k1, k2| -((k1 * k1 + k2 * k2) as f64))
}

/// `Λ^s = (-Δ)^{s/2}`: multiplier `|k|^s`, with the mean mode sent to zero.
pub fn fractional_lambda(f: &SpectralScalarField, s: f64) -> Result<SpectralScalarField> {
    check_order(s)?;
    Ok(f.scale_modes(|k1, k2| {
        if k1 == 0 && k2 == 0 {
            0.0
        } else {
            ((k1 * k1 + k2 * k2) as f64).powf(0.5 * s)
        }
    }))
}

fn check_order(s: f64) -> Result<()> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(SolverError::invalid(format!("Sobolev order must be finite and >= 0, got {s}")));
    }
    Ok(())
}

fn weighted_sum(f: &SpectralScalarField, weight: impl Fn(i64, i64) -> f64) -> f64 {
    let c = f.coefficients();
    f.grid()
        .wavevectors()
        .map(|(i, k1, k2)| weight(k1, k2) * c[i].norm_sqr())
        .sum()
}

/// `H^s` norm `(2π)^{-1} (Σ (1 + |k|^{2s}) |f̂(k)|²)^{1/2}`, summed over
/// components. At `s = 0` the weight is taken as 1 so the result is the plain
/// `L²` norm.
pub fn sobolev_norm<F: FieldComponents>(f: &F, s: f64) -> Result<f64> {
    check_order(s)?;
    let total: f64 = f
        .components()
        .into_iter()
        .map(|c| {
            if s == 0.0 {
                weighted_sum(c, |_, _| 1.0)
            } else {
                weighted_sum(c, |k1, k2| 1.0 + ((k1 * k1 + k2 * k2) as f64).powf(s))
            }
        })
        .sum();
    Ok(total.sqrt() / TWO_PI)
}

/// Homogeneous seminorm `‖Λ^s f‖_{L²}`.
pub fn homogeneous_norm<F: FieldComponents>(f: &F, s: f64) -> Result<f64> {
    check_order(s)?;
    let total: f64 = f
        .components()
        .into_iter()
        .map(|c| {
            weighted_sum(c, |k1, k2| {
                if k1 == 0 && k2 == 0 {
                    0.0
                } else {
                    ((k1 * k1 + k2 * k2) as f64).powf(s)
                }
            })
        })
        .sum();
    Ok(total.sqrt() / TWO_PI)
}

pub fn l2_norm<F: FieldComponents>(f: &F) -> f64 {
    let total: f64 = f
        .components()
        .into_iter()
        .map(|c| c.coefficients().iter().map(|z| z.norm_sqr()).sum::<f64>())
        .sum();
    total.sqrt() / TWO_PI
}

/// `L²(T²)` inner product, evaluated through Parseval.
pub fn inner_product<F: FieldComponents>(f: &F, g: &F) -> Result<f64> {
    let (fc, gc) = (f.components(), g.components());
    let mut acc = 0.0;
    for (a, b) in fc.iter().zip(&gc) {
        if a.grid() != b.grid() {
            return Err(SolverError::GridMismatch {
                left: a.grid().points(),
                right: b.grid().points(),
                left_radius: a.truncation(),
                right_radius: b.truncation(),
            });
        }
        acc += a
            .coefficients()
            .iter()
            .zip(b.coefficients())
            .map(|(x, y)| (x * y.conj()).re)
            .sum::<f64>();
    }
    Ok(acc / (TWO_PI * TWO_PI))
}

/// Leray projection `v̂ - k (k·v̂)/|k|²`; the mean mode passes through.
pub fn leray_project(v: &SpectralVectorField) -> SpectralVectorField {
    let grid = v.grid();
    let a = v.u1().coefficients();
    let b = v.u2().coefficients();
    let mut pa = a.to_vec();
    let mut pb = b.to_vec();
    for (i, k1, k2) in grid.wavevectors() {
        let kk = (k1 * k1 + k2 * k2) as f64;
        if kk == 0.0 {
            continue;
        }
        let (k1, k2) = (k1 as f64, k2 as f64);
        let dot = (a[i] * k1 + b[i] * k2) / kk;
        pa[i] = a[i] - dot * k1;
        pb[i] = b[i] - dot * k2;
    }
    let r = v.truncation();
    SpectralVectorField::from_parts(
        SpectralScalarField::from_parts(grid, r, pa),
        SpectralScalarField::from_parts(grid, r, pb),
    )
}

/// `∇·v` as a scalar spectrum.
pub fn divergence(v: &SpectralVectorField) -> SpectralScalarField {
    &spectral_derivative(v.u1(), Axis::X, 1) + &spectral_derivative(v.u2(), Axis::Y, 1)
}

/// Scalar vorticity `∂ₓu₂ - ∂ᵧu₁`.
pub fn curl(v: &SpectralVectorField) -> SpectralScalarField {
    &spectral_derivative(v.u2(), Axis::X, 1) - &spectral_derivative(v.u1(), Axis::Y, 1)
}

/// Spectral gradient of a scalar.
pub fn gradient(f: &SpectralScalarField) -> SpectralVectorField {
    SpectralVectorField::from_parts(
        spectral_derivative(f, Axis::X, 1),
        spectral_derivative(f, Axis::Y, 1),
    )
}
