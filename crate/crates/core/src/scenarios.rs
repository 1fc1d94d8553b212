//! Benchmark initial data and the manufactured forced solution.
//!
//! Vorticity-based benchmarks are written on `(-π, π]²`; grid nodes are
//! mapped there before evaluation and the samples are treated as periodic.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Result, SolverError};
use crate::spectral::{convective_term, PhysicalField, PhysicalGrid, SpectralScalarField, SpectralVectorField};
use crate::stepper::Forcing;

/// Default shear-layer thickness of the double shear flow.
pub const DOUBLE_SHEAR_RHO: f64 = PI / 15.0;

/// Vortex-family initial velocity
/// `(-(m/2) cos^m x cos^{m-1} y sin y, (m/2) cos^{m-1} x cos^m y sin x)`.
pub fn taylor_green_family(m: u32, grid: PhysicalGrid) -> Result<SpectralVectorField> {
    if m == 0 {
        return Err(SolverError::invalid("vortex family parameter m must be >= 1"));
    }
    let half = 0.5 * m as f64;
    let mi = m as i32;
    SpectralVectorField::from_fn(grid, |x, y| {
        let (cx, cy) = (x.cos(), y.cos());
        (
            -half * cx.powi(mi) * cy.powi(mi - 1) * y.sin(),
            half * cx.powi(mi - 1) * cy.powi(mi) * x.sin(),
        )
    })
}

/// Double shear layer vorticity (values only), `y` in `(-π, π]`.
pub fn double_shear_value(x: f64, y: f64, rho0: f64) -> f64 {
    let sech2 = |z: f64| {
        let c = z.cosh();
        1.0 / (c * c)
    };
    let base = 0.05 * (x + PI).cos();
    if y <= 0.0 {
        base - sech2((y + PI / 2.0) / rho0) / rho0
    } else {
        base + sech2((y - PI / 2.0) / rho0) / rho0
    }
}

pub fn double_shear_vorticity(rho0: f64, grid: PhysicalGrid) -> Result<SpectralScalarField> {
    if !(rho0 > 0.0) {
        return Err(SolverError::invalid(format!("rho0 must be > 0, got {rho0}")));
    }
    SpectralScalarField::from_samples(grid, centered_samples(grid, |x, y| double_shear_value(x, y, rho0)))
}

/// Two co-rotating Gaussian vortices (values only), coordinates in `(-π, π]`.
pub fn gaussian_vortices_value(x: f64, y: f64) -> f64 {
    let q = PI / 4.0;
    (-5.0 * ((x + q).powi(2) + y * y)).exp() + (-5.0 * ((x - q).powi(2) + y * y)).exp()
}

pub fn gaussian_vortices_vorticity(grid: PhysicalGrid) -> Result<SpectralScalarField> {
    SpectralScalarField::from_samples(grid, centered_samples(grid, gaussian_vortices_value))
}

/// Samples `f` at the grid nodes mapped into `(-π, π]²`.
pub fn centered_samples(grid: PhysicalGrid, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    let m = grid.points();
    let mut out = Vec::with_capacity(grid.len());
    for j2 in 0..m {
        let y = grid.centered_node(j2);
        for j1 in 0..m {
            out.push(f(grid.centered_node(j1), y));
        }
    }
    out
}

/// Mean-free velocity whose vorticity `∂ₓu₂ - ∂ᵧu₁` is `w - mean(w)`:
/// `û(k) = i (k₂, -k₁) ŵ(k) / |k|²`.
pub fn velocity_from_vorticity(w: &SpectralScalarField) -> SpectralVectorField {
    let inv = |k1: i64, k2: i64| {
        let kk = (k1 * k1 + k2 * k2) as f64;
        if kk == 0.0 {
            0.0
        } else {
            1.0 / kk
        }
    };
    let u1 = w.map_modes(|k1, k2| Complex64::new(0.0, k2 as f64 * inv(k1, k2)));
    let u2 = w.map_modes(|k1, k2| Complex64::new(0.0, -(k1 as f64) * inv(k1, k2)));
    SpectralVectorField::new(u1, u2).expect("components share the vorticity grid")
}

/// Manufactured velocity `e^{-t} (-½ sin x cos y, ½ cos x sin y)`.
pub fn manufactured_velocity(t: f64, grid: PhysicalGrid) -> Result<SpectralVectorField> {
    if !(t >= 0.0) {
        return Err(SolverError::invalid(format!("time must be >= 0, got {t}")));
    }
    let a = 0.5 * (-t).exp();
    SpectralVectorField::from_fn(grid, |x, y| (-a * x.sin() * y.cos(), a * x.cos() * y.sin()))
}

/// Which equation the manufactured forcing closes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForcingModel {
    /// `f = ∂_t u_e + P(u_e·∇u_e)`, independent of viscosity.
    Euler,
}

/// Forcing that makes [`manufactured_velocity`] an exact solution, evaluated
/// spectrally from `∂_t u_e = -u_e` and the projected transport term.
pub fn manufactured_forcing(t: f64, model: ForcingModel, grid: PhysicalGrid) -> Result<SpectralVectorField> {
    match model {
        ForcingModel::Euler => {
            let u = manufactured_velocity(t, grid)?;
            let transport = convective_term(&u, &u)?;
            Ok(u.scale(-1.0).axpy(1.0, &transport))
        }
    }
}

/// A named initial condition with optional exact solution and forcing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scenario {
    TaylorGreen { m: u32 },
    DoubleShear { rho0: f64 },
    GaussianVortices,
    Manufactured,
}

impl Scenario {
    pub fn name(&self) -> String {
        match self {
            Scenario::TaylorGreen { m } => format!("taylor-green-{m}"),
            Scenario::DoubleShear { .. } => "double-shear".into(),
            Scenario::GaussianVortices => "gaussian-vortices".into(),
            Scenario::Manufactured => "manufactured".into(),
        }
    }

    pub fn initial_velocity(&self, grid: PhysicalGrid) -> Result<SpectralVectorField> {
        match *self {
            Scenario::TaylorGreen { m } => taylor_green_family(m, grid),
            Scenario::DoubleShear { rho0 } => Ok(velocity_from_vorticity(&double_shear_vorticity(rho0, grid)?)),
            Scenario::GaussianVortices => Ok(velocity_from_vorticity(&gaussian_vortices_vorticity(grid)?)),
            Scenario::Manufactured => manufactured_velocity(0.0, grid),
        }
    }

    pub fn has_exact_solution(&self) -> bool {
        matches!(self, Scenario::Manufactured)
    }

    pub fn exact_solution(&self, t: f64, grid: PhysicalGrid) -> Option<Result<SpectralVectorField>> {
        match self {
            Scenario::Manufactured => Some(manufactured_velocity(t, grid)),
            _ => None,
        }
    }

    pub fn is_forced(&self) -> bool {
        matches!(self, Scenario::Manufactured)
    }

    pub fn forcing(&self, grid: PhysicalGrid) -> Option<Forcing> {
        match self {
            Scenario::Manufactured => Some(Arc::new(move |t: f64| {
                manufactured_forcing(t.max(0.0), ForcingModel::Euler, grid)
                    .expect("manufactured forcing is finite on a valid grid")
            })),
            _ => None,
        }
    }

    /// Initial vorticity on the grid, for snapshots.
    pub fn initial_vorticity(&self, grid: PhysicalGrid) -> Result<PhysicalField> {
        crate::diagnostics::vorticity_snapshot(&self.initial_velocity(grid)?)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Scenario {
    type Err = SolverError;

    /// Accepts `taylor-green[-m]`, `double-shear`, `gaussian-vortices`, `manufactured`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if let Some(rest) = s.strip_prefix("taylor-green") {
            let m = match rest.strip_prefix('-') {
                None if rest.is_empty() => 2,
                Some(v) => v
                    .parse()
                    .map_err(|_| SolverError::invalid(format!("bad vortex family parameter in '{s}'")))?,
                _ => return Err(SolverError::invalid(format!("unknown scenario '{s}'"))),
            };
            return Ok(Scenario::TaylorGreen { m });
        }
        match s.as_str() {
            "double-shear" => Ok(Scenario::DoubleShear { rho0: DOUBLE_SHEAR_RHO }),
            "gaussian-vortices" => Ok(Scenario::GaussianVortices),
            "manufactured" => Ok(Scenario::Manufactured),
            other => Err(SolverError::invalid(format!("unknown scenario '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{curl, inner_product, l2_norm, leray_project};
    use crate::testing::random_scalar;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid(m: usize) -> PhysicalGrid {
        PhysicalGrid::new(m).unwrap()
    }

    #[test]
    fn taylor_green_point_value_and_support() {
        let g = grid(16);
        let u = taylor_green_family(1, g).unwrap().to_physical().unwrap();
        // node (π/2, 0) is j1 = 4, j2 = 0 on a 16-point grid
        assert!(u.at(0, 4, 0).abs() < 1e-14);
        assert!((u.at(1, 4, 0) - 0.5).abs() < 1e-14);
        let g = grid(32);
        for m in [1, 2, 5, 8] {
            let v = taylor_green_family(m, g).unwrap();
            assert!(v.divergence_defect() < 1e-12, "m={m}");
        }
        let v = taylor_green_family(2, g).unwrap();
        for c in [v.u1(), v.u2()] {
            for (i, k1, k2) in g.wavevectors() {
                if k1.abs().max(k2.abs()) > 3 {
                    assert!(c.coefficients()[i].norm() <= 1e-12);
                }
            }
        }
        assert!(taylor_green_family(0, g).is_err());
    }

    #[test]
    fn double_shear_values() {
        let rho = DOUBLE_SHEAR_RHO;
        assert!((double_shear_value(0.0, -PI / 2.0, rho) - (-0.05 - 15.0 / PI)).abs() < 1e-12);
        assert!((double_shear_value(0.0, PI / 2.0, rho) - (-0.05 + 15.0 / PI)).abs() < 1e-12);
        assert!((double_shear_value(0.0, -PI / 2.0, rho) + 4.8246).abs() < 1e-4);
        let g = grid(128);
        let w = double_shear_vorticity(rho, g).unwrap();
        assert!(w.mean().abs() < 1e-3);
        assert!(double_shear_vorticity(0.0, g).is_err());
    }

    #[test]
    fn gaussian_vortex_values() {
        assert!((gaussian_vortices_value(0.0, 0.0) - 2.0 * (-5.0 * PI * PI / 16.0).exp()).abs() < 1e-15);
        assert!((gaussian_vortices_value(0.0, 0.0) - 0.0915).abs() < 1e-4);
        assert!((gaussian_vortices_value(PI / 4.0, 0.0) - 1.0).abs() < 1e-5);
        let g = grid(64);
        let s = centered_samples(g, gaussian_vortices_value);
        let m = g.points();
        for j2 in 0..m {
            for j1 in 0..m {
                let mirror = (m - j1) % m;
                assert!((s[j2 * m + j1] - s[j2 * m + mirror]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn vorticity_inversion() {
        let g = grid(32);
        let w = SpectralScalarField::from_fn(g, |x, _| x.cos()).unwrap();
        let u = velocity_from_vorticity(&w);
        let expect = SpectralVectorField::from_fn(g, |x, _| (0.0, x.sin())).unwrap();
        assert!(l2_norm(&(&u - &expect)) < 1e-12);
        assert_eq!(l2_norm(&velocity_from_vorticity(&SpectralScalarField::zeros(g))), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..5 {
            let w = random_scalar(&mut rng, g, 15);
            let u = velocity_from_vorticity(&w);
            assert!(u.divergence_defect() < 1e-12);
            let back = curl(&u);
            let mut expect = w.clone();
            expect = &expect - &SpectralScalarField::from_fn(g, |_, _| w.mean()).unwrap();
            let scale = w.max_abs_coefficient();
            for (a, b) in back.coefficients().iter().zip(expect.coefficients()) {
                assert!((a - b).norm() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn manufactured_solution() {
        let g = grid(64);
        let u0 = manufactured_velocity(0.0, g).unwrap().to_physical().unwrap();
        // node (π/2, 0)
        assert!((u0.at(0, 16, 0) + 0.5).abs() < 1e-14);
        assert!(u0.at(1, 16, 0).abs() < 1e-14);
        for t in [0.0, 0.3, 1.7] {
            let u = manufactured_velocity(t, g).unwrap();
            let n = l2_norm(&u);
            assert!((n - PI / 2f64.sqrt() * (-t as f64).exp()).abs() < 1e-12);
            let scaled = manufactured_velocity(0.0, g).unwrap().scale((-t as f64).exp());
            assert!(l2_norm(&(&u - &scaled)) < 1e-13);
        }
        assert!(manufactured_velocity(-1.0, g).is_err());
        let f = manufactured_forcing(0.5, ForcingModel::Euler, g).unwrap();
        let u = manufactured_velocity(0.5, g).unwrap();
        assert!(l2_norm(&(&f + &u)) < 1e-12);
        assert!(l2_norm(&(&leray_project(&f) - &f)) < 1e-13);
        let w = crate::testing::random_solenoidal(&mut ChaCha8Rng::seed_from_u64(2), g, 10);
        assert!(inner_product(&f, &w).unwrap().is_finite());
    }

    #[test]
    fn scenario_parsing_and_invariants() {
        assert_eq!("taylor-green".parse::<Scenario>().unwrap(), Scenario::TaylorGreen { m: 2 });
        assert_eq!("taylor-green-20".parse::<Scenario>().unwrap(), Scenario::TaylorGreen { m: 20 });
        assert_eq!("gaussian-vortices".parse::<Scenario>().unwrap(), Scenario::GaussianVortices);
        assert!("taylor-greenish".parse::<Scenario>().is_err());
        assert!("vortex-street".parse::<Scenario>().is_err());
        let g = grid(64);
        for s in [
            Scenario::TaylorGreen { m: 2 },
            Scenario::TaylorGreen { m: 8 },
            Scenario::DoubleShear { rho0: DOUBLE_SHEAR_RHO },
            Scenario::GaussianVortices,
            Scenario::Manufactured,
        ] {
            let u = s.initial_velocity(g).unwrap();
            assert!(u.divergence_defect() < 1e-12, "{s}");
            let mean = u.u1().mean().abs() + u.u2().mean().abs();
            assert!(mean < 1e-12, "{s} mean {mean}");
        }
        let exact0 = Scenario::Manufactured.exact_solution(0.0, g).unwrap().unwrap();
        assert!(l2_norm(&(&exact0 - &Scenario::Manufactured.initial_velocity(g).unwrap())) < 1e-12);
    }
}
