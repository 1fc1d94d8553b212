//! Seeded random fields for property checks and the `verify` command.

use num_complex::Complex64;
use rand::Rng;

use crate::spectral::{leray_project, sobolev_norm, PhysicalGrid, SpectralScalarField, SpectralVectorField};

/// Random real scalar field with modes in `|k|_∞ <= radius`.
///
/// Coefficient amplitudes decay like `(1 + |k|²)^{-1}` so the field is smooth
/// but still exercises every retained mode.
pub fn random_scalar<R: Rng + ?Sized>(rng: &mut R, grid: PhysicalGrid, radius: usize) -> SpectralScalarField {
    let r = radius.min(grid.max_radius());
    let raw = SpectralScalarField::from_modes(grid, r, |k1, k2| {
        let decay = 1.0 / (1.0 + (k1 * k1 + k2 * k2) as f64);
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * (40.0 * decay)
    })
    .expect("radius clamped to grid");
    raw.symmetrized()
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, grid: PhysicalGrid, radius: usize) -> SpectralVectorField {
    let a = random_scalar(rng, grid, radius);
    let b = random_scalar(rng, grid, radius);
    SpectralVectorField::new(a, b).expect("same grid and radius")
}

/// Random divergence-free vector field.
pub fn random_solenoidal<R: Rng + ?Sized>(rng: &mut R, grid: PhysicalGrid, radius: usize) -> SpectralVectorField {
    leray_project(&random_vector(rng, grid, radius))
}

/// Random divergence-free, mean-free field normalised to unit `H^s` norm.
pub fn random_unit_sobolev<R: Rng + ?Sized>(
    rng: &mut R,
    grid: PhysicalGrid,
    radius: usize,
    s: f64,
) -> SpectralVectorField {
    let v = random_solenoidal(rng, grid, radius);
    let v = v.map(|c| {
        c.map_modes(|k1, k2| {
            if k1 == 0 && k2 == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
    });
    let n = sobolev_norm(&v, s).expect("non-negative order");
    v.scale(1.0 / n)
}

/// Deterministic generator for the random-field helpers.
pub fn seeded(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

/// `Π_N P(a·∇b)` by direct summation over all mode pairs, with `N` the
/// truncation of `b`. Costs `O(N⁴)`; meant as an oracle on small grids.
pub fn direct_transport(a: &SpectralVectorField, b: &SpectralVectorField) -> SpectralVectorField {
    let ra = a.truncation() as i64;
    let rb = b.truncation() as i64;
    let scale = 1.0 / (4.0 * std::f64::consts::PI * std::f64::consts::PI);
    let component = |bc: &SpectralScalarField| {
        SpectralScalarField::from_modes(b.grid(), rb as usize, |k1, k2| {
            let mut sum = Complex64::new(0.0, 0.0);
            for p1 in -ra..=ra {
                for p2 in -ra..=ra {
                    let (q1, q2) = (k1 - p1, k2 - p2);
                    if q1.abs() > rb || q2.abs() > rb {
                        continue;
                    }
                    let grad = Complex64::new(0.0, q1 as f64) * a.u1().coefficient(p1, p2)
                        + Complex64::new(0.0, q2 as f64) * a.u2().coefficient(p1, p2);
                    sum += grad * bc.coefficient(q1, q2);
                }
            }
            sum * scale
        })
        .expect("radius of b fits its grid")
    };
    let raw = SpectralVectorField::new(component(b.u1()), component(b.u2())).expect("same grid");
    leray_project(&raw)
}
