//! Error norms, per-step monitors and convergence sweeps.

mod monitor;
mod record;
mod sweep;

pub use monitor::{energy_monitor, EnergyMonitor, EnergyReport, GradientDissipationMonitor, Violation, ENERGY_TOLERANCE};
pub use record::{parse_norm_list, DiagnosticsRecord, ErrorNorms, NormKind};
pub use sweep::{convergence_sweep, halvings, observed_orders, SweepAxis, SweepBase, SweepFailure, SweepRow, SweepSpec, SweepTable};

use crate::error::{Result, SolverError};
use crate::spectral::{curl, homogeneous_norm, inverse_transform, inverse_vector, l2_norm, PhysicalField, SpectralVectorField};

/// How [`error_norms`] combines components, for output metadata.
pub const ERROR_NORM_CONVENTION: &str = "linf=sum-of-component-maxima hs=l2-plus-homogeneous";

/// Errors of `u` against `exact` in each requested norm.
///
/// `L∞` is the sum over the two components of the grid maximum of the
/// pointwise difference; `H^s` is `‖e‖_{L²} + ‖Λ^s e‖_{L²}`.
pub fn error_norms(u: &SpectralVectorField, exact: &SpectralVectorField, norms: &[NormKind]) -> Result<ErrorNorms> {
    if u.grid() != exact.grid() {
        return Err(SolverError::GridMismatch {
            left: u.grid().points(),
            right: exact.grid().points(),
            left_radius: u.truncation(),
            right_radius: exact.truncation(),
        });
    }
    let e = u - exact;
    let mut physical: Option<PhysicalField> = None;
    let mut out = Vec::with_capacity(norms.len());
    for &kind in norms {
        let v = match kind {
            NormKind::L2 => l2_norm(&e),
            NormKind::LInf => {
                if physical.is_none() {
                    physical = Some(inverse_vector(&e)?);
                }
                let p = physical.as_ref().expect("just computed");
                p.components()
                    .iter()
                    .map(|c| c.iter().fold(0.0_f64, |m, v| m.max(v.abs())))
                    .sum()
            }
            NormKind::Sobolev(s) => l2_norm(&e) + homogeneous_norm(&e, s)?,
        };
        out.push((kind, v));
    }
    Ok(ErrorNorms(out))
}

/// Vorticity `∂ₓu₂ - ∂ᵧu₁` on the grid.
pub fn vorticity_snapshot(u: &SpectralVectorField) -> Result<PhysicalField> {
    inverse_transform(&curl(u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::taylor_green_family;
    use crate::spectral::PhysicalGrid;
    use crate::testing::random_solenoidal;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn error_norm_cases() {
        let g = PhysicalGrid::new(32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let u = random_solenoidal(&mut rng, g, 15);
        let norms = [NormKind::L2, NormKind::LInf, NormKind::Sobolev(1.0), NormKind::Sobolev(6.0)];
        let zero = error_norms(&u, &u, &norms).unwrap();
        assert!(zero.values().iter().all(|v| *v == 0.0));
        let c = 0.3;
        let shifted = &u + &SpectralVectorField::from_fn(g, |_, _| (c, 0.0)).unwrap();
        let e = error_norms(&shifted, &u, &norms).unwrap();
        assert!((e.get(NormKind::LInf).unwrap() - c).abs() < 1e-13);
        assert!((e.get(NormKind::L2).unwrap() - 2.0 * PI * c).abs() < 1e-12);
        // a constant has no Λ^s part
        assert!((e.get(NormKind::Sobolev(6.0)).unwrap() - 2.0 * PI * c).abs() < 1e-12);
        let other = SpectralVectorField::zeros(PhysicalGrid::new(16).unwrap());
        assert!(error_norms(&u, &other, &norms).is_err());
    }

    #[test]
    fn vorticity_of_simple_fields() {
        let g = PhysicalGrid::new(32).unwrap();
        let u = SpectralVectorField::from_fn(g, |x, _| (0.0, x.sin())).unwrap();
        let w = vorticity_snapshot(&u).unwrap();
        for (i, x, _) in g.nodes() {
            assert!((w.component(0)[i] - x.cos()).abs() < 1e-12);
        }
        let tg = vorticity_snapshot(&taylor_green_family(1, g).unwrap()).unwrap();
        for (i, x, y) in g.nodes() {
            assert!((tg.component(0)[i] - x.cos() * y.cos()).abs() < 1e-12);
        }
        let z = vorticity_snapshot(&SpectralVectorField::zeros(g)).unwrap();
        assert_eq!(z.max_abs(), 0.0);
    }
}
