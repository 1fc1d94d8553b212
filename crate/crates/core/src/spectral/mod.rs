//! Fourier-space fields on the 2D torus and the operators acting on them.

mod field;
mod grid;
mod nonlinear;
mod ops;
pub(crate) mod transform;

pub use field::{FieldComponents, PhysicalField, SpectralScalarField, SpectralVectorField};
pub use grid::{PhysicalGrid, DOMAIN_LENGTH};
pub use nonlinear::{convective_term, Advection};
pub use ops::{
    curl, divergence, forward_transform, fractional_lambda, gradient, homogeneous_norm, inner_product,
    inverse_transform, inverse_vector, l2_norm, laplacian, leray_project, sobolev_norm, spectral_derivative,
    truncate, truncate_vector, Axis, IMAGINARY_TOLERANCE, SYMMETRY_TOLERANCE,
};
