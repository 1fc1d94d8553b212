//! Shared fixtures for the criterion benchmarks.

use vislimit_core::scenarios::taylor_green_family;
use vislimit_core::{PhysicalGrid, SpectralVectorField};

/// Vortex-family state (`m = 2`) on a `points × points` grid.
pub fn fixture(points: usize) -> (PhysicalGrid, SpectralVectorField) {
    let grid = PhysicalGrid::new(points).expect("benchmark grids are valid");
    let u = taylor_green_family(2, grid).expect("finite initial data");
    (grid, u)
}
