use std::f64::consts::PI;

use crate::error::{Result, SolverError};

/// Side length of the periodic box on each axis.
pub const DOMAIN_LENGTH: f64 = 2.0 * PI;

/// Uniform collocation grid on the torus `[0, 2π)²`.
///
/// Nodes are `x_j = j·2π/M` for `j = 0..M` on both axes. Values on the grid
/// are stored row-major with the row index running over `y`, so sample
/// `(j1, j2)` lives at `j2 * M + j1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhysicalGrid {
    points: usize,
}

impl PhysicalGrid {
    pub fn new(points_per_axis: usize) -> Result<Self> {
        if points_per_axis < 4 || points_per_axis % 2 != 0 {
            return Err(SolverError::invalid(format!(
                "grid needs an even number of points >= 4, got {points_per_axis}"
            )));
        }
        Ok(Self {
            points: points_per_axis,
        })
    }

    #[inline]
    pub fn points(&self) -> usize {
        self.points
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points * self.points
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        DOMAIN_LENGTH / self.points as f64
    }

    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        j as f64 * self.spacing()
    }

    /// Node coordinate mapped into `(-π, π]`.
    #[inline]
    pub fn centered_node(&self, j: usize) -> f64 {
        let x = self.node(j);
        if x > PI {
            x - DOMAIN_LENGTH
        } else {
            x
        }
    }

    /// Largest truncation radius that keeps the Nyquist line empty.
    #[inline]
    pub fn max_radius(&self) -> usize {
        self.points / 2 - 1
    }

    /// Size of the zero-padded grid used for alias-free quadratic products.
    #[inline]
    pub fn padded_points(&self) -> usize {
        3 * self.points / 2
    }

    /// Signed wavenumber stored at FFT index `i`, in `-M/2+1 ..= M/2`.
    #[inline]
    pub fn wavenumber(&self, i: usize) -> i64 {
        wavenumber(i, self.points)
    }

    /// FFT index of `-k` given the index of `k`.
    #[inline]
    pub fn mirror(&self, i: usize) -> usize {
        (self.points - i) % self.points
    }

    /// FFT index holding signed wavenumber `k`; `None` if not representable.
    pub fn index_of(&self, k: i64) -> Option<usize> {
        let m = self.points as i64;
        if k <= -m / 2 || k > m / 2 {
            None
        } else {
            Some(k.rem_euclid(m) as usize)
        }
    }

    /// Iterate `(flat_index, k1, k2)` over every stored wavevector.
    pub fn wavevectors(&self) -> impl Iterator<Item = (usize, i64, i64)> + '_ {
        let m = self.points;
        (0..m).flat_map(move |i2| {
            let k2 = wavenumber(i2, m);
            (0..m).map(move |i1| (i2 * m + i1, wavenumber(i1, m), k2))
        })
    }

    /// Iterate `(flat_index, x, y)` over the collocation nodes.
    pub fn nodes(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        let m = self.points;
        (0..m).flat_map(move |j2| (0..m).map(move |j1| (j2 * m + j1, self.node(j1), self.node(j2))))
    }
}

#[inline]
pub(crate) fn wavenumber(i: usize, m: usize) -> i64 {
    if i <= m / 2 {
        i as i64
    } else {
        i as i64 - m as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_and_tiny_grids() {
        assert!(PhysicalGrid::new(2).is_err());
        assert!(PhysicalGrid::new(7).is_err());
        assert!(PhysicalGrid::new(0).is_err());
        assert!(PhysicalGrid::new(4).is_ok());
    }

    #[test]
    fn nodes_and_wavenumbers() {
        let g = PhysicalGrid::new(8).unwrap();
        assert_eq!(g.node(0), 0.0);
        assert!((g.node(2) - PI / 2.0).abs() < 1e-15);
        assert!((g.centered_node(4) - PI).abs() < 1e-15);
        assert!((g.centered_node(6) + PI / 2.0).abs() < 1e-15);
        let ks: Vec<i64> = (0..8).map(|i| g.wavenumber(i)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, 4, -3, -2, -1]);
        assert_eq!(g.mirror(0), 0);
        assert_eq!(g.mirror(3), 5);
        assert_eq!(g.index_of(-3), Some(5));
        assert_eq!(g.index_of(-4), None);
        assert_eq!(g.max_radius(), 3);
        assert_eq!(g.padded_points(), 12);
    }
}
