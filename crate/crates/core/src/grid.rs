//! Sampling and integration configuration.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::Complex;

/// Polar sampling grid on a closed sub-disk `|z| <= r_max < 1`.
///
/// Nodes are the origin plus `n_r` Chebyshev-spaced rings in `(0, r_max]`,
/// each carrying `n_theta` equally spaced angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grid {
    pub n_r: usize,
    pub n_theta: usize,
    pub r_max: f64,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            n_r: 64,
            n_theta: 256,
            r_max: 0.999,
        }
    }
}

impl Grid {
    pub fn new(n_r: usize, n_theta: usize, r_max: f64) -> Result<Self> {
        let grid = Self {
            n_r,
            n_theta,
            r_max,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_r < 1 {
            return Err(invalid("grid needs at least one ring"));
        }
        if self.n_theta < 8 {
            return Err(invalid(format!(
                "grid needs n_theta >= 8, got {}",
                self.n_theta
            )));
        }
        if !(self.r_max > 0.0 && self.r_max < 1.0) {
            return Err(invalid(format!(
                "grid r_max must lie in (0, 1), got {}",
                self.r_max
            )));
        }
        Ok(())
    }

    /// Ring radii in increasing order; the last one is `r_max`.
    pub fn radii(&self) -> Vec<f64> {
        let n = self.n_r as f64;
        (1..=self.n_r)
            .map(|k| self.r_max * 0.5 * (1.0 - (k as f64 * PI / n).cos()))
            .collect()
    }

    pub fn angles(&self) -> Vec<f64> {
        let step = 2.0 * PI / self.n_theta as f64;
        (0..self.n_theta).map(|j| j as f64 * step).collect()
    }

    /// All nodes, origin first, then ring by ring.
    pub fn nodes(&self) -> Vec<Complex> {
        let angles = self.angles();
        let mut nodes = Vec::with_capacity(1 + self.n_r * self.n_theta);
        nodes.push(Complex::new(0.0, 0.0));
        for r in self.radii() {
            nodes.extend(angles.iter().map(|&t| Complex::from_polar(r, t)));
        }
        nodes
    }

    pub fn len(&self) -> usize {
        1 + self.n_r * self.n_theta
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Resolution parameters for disk and circle integrals and Monte Carlo runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSpec {
    /// Gauss-Legendre node count in the radial direction.
    pub radial_nodes: usize,
    /// Uniform periodic trapezoid node count in angle. Must be even.
    pub angular_nodes: usize,
    pub mc_samples: usize,
    pub seed: u64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            radial_nodes: 24,
            angular_nodes: 128,
            mc_samples: 1_000_000,
            seed: 42,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.radial_nodes == 0 {
            return Err(invalid("radial_nodes must be positive"));
        }
        if self.angular_nodes < 8 || !self.angular_nodes.is_multiple_of(2) {
            return Err(invalid(format!(
                "angular_nodes must be even and >= 8, got {}",
                self.angular_nodes
            )));
        }
        Ok(())
    }

    /// Same spec with both deterministic resolutions doubled.
    pub fn doubled(&self) -> Self {
        Self {
            radial_nodes: self.radial_nodes * 2,
            angular_nodes: self.angular_nodes * 2,
            ..*self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_stay_inside_the_disk() {
        let grid = Grid::default();
        let nodes = grid.nodes();
        assert_eq!(nodes.len(), grid.len());
        assert_eq!(nodes[0], Complex::new(0.0, 0.0));
        let max = nodes.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(max <= grid.r_max + 1e-15 && max < 1.0);
        let radii = grid.radii();
        assert!(radii.windows(2).all(|w| w[0] < w[1]));
        assert!(radii[0] > 0.0);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::new(0, 16, 0.5).is_err());
        assert!(Grid::new(4, 4, 0.5).is_err());
        assert!(Grid::new(4, 16, 1.0).is_err());
        let q = QuadratureSpec {
            angular_nodes: 33,
            ..Default::default()
        };
        assert!(q.validate().is_err());
    }
}
