//! Supremum estimation over a disk: coarse grid scan, then local
//! golden-section refinement in radius and angle around the best nodes.

use std::f64::consts::PI;

use crate::grid::Grid;
use crate::quadrature::golden_max;
use crate::Complex;

/// Number of coarse-grid maxima that get refined.
const SEEDS: usize = 4;
const ROUNDS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupEstimate {
    pub value: f64,
    pub point: Complex,
    /// Gap between the last two refinement iterates.
    pub error_estimate: f64,
}

/// Estimates `sup objective(z)` over `|z| <= r_limit`, where `r_limit` may
/// exceed the grid's `r_max` (up to the closed unit disk).
pub fn estimate_sup(objective: impl Fn(Complex) -> f64, grid: &Grid, r_limit: f64) -> SupEstimate {
    let radii = grid.radii();
    let angles = grid.angles();
    let dtheta = 2.0 * PI / grid.n_theta as f64;

    // (value, ring index or None for origin, angle index)
    let mut scored: Vec<(f64, Option<usize>, usize)> = Vec::with_capacity(grid.len());
    scored.push((objective(Complex::default()), None, 0));
    for (i, &r) in radii.iter().enumerate() {
        for (j, &t) in angles.iter().enumerate() {
            scored.push((objective(Complex::from_polar(r, t)), Some(i), j));
        }
    }
    scored.sort_by(|x, y| y.0.total_cmp(&x.0));

    let (coarse_value, coarse_ring, coarse_angle) = scored[0];
    let mut best = SupEstimate {
        value: coarse_value,
        point: node_point(&radii, &angles, coarse_ring, coarse_angle),
        error_estimate: 0.0,
    };
    let mut best_gap = f64::INFINITY;

    for &(_, ring, j) in scored.iter().take(SEEDS) {
        let (r_lo, r_hi) = match ring {
            None => (0.0, radii[0]),
            Some(i) => {
                let lo = if i == 0 { 0.0 } else { radii[i - 1] };
                let hi = if i + 1 < radii.len() {
                    radii[i + 1]
                } else {
                    r_limit
                };
                (lo, hi.min(r_limit))
            }
        };
        let mut r = ring.map_or(0.0, |i| radii[i]);
        let mut theta = angles[j];
        let mut iterates = vec![objective(Complex::from_polar(r, theta))];
        for _ in 0..ROUNDS {
            let (r_new, _) = golden_max(
                |s| objective(Complex::from_polar(s, theta)),
                r_lo,
                r_hi,
                1e-12,
            );
            r = r_new;
            let (t_new, v) = golden_max(
                |t| objective(Complex::from_polar(r, t)),
                theta - dtheta,
                theta + dtheta,
                1e-12,
            );
            theta = t_new;
            iterates.push(v);
        }
        let last = iterates[iterates.len() - 1];
        let gap = (last - iterates[iterates.len() - 2]).abs();
        if last > best.value {
            best.value = last;
            best.point = Complex::from_polar(r, theta);
            best_gap = gap;
        }
    }
    best.error_estimate = if best_gap.is_finite() { best_gap } else { 0.0 };
    best
}

fn node_point(radii: &[f64], angles: &[f64], ring: Option<usize>, j: usize) -> Complex {
    match ring {
        None => Complex::default(),
        Some(i) => Complex::from_polar(radii[i], angles[j]),
    }
}
