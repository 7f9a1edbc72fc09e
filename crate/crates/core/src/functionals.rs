//! Global functionals of harmonic maps: area and length functions, Hardy
//! means, Bloch seminorm and hyperbolic distance.
//!
//! Area uses the normalized measure (`σ(D) = 1`), so the identity map has
//! `S_f(r) = r²`. Lengths are unnormalized.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, invalid, Result};
use crate::grid::{Grid, QuadratureSpec};
use crate::map::HarmonicMap;
use crate::quadrature::{gauss_legendre_on, golden_max, pairwise_sum, periodic_mean_converged};
use crate::sup::estimate_sup;
use crate::Complex;

/// Node cap for doubling in periodic integrals.
const MAX_ANGULAR_NODES: usize = 1 << 16;
const CONVERGENCE_REL_TOL: f64 = 1e-14;
/// Rounding floor added to every a-posteriori quadrature error estimate.
const ROUNDING_FLOOR: f64 = 1e-13;
/// Largest `k` in the radius ladder `1 - 2^{-k}`.
pub const LADDER_DEPTH: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Series,
    Quadrature,
    GridSup,
    MonteCarlo,
}

/// A computed scalar with its provenance and an a-posteriori error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalValue {
    pub value: f64,
    pub method: Method,
    pub error_estimate: f64,
}

impl FunctionalValue {
    fn series(value: f64) -> Self {
        Self {
            value,
            method: Method::Series,
            error_estimate: 0.0,
        }
    }

    fn quadrature(value: f64, gap: f64) -> Self {
        Self {
            value,
            method: Method::Quadrature,
            error_estimate: gap + ROUNDING_FLOOR * value.abs().max(1.0),
        }
    }
}

/// Radii `1 - 2^{-k}` for `k = 1..=20`, closed by `r = 1`.
///
/// Polynomial maps extend continuously to the closed disk, so the
/// supremum over `0 < r < 1` of a continuous radial functional equals its
/// maximum over `[0, 1]`; the terminal rung makes that maximum exact.
pub fn radius_ladder() -> Vec<f64> {
    let mut ladder: Vec<f64> = (1..=LADDER_DEPTH)
        .map(|k| 1.0 - 0.5f64.powi(k as i32))
        .collect();
    ladder.push(1.0);
    ladder
}

fn check_radius(r: f64, lo_open: bool) -> Result<()> {
    ensure_finite("r", r)?;
    let below = if lo_open { r <= 0.0 } else { r < 0.0 };
    if below || r > 1.0 {
        return Err(invalid(format!("radius {r} outside the admissible range")));
    }
    Ok(())
}

/// `S_f(r) = Σ n(|a_n|² - |b_n|²) r^{2n}`.
pub fn area_series(f: &HarmonicMap, r: f64) -> Result<FunctionalValue> {
    check_radius(r, false)?;
    Ok(FunctionalValue::series(area_series_value(f, r)))
}

pub(crate) fn area_series_value(f: &HarmonicMap, r: f64) -> f64 {
    let r2 = r * r;
    let terms: Vec<f64> = (1..=f.degree())
        .map(|n| n as f64 * (f.a(n).norm_sqr() - f.b(n).norm_sqr()) * r2.powi(n as i32))
        .collect();
    pairwise_sum(&terms)
}

/// `S_f(1)`: the larger of the full coefficient sum and the radius-ladder
/// supremum. The two agree whenever the coefficient series is nonnegative
/// termwise.
pub fn area_at_boundary(f: &HarmonicMap) -> FunctionalValue {
    let ladder_sup = radius_ladder()
        .into_iter()
        .map(|r| area_series_value(f, r))
        .fold(f64::NEG_INFINITY, f64::max);
    FunctionalValue::series(area_series_value(f, 1.0).max(ladder_sup))
}

/// `S_f(r)` by Gauss-Legendre in radius and the periodic trapezoid rule in
/// angle, reported at doubled resolution with the gap as error estimate.
pub fn area_quadrature(f: &HarmonicMap, r: f64, q: &QuadratureSpec) -> Result<FunctionalValue> {
    q.validate()?;
    ensure_finite("r", r)?;
    if !(r > 0.0 && r < 1.0) {
        return Err(invalid(format!("area quadrature needs 0 < r < 1, got {r}")));
    }
    if q.radial_nodes < f.degree() {
        return Err(invalid(format!(
            "radial_nodes {} below map degree {}",
            q.radial_nodes,
            f.degree()
        )));
    }
    let coarse = area_quadrature_once(f, r, q.radial_nodes, q.angular_nodes);
    let fine = area_quadrature_once(f, r, 2 * q.radial_nodes, 2 * q.angular_nodes);
    Ok(FunctionalValue::quadrature(fine, (fine - coarse).abs()))
}

fn area_quadrature_once(f: &HarmonicMap, r: f64, radial: usize, angular: usize) -> f64 {
    // (1/π) ∫_0^r ∫_0^{2π} J ρ dθ dρ = 2 ∫_0^r ρ · mean_θ J dρ
    let step = 2.0 * PI / angular as f64;
    let rows: Vec<f64> = gauss_legendre_on(0.0, r, radial)
        .into_iter()
        .map(|(rho, w)| {
            let ring: Vec<f64> = (0..angular)
                .map(|j| {
                    f.derivatives_unchecked(Complex::from_polar(rho, j as f64 * step))
                        .jacobian
                })
                .collect();
            2.0 * w * rho * pairwise_sum(&ring) / angular as f64
        })
        .collect();
    pairwise_sum(&rows)
}

/// `l_f(r) = r ∫_0^{2π} |f_z(re^{iθ}) - e^{-2iθ} f_{z̄}(re^{iθ})| dθ`.
pub fn length_function(f: &HarmonicMap, r: f64, q: &QuadratureSpec) -> Result<FunctionalValue> {
    q.validate()?;
    check_radius(r, false)?;
    if r == 0.0 {
        return Ok(FunctionalValue::quadrature(0.0, 0.0));
    }
    let (mean, gap, _) = periodic_mean_converged(
        q.angular_nodes,
        MAX_ANGULAR_NODES,
        CONVERGENCE_REL_TOL,
        |t| {
            let d = f.derivatives_unchecked(Complex::from_polar(r, t));
            (d.fz - Complex::from_polar(1.0, -2.0 * t) * d.fzbar).norm()
        },
    );
    let scale = 2.0 * PI * r;
    Ok(FunctionalValue::quadrature(scale * mean, scale * gap))
}

/// `l_f(1) = sup_{0<r<1} l_f(r)` over [`radius_ladder`].
pub fn length_at_boundary(f: &HarmonicMap, q: &QuadratureSpec) -> Result<FunctionalValue> {
    sup_over_ladder(|r| length_function(f, r, q))
}

fn sup_over_ladder(eval: impl Fn(f64) -> Result<FunctionalValue>) -> Result<FunctionalValue> {
    let mut best: Option<FunctionalValue> = None;
    for r in radius_ladder() {
        let v = eval(r)?;
        if best.is_none_or(|b| v.value > b.value) {
            best = Some(v);
        }
    }
    Ok(best.expect("ladder is non-empty"))
}

/// Exponent of a Hardy mean; `p = ∞` is the circle maximum.
fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p <= 0.0 {
        return Err(invalid(format!(
            "Hardy exponent must lie in (0, ∞], got {p}"
        )));
    }
    Ok(())
}

/// `M_p(r, f) = ((1/2π) ∫ |f(re^{iθ})|^p dθ)^{1/p}`, or `max_θ |f(re^{iθ})|`
/// for `p = ∞`.
pub fn hardy_mean(f: &HarmonicMap, p: f64, r: f64, q: &QuadratureSpec) -> Result<FunctionalValue> {
    q.validate()?;
    check_exponent(p)?;
    check_radius(r, false)?;
    if p.is_infinite() {
        return Ok(circle_sup(
            |t| f.eval_unchecked(Complex::from_polar(r, t)).norm(),
            q.angular_nodes.max(8 * (f.degree() + 1)),
        ));
    }
    let (mean, gap, _) = periodic_mean_converged(
        q.angular_nodes,
        MAX_ANGULAR_NODES,
        CONVERGENCE_REL_TOL,
        |t| f.eval_unchecked(Complex::from_polar(r, t)).norm().powf(p),
    );
    let value = mean.powf(1.0 / p);
    // first-order propagation of the mean's gap through x ↦ x^{1/p}
    let gap = if mean > 0.0 {
        value * gap / (p * mean)
    } else {
        gap.powf(1.0 / p)
    };
    Ok(FunctionalValue::quadrature(value, gap))
}

/// `‖f‖_p = sup_{0<r<1} M_p(r, f)`.
pub fn hardy_norm(f: &HarmonicMap, p: f64, q: &QuadratureSpec) -> Result<FunctionalValue> {
    check_exponent(p)?;
    sup_over_ladder(|r| hardy_mean(f, p, r, q))
}

/// `M_2²(r, f) = Σ (|a_n|² + |b_n|²) r^{2n}` (Parseval).
pub fn hardy2_mean_sq_series(f: &HarmonicMap, r: f64) -> Result<FunctionalValue> {
    check_radius(r, false)?;
    let r2 = r * r;
    let terms: Vec<f64> = (0..=f.degree())
        .map(|n| (f.a(n).norm_sqr() + f.b(n).norm_sqr()) * r2.powi(n as i32))
        .collect();
    Ok(FunctionalValue::series(pairwise_sum(&terms)))
}

fn circle_sup(g: impl Fn(f64) -> f64, m: usize) -> FunctionalValue {
    let step = 2.0 * PI / m as f64;
    let mut samples: Vec<(f64, f64)> = (0..m)
        .map(|j| (g(j as f64 * step), j as f64 * step))
        .collect();
    samples.sort_by(|x, y| y.0.total_cmp(&x.0));
    let coarse = samples[0].0;
    let mut best = coarse;
    for &(_, t) in samples.iter().take(4) {
        let (_, v) = golden_max(&g, t - step, t + step, 1e-13);
        best = best.max(v);
    }
    FunctionalValue {
        value: best,
        method: Method::GridSup,
        error_estimate: best - coarse,
    }
}

/// `β_f = sup_{z ∈ D} (1 - |z|²) Λ_f(z)`.
pub fn bloch_seminorm(f: &HarmonicMap, grid: &Grid) -> Result<FunctionalValue> {
    grid.validate()?;
    let est = estimate_sup(
        |z| (1.0 - z.norm_sqr()).max(0.0) * f.derivatives_unchecked(z).max_stretch,
        grid,
        1.0,
    );
    Ok(FunctionalValue {
        value: est.value,
        method: Method::GridSup,
        error_estimate: est.error_estimate,
    })
}

/// `‖f‖_HB = |f(0)| + β_f`.
pub fn bloch_norm(f: &HarmonicMap, grid: &Grid) -> Result<FunctionalValue> {
    let beta = bloch_seminorm(f, grid)?;
    Ok(FunctionalValue {
        value: f.a(0).norm() + beta.value,
        ..beta
    })
}

/// `ρ(z, w) = artanh |(z - w) / (1 - conj(z) w)|`.
pub fn hyperbolic_distance(z: Complex, w: Complex) -> Result<f64> {
    for p in [z, w] {
        ensure_finite("point", p.re)?;
        ensure_finite("point", p.im)?;
        if p.norm() >= 1.0 {
            return Err(invalid(format!("point {p} is not inside the unit disk")));
        }
    }
    Ok(pseudo_hyperbolic(z, w).atanh())
}

pub(crate) fn pseudo_hyperbolic(z: Complex, w: Complex) -> f64 {
    ((z - w) / (Complex::new(1.0, 0.0) - z.conj() * w)).norm()
}

/// `|f(z) - f(w)| / ρ(z, w)` for distinct points of the disk.
pub fn lipschitz_ratio(f: &HarmonicMap, z: Complex, w: Complex) -> Result<f64> {
    if z == w {
        return Err(invalid("Lipschitz ratio needs distinct points"));
    }
    let rho = hyperbolic_distance(z, w)?;
    Ok((f.eval_unchecked(z) - f.eval_unchecked(w)).norm() / rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn area_series_examples() {
        let extremal = HarmonicMap::affine(c(2f64.sqrt(), 0.0), c(1.0, 0.0));
        assert_abs_diff_eq!(
            area_series(&extremal, 0.3).unwrap().value,
            0.09,
            epsilon = 1e-15
        );
        let sq = HarmonicMap::from_terms(2, &[(2, c(1.0, 0.0))], &[]).unwrap();
        assert_abs_diff_eq!(area_series(&sq, 0.5).unwrap().value, 0.125);
        assert_eq!(area_series(&sq, 0.0).unwrap().value, 0.0);
        assert!(area_series(&sq, 1.5).is_err());
    }

    #[test]
    fn area_quadrature_examples() {
        let q = QuadratureSpec::default();
        let id = HarmonicMap::identity();
        assert_abs_diff_eq!(
            area_quadrature(&id, 0.7, &q).unwrap().value,
            0.49,
            epsilon = 1e-12
        );
        let m = HarmonicMap::from_terms(2, &[(1, c(1.0, 0.0))], &[(2, c(0.3, 0.0))]).unwrap();
        assert_abs_diff_eq!(
            area_quadrature(&m, 0.5, &q).unwrap().value,
            0.23875,
            epsilon = 1e-10
        );
        let extremal = HarmonicMap::affine(c(1.25, 0.0), c(0.75, 0.0));
        assert_abs_diff_eq!(
            area_quadrature(&extremal, 0.3, &q).unwrap().value,
            0.09,
            epsilon = 1e-12
        );
        let thin = QuadratureSpec {
            radial_nodes: 1,
            ..q
        };
        assert!(area_quadrature(&m, 0.5, &thin).is_err());
    }

    #[test]
    fn boundary_area_takes_max_of_series_and_ladder() {
        // a_1 = 1, b_2 = 0.6 gives S(r) = r² - 0.72 r⁴, mixed signs
        let m = HarmonicMap::from_terms(2, &[(1, c(1.0, 0.0))], &[(2, c(0.6, 0.0))]).unwrap();
        let s1 = area_at_boundary(&m).value;
        assert!(s1 >= 1.0 - 0.72);
        // max of r² - 0.72 r⁴ on [0,1] is at r² = 1/1.44 with value 1/(4·0.72)
        assert!(s1 <= 1.0 / 2.88 + 1e-12);
        assert!(s1 > 0.28);
    }

    #[test]
    fn length_examples() {
        let q = QuadratureSpec::default();
        let id = HarmonicMap::identity();
        assert_abs_diff_eq!(
            length_function(&id, 0.5, &q).unwrap().value,
            PI,
            epsilon = 1e-14
        );
        assert_eq!(
            length_function(&HarmonicMap::constant(c(2.0, 1.0)), 0.5, &q)
                .unwrap()
                .value,
            0.0
        );
        assert_abs_diff_eq!(
            length_at_boundary(&id, &q).unwrap().value,
            2.0 * PI,
            epsilon = 1e-14
        );
    }

    #[test]
    fn hardy_examples() {
        let q = QuadratureSpec::default();
        let id = HarmonicMap::identity();
        assert_abs_diff_eq!(
            hardy_norm(&id, 2.0, &q).unwrap().value,
            1.0,
            epsilon = 1e-14
        );
        let k = HarmonicMap::constant(c(0.6, -0.8));
        for p in [0.5, 1.0, 3.0, f64::INFINITY] {
            assert_abs_diff_eq!(hardy_norm(&k, p, &q).unwrap().value, 1.0, epsilon = 1e-13);
        }
        let aff = HarmonicMap::affine(c(1.0, 0.0), c(0.5, 0.0));
        let m2 = hardy_mean(&aff, 2.0, 0.8, &q).unwrap().value;
        assert_abs_diff_eq!(m2 * m2, 0.8, epsilon = 1e-13);
        assert_abs_diff_eq!(
            hardy2_mean_sq_series(&aff, 0.8).unwrap().value,
            0.8,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            hardy_norm(&aff, f64::INFINITY, &q).unwrap().value,
            1.5,
            epsilon = 1e-12
        );
        assert!(hardy_mean(&aff, 0.0, 0.5, &q).is_err());
    }

    #[test]
    fn bloch_examples() {
        let grid = Grid::default();
        let id = HarmonicMap::identity();
        assert_abs_diff_eq!(bloch_seminorm(&id, &grid).unwrap().value, 1.0);
        let sq = HarmonicMap::from_terms(2, &[(2, c(1.0, 0.0))], &[]).unwrap();
        assert_abs_diff_eq!(
            bloch_seminorm(&sq, &grid).unwrap().value,
            4.0 / (3.0 * 3f64.sqrt()),
            epsilon = 1e-12
        );
        let aff = HarmonicMap::affine(c(1.25, 0.5), c(0.3, -0.4));
        let expected = c(1.25, 0.5).norm() + 0.5;
        assert_abs_diff_eq!(
            bloch_seminorm(&aff, &grid).unwrap().value,
            expected,
            epsilon = 1e-14
        );
        let shifted = HarmonicMap::new(vec![c(3.0, 4.0), c(1.0, 0.0)], vec![c(0.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(bloch_norm(&shifted, &grid).unwrap().value, 6.0);
    }

    #[test]
    fn hyperbolic_distance_examples() {
        let z = c(0.3, -0.2);
        assert_eq!(hyperbolic_distance(z, z).unwrap(), 0.0);
        assert_abs_diff_eq!(
            hyperbolic_distance(c(0.0, 0.0), c(0.5, 0.0)).unwrap(),
            0.549_306_144_334_054_8,
            epsilon = 1e-15
        );
        let w = c(-0.5, 0.4);
        let rot = Complex::from_polar(1.0, 0.77);
        assert_abs_diff_eq!(
            hyperbolic_distance(z, w).unwrap(),
            hyperbolic_distance(rot * z, rot * w).unwrap(),
            epsilon = 1e-14
        );
        assert!(hyperbolic_distance(c(1.0, 0.0), z).is_err());
    }

    #[test]
    fn lipschitz_ratio_examples() {
        let id = HarmonicMap::identity();
        let ratio = lipschitz_ratio(&id, c(0.0, 0.0), c(0.5, 0.0)).unwrap();
        assert_abs_diff_eq!(ratio, 0.5 / 0.5f64.atanh(), epsilon = 1e-15);
        assert!(ratio <= 1.0);
        assert_eq!(
            lipschitz_ratio(
                &HarmonicMap::constant(c(1.0, 1.0)),
                c(0.1, 0.0),
                c(0.2, 0.0)
            )
            .unwrap(),
            0.0
        );
        assert!(lipschitz_ratio(&id, c(0.1, 0.0), c(0.1, 0.0)).is_err());
    }
}
