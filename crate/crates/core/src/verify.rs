//! Executable inequality checks with hypothesis validation and margins.
//!
//! Every verifier returns a [`VerificationReport`] whose `margin` is
//! oriented so that `margin >= -slack` means the inequality holds.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{ensure_finite, invalid, Error, Result};
use crate::functionals::{
    area_at_boundary, area_series_value, length_at_boundary, length_function,
};
use crate::grid::{Grid, QuadratureSpec};
use crate::map::{qc_constant, HarmonicMap, QcConstant};
use crate::quadrature::pairwise_sum;
use crate::Complex;

/// Absolute slack for checks whose both sides are closed-form sums.
pub const CLOSED_FORM_SLACK: f64 = 1e-12;
/// Relative slack for checks with a quadrature-backed side.
pub const QUADRATURE_REL_SLACK: f64 = 1e-9;
/// Monte Carlo verdicts accept `lhs >= rhs - MC_SIGMAS · σ`.
pub const MC_SIGMAS: f64 = 3.0;
pub const MIN_MC_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    HypothesisViolated,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

impl Hypothesis {
    pub fn new(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            ok,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub point: Complex,
    pub value: f64,
}

/// Which way the checked inequality points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `lhs <= rhs`
    AtMost,
    /// `lhs >= rhs`
    AtLeast,
}

/// Result of one inequality check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub name: String,
    /// Coefficient index for per-`n` checks.
    pub n: Option<usize>,
    pub hypotheses_ok: bool,
    pub hypotheses: Vec<Hypothesis>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub slack: f64,
    pub status: Status,
    /// Combined a-posteriori error of `lhs` and `rhs`.
    pub error_estimate: f64,
    pub witnesses: Vec<Witness>,
    /// Auxiliary quantities (constants, component areas, ...).
    pub quantities: BTreeMap<String, f64>,
}

impl VerificationReport {
    pub fn new(
        name: impl Into<String>,
        hypotheses: Vec<Hypothesis>,
        lhs: f64,
        rhs: f64,
        direction: Direction,
        slack: f64,
    ) -> Self {
        let hypotheses_ok = hypotheses.iter().all(|h| h.ok);
        let margin = match direction {
            Direction::AtMost => rhs - lhs,
            Direction::AtLeast => lhs - rhs,
        };
        let status = if !hypotheses_ok {
            Status::HypothesisViolated
        } else if margin >= -slack {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            name: name.into(),
            n: None,
            hypotheses_ok,
            hypotheses,
            lhs,
            rhs,
            margin,
            slack,
            status,
            error_estimate: 0.0,
            witnesses: Vec::new(),
            quantities: BTreeMap::new(),
        }
    }

    fn violated(name: impl Into<String>, hypotheses: Vec<Hypothesis>) -> Self {
        Self::new(name, hypotheses, f64::NAN, f64::NAN, Direction::AtMost, 0.0)
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_error(mut self, e: f64) -> Self {
        self.error_estimate = e;
        self
    }

    pub fn with_witness(mut self, point: Complex, value: f64) -> Self {
        self.witnesses.push(Witness { point, value });
        self
    }

    pub fn with_quantity(mut self, key: &str, value: f64) -> Self {
        self.quantities.insert(key.to_string(), value);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// A disk `|z - center| < radius`, the concrete domain family used for the
/// area-overlap inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct DiskDomain {
    pub center: Complex,
    pub radius: f64,
}

impl DiskDomain {
    pub fn new(center: Complex, radius: f64) -> Result<Self> {
        ensure_finite("center.re", center.re)?;
        ensure_finite("center.im", center.im)?;
        if !(radius.is_finite() && radius > 0.0) {
            return Err(invalid(format!(
                "disk radius must be finite and positive, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }

    pub fn unit() -> Self {
        Self {
            center: Complex::default(),
            radius: 1.0,
        }
    }

    pub fn contains(&self, z: Complex) -> bool {
        (z - self.center).norm() < self.radius
    }

    /// Euclidean distance from `z` to the boundary circle.
    pub fn boundary_distance(&self, z: Complex) -> f64 {
        (self.radius - (z - self.center).norm()).abs()
    }
}

/// Quasiconformality hypothesis shared by several verifiers.
fn qc_hypothesis(f: &HarmonicMap, grid: &Grid) -> Result<(Option<f64>, Hypothesis)> {
    match qc_constant(f, grid) {
        Ok(QcConstant::Bounded { k, witness }) => Ok((
            Some(k),
            Hypothesis::new(
                "K-quasiconformal",
                true,
                format!("K = {k} (max at {witness})"),
            ),
        )),
        Ok(QcConstant::Unbounded { witness }) => Ok((
            None,
            Hypothesis::new(
                "K-quasiconformal",
                false,
                format!("λ_f vanishes at {witness}"),
            ),
        )),
        Err(Error::PreconditionViolated(msg)) => {
            Ok((None, Hypothesis::new("K-quasiconformal", false, msg)))
        }
        Err(e) => Err(e),
    }
}

fn origin_fixed(f: &HarmonicMap) -> Hypothesis {
    let v = f.a(0).norm();
    Hypothesis::new("f(0) = 0", v <= CLOSED_FORM_SLACK, format!("|f(0)| = {v}"))
}

/// Area three-circles inequality `S_f(r) <= m^{log r / log r1}` with
/// `m = S_f(r1)`.
pub fn verify_three_circles(f: &HarmonicMap, r1: f64, r: f64) -> Result<VerificationReport> {
    ensure_finite("r1", r1)?;
    ensure_finite("r", r)?;
    if !(r1 > 0.0 && r1 <= r && r < 1.0) {
        return Err(invalid(format!(
            "three-circles needs 0 < r1 <= r < 1, got r1 = {r1}, r = {r}"
        )));
    }
    let m = area_series_value(f, r1);
    let s1 = area_at_boundary(f).value;
    let hypotheses = vec![
        Hypothesis::new(
            "S_f(r1) < 1",
            m <= 1.0 - CLOSED_FORM_SLACK,
            format!("m = S_f(r1) = {m}"),
        ),
        Hypothesis::new(
            "S_f(1) <= 1",
            s1 <= 1.0 + CLOSED_FORM_SLACK,
            format!("S_f(1) = {s1}"),
        ),
        Hypothesis::new(
            "|b_n| <= |a_n|",
            f.has_coeff_dominance(CLOSED_FORM_SLACK),
            "coefficient dominance of the analytic part",
        ),
    ];
    let lhs = area_series_value(f, r);
    let rhs = if m > 0.0 {
        m.powf(r.ln() / r1.ln())
    } else {
        0.0
    };
    Ok(VerificationReport::new(
        format!("three-circles[r1={r1},r={r}]"),
        hypotheses,
        lhs,
        rhs,
        Direction::AtMost,
        CLOSED_FORM_SLACK,
    )
    .with_quantity("m", m)
    .with_quantity("S_f(1)", s1))
}

/// Area-overlap inequality
/// `K A(f(Ω₁) ∩ Ω₂) + A(f^{-1}(Ω₂)) >= min(d_{Ω₁}(0)², d_{Ω₂}(0)²)` for disk
/// domains, with normalized areas (Lebesgue area / π).
///
/// `f` is read on `Ω₁` through the affine chart `ζ ↦ (ζ - c₁)/R₁` onto the
/// unit disk. Both areas are Monte Carlo estimates from the same uniform
/// sample of `Ω₁`; the image area is `∫ J` over the preimage, i.e. counted
/// with multiplicity.
pub fn verify_area_overlap(
    f: &HarmonicMap,
    omega1: &DiskDomain,
    omega2: &DiskDomain,
    q: &QuadratureSpec,
    grid: &Grid,
) -> Result<VerificationReport> {
    q.validate()?;
    if q.mc_samples < MIN_MC_SAMPLES {
        return Err(invalid(format!(
            "area verdicts need at least {MIN_MC_SAMPLES} Monte Carlo samples, got {}",
            q.mc_samples
        )));
    }
    let origin = Complex::default();
    if !omega1.contains(origin) || !omega2.contains(origin) {
        return Err(invalid("both domains must contain the origin"));
    }
    let chart_origin = (origin - omega1.center) / omega1.radius;
    let f_origin = f.eval_unchecked(chart_origin).norm();
    let (k, qc) = qc_hypothesis(f, grid)?;
    let hypotheses = vec![
        Hypothesis::new(
            "f(0) = 0",
            f_origin <= CLOSED_FORM_SLACK,
            format!("|f(0)| = {f_origin}"),
        ),
        qc,
    ];
    let name = "area-overlap";
    let Some(k) = k.filter(|_| hypotheses.iter().all(|h| h.ok)) else {
        return Ok(VerificationReport::violated(name, hypotheses));
    };

    let r1_sq = omega1.radius * omega1.radius;
    let mut rng = ChaCha8Rng::seed_from_u64(q.seed);
    let mut combined = Vec::with_capacity(q.mc_samples);
    let mut image = Vec::with_capacity(q.mc_samples);
    let mut preimage = Vec::with_capacity(q.mc_samples);
    for _ in 0..q.mc_samples {
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        // uniform point of the unit disk, i.e. χ(ζ) for ζ uniform in Ω₁
        let z = Complex::from_polar(u.sqrt(), 2.0 * PI * v);
        let w = f.eval_unchecked(z);
        let (img, pre) = if omega2.contains(w) {
            // J_F(ζ) = J_f(z) / R₁², and Ω₁ has normalized area R₁²
            (f.derivatives_unchecked(z).jacobian, r1_sq)
        } else {
            (0.0, 0.0)
        };
        image.push(img);
        preimage.push(pre);
        combined.push(k * img + pre);
    }
    let n = q.mc_samples as f64;
    let lhs = pairwise_sum(&combined) / n;
    let deviations: Vec<f64> = combined.iter().map(|x| (x - lhs) * (x - lhs)).collect();
    let sigma = (pairwise_sum(&deviations) / (n - 1.0)).sqrt() / n.sqrt();
    let rhs = omega1
        .boundary_distance(origin)
        .powi(2)
        .min(omega2.boundary_distance(origin).powi(2));
    Ok(VerificationReport::new(
        name,
        hypotheses,
        lhs,
        rhs,
        Direction::AtLeast,
        MC_SIGMAS * sigma + CLOSED_FORM_SLACK,
    )
    .with_error(sigma)
    .with_quantity("K", k)
    .with_quantity("sigma", sigma)
    .with_quantity("image_area", pairwise_sum(&image) / n)
    .with_quantity("preimage_area", pairwise_sum(&preimage) / n))
}

/// `‖f‖₂² <= K A(f(D))`, with `‖f‖₂²` from the coefficient sum and
/// `A(f(D)) = S_f(1)` (counting multiplicity).
pub fn verify_hardy_area(f: &HarmonicMap, grid: &Grid) -> Result<VerificationReport> {
    let (k, qc) = qc_hypothesis(f, grid)?;
    let hypotheses = vec![origin_fixed(f), qc];
    let name = "hardy-area";
    let Some(k) = k.filter(|_| hypotheses.iter().all(|h| h.ok)) else {
        return Ok(VerificationReport::violated(name, hypotheses));
    };
    let terms: Vec<f64> = (0..=f.degree())
        .map(|n| f.a(n).norm_sqr() + f.b(n).norm_sqr())
        .collect();
    let lhs = pairwise_sum(&terms);
    let area = area_at_boundary(f).value;
    let rhs = k * area;
    Ok(VerificationReport::new(
        name,
        hypotheses,
        lhs,
        rhs,
        Direction::AtMost,
        QUADRATURE_REL_SLACK * rhs.abs(),
    )
    .with_quantity("K", k)
    .with_quantity("S_f(1)", area))
}

/// `|a_n| + |b_n| <= K l_f(1) / (2nπ)` for every `n = 1..=N`.
pub fn verify_coeff_bound(
    f: &HarmonicMap,
    grid: &Grid,
    q: &QuadratureSpec,
) -> Result<Vec<VerificationReport>> {
    let (k, qc) = qc_hypothesis(f, grid)?;
    let hypotheses = vec![qc];
    let Some(k) = k else {
        return Ok(vec![VerificationReport::violated(
            "coeff-bound",
            hypotheses,
        )]);
    };
    let length = length_at_boundary(f, q)?;
    Ok((1..=f.degree())
        .map(|n| {
            let scale = k / (2.0 * n as f64 * PI);
            let lhs = f.a(n).norm() + f.b(n).norm();
            let rhs = scale * length.value;
            VerificationReport::new(
                format!("coeff-bound[n={n}]"),
                hypotheses.clone(),
                lhs,
                rhs,
                Direction::AtMost,
                QUADRATURE_REL_SLACK * rhs,
            )
            .with_n(n)
            .with_error(scale * length.error_estimate)
            .with_quantity("K", k)
            .with_quantity("l_f(1)", length.value)
        })
        .collect())
}

/// Pointwise gradient bounds at each sample point:
/// `Λ_f(z) <= l_f(1)√K / (2π(1-|z|))` and `Λ_f(z)² <= S_f(1) K / (1-|z|)²`,
/// plus the Bloch consequence `β_f <= l_f(1)√K / π`.
///
/// Returns three aggregate reports; each carries its worst sample point.
pub fn verify_gradient_bound(
    f: &HarmonicMap,
    samples: &[Complex],
    grid: &Grid,
    q: &QuadratureSpec,
) -> Result<Vec<VerificationReport>> {
    if samples.is_empty() {
        return Err(invalid("gradient bound needs at least one sample point"));
    }
    if samples.iter().any(|z| !z.is_finite() || z.norm() >= 1.0) {
        return Err(invalid(
            "gradient bound samples must lie inside the unit disk",
        ));
    }
    let (k, qc) = qc_hypothesis(f, grid)?;
    let hypotheses = vec![qc];
    let Some(k) = k else {
        return Ok(["gradient-bound", "gradient-area-bound", "bloch-bound"]
            .iter()
            .map(|name| VerificationReport::violated(*name, hypotheses.clone()))
            .collect());
    };
    let length = length_at_boundary(f, q)?;
    let area = area_at_boundary(f).value;
    let sqrt_k = k.sqrt();

    let worst = |name: &str, bound: &dyn Fn(Complex) -> (f64, f64)| {
        let mut chosen: Option<(Complex, f64, f64, f64)> = None;
        for &z in samples {
            let (lhs, rhs) = bound(z);
            let score = (rhs - lhs) / rhs.abs().max(f64::MIN_POSITIVE);
            if chosen.is_none_or(|(.., best)| score < best) {
                chosen = Some((z, lhs, rhs, score));
            }
        }
        let (z, lhs, rhs, _) = chosen.expect("samples are non-empty");
        VerificationReport::new(
            name,
            hypotheses.clone(),
            lhs,
            rhs,
            Direction::AtMost,
            QUADRATURE_REL_SLACK * rhs,
        )
        .with_witness(z, lhs)
        .with_quantity("K", k)
        .with_quantity("l_f(1)", length.value)
        .with_quantity("S_f(1)", area)
    };

    let gradient = worst("gradient-bound", &|z| {
        let lam = f.derivatives_unchecked(z).max_stretch;
        (lam, length.value * sqrt_k / (2.0 * PI * (1.0 - z.norm())))
    })
    .with_error(length.error_estimate * sqrt_k / (2.0 * PI));
    let gradient_area = worst("gradient-area-bound", &|z| {
        let lam = f.derivatives_unchecked(z).max_stretch;
        (lam * lam, area * k / (1.0 - z.norm()).powi(2))
    });

    let beta = crate::functionals::bloch_seminorm(f, grid)?;
    let rhs = length.value * sqrt_k / PI;
    let bloch = VerificationReport::new(
        "bloch-bound",
        hypotheses.clone(),
        beta.value,
        rhs,
        Direction::AtMost,
        QUADRATURE_REL_SLACK * rhs,
    )
    .with_error(beta.error_estimate + length.error_estimate * sqrt_k / PI)
    .with_quantity("K", k)
    .with_quantity("l_f(1)", length.value);
    Ok(vec![gradient, gradient_area, bloch])
}

/// Isoperimetric inequality in normalized form, `S_f(r) <= l_f(r)² / (4π²)`.
pub fn verify_isoperimetric(
    f: &HarmonicMap,
    r: f64,
    q: &QuadratureSpec,
) -> Result<VerificationReport> {
    let length = length_function(f, r, q)?;
    let lhs = area_series_value(f, r);
    let rhs = length.value * length.value / (4.0 * PI * PI);
    Ok(VerificationReport::new(
        format!("isoperimetric[r={r}]"),
        Vec::new(),
        lhs,
        rhs,
        Direction::AtMost,
        QUADRATURE_REL_SLACK * rhs,
    )
    .with_error(2.0 * length.value * length.error_estimate / (4.0 * PI * PI))
    .with_quantity("l_f(r)", length.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn small_grid() -> Grid {
        Grid::new(16, 64, 0.999).unwrap()
    }

    #[test]
    fn three_circles_equality_for_affine_extremal() {
        let f = HarmonicMap::affine(c(2f64.sqrt(), 0.0), c(1.0, 0.0));
        let rep = verify_three_circles(&f, 0.3, 0.6).unwrap();
        assert!(rep.passed());
        assert_abs_diff_eq!(rep.lhs, 0.36, epsilon = 1e-12);
        assert!(rep.margin.abs() <= 1e-12);
    }

    #[test]
    fn three_circles_rejects_bad_radii_and_flags_hypotheses() {
        let f = HarmonicMap::identity();
        assert!(verify_three_circles(&f, 0.0, 0.5).is_err());
        assert!(verify_three_circles(&f, 0.5, 1.0).is_err());
        assert!(verify_three_circles(&f, 0.6, 0.5).is_err());
        let big = HarmonicMap::identity().scaled(2.0);
        let rep = verify_three_circles(&big, 0.6, 0.8).unwrap();
        assert_eq!(rep.status, Status::HypothesisViolated);
        let undominated = HarmonicMap::affine(c(0.5, 0.0), c(0.7, 0.0));
        let rep = verify_three_circles(&undominated, 0.3, 0.5).unwrap();
        assert_eq!(rep.status, Status::HypothesisViolated);
    }

    #[test]
    fn area_overlap_dilation_and_identity() {
        let q = QuadratureSpec {
            mc_samples: 20_000,
            ..Default::default()
        };
        let d = DiskDomain::unit();
        let rep = verify_area_overlap(
            &HarmonicMap::identity().scaled(0.5),
            &d,
            &d,
            &q,
            &small_grid(),
        )
        .unwrap();
        assert!(rep.passed());
        assert_abs_diff_eq!(rep.lhs, 1.25, epsilon = 1e-12);
        let rep = verify_area_overlap(&HarmonicMap::identity(), &d, &d, &q, &small_grid()).unwrap();
        assert_abs_diff_eq!(rep.lhs, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.rhs, 1.0);
    }

    #[test]
    fn area_overlap_argument_checks() {
        let q = QuadratureSpec {
            mc_samples: 20_000,
            ..Default::default()
        };
        let off = DiskDomain::new(c(2.0, 0.0), 1.0).unwrap();
        let d = DiskDomain::unit();
        assert!(
            verify_area_overlap(&HarmonicMap::identity(), &off, &d, &q, &small_grid()).is_err()
        );
        let few = QuadratureSpec {
            mc_samples: 100,
            ..q
        };
        assert!(
            verify_area_overlap(&HarmonicMap::identity(), &d, &d, &few, &small_grid()).is_err()
        );
        let shifted = HarmonicMap::new(vec![c(0.1, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0)]).unwrap();
        let rep = verify_area_overlap(&shifted, &d, &d, &q, &small_grid()).unwrap();
        assert_eq!(rep.status, Status::HypothesisViolated);
        assert!(DiskDomain::new(c(0.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn hardy_area_examples() {
        let rep = verify_hardy_area(&HarmonicMap::identity(), &small_grid()).unwrap();
        assert!(rep.passed());
        assert_eq!((rep.lhs, rep.rhs), (1.0, 1.0));
        let aff = HarmonicMap::affine(c(1.0, 0.0), c(0.5, 0.0));
        let rep = verify_hardy_area(&aff, &small_grid()).unwrap();
        assert!(rep.passed());
        assert_abs_diff_eq!(rep.lhs, 1.25);
        assert_abs_diff_eq!(rep.rhs, 2.25, epsilon = 1e-14);
        let fold = HarmonicMap::affine(c(1.0, 0.0), c(1.0, 0.0));
        assert_eq!(
            verify_hardy_area(&fold, &small_grid()).unwrap().status,
            Status::HypothesisViolated
        );
    }

    #[test]
    fn coeff_bound_examples() {
        let q = QuadratureSpec::default();
        let reps = verify_coeff_bound(&HarmonicMap::identity(), &small_grid(), &q).unwrap();
        assert_eq!(reps.len(), 1);
        assert!(reps[0].passed());
        assert_abs_diff_eq!(reps[0].rhs, 1.0, epsilon = 1e-12);
        let aff = HarmonicMap::affine(c(1.0, 0.0), c(0.5, 0.0));
        let reps = verify_coeff_bound(&aff, &small_grid(), &q).unwrap();
        assert!(reps[0].passed());
        assert_abs_diff_eq!(reps[0].lhs, 1.5);
        assert!(reps[0].rhs > 1.5);
    }

    #[test]
    fn gradient_bound_examples() {
        let q = QuadratureSpec::default();
        let reps =
            verify_gradient_bound(&HarmonicMap::identity(), &[c(0.0, 0.0)], &small_grid(), &q)
                .unwrap();
        assert!(reps.iter().all(|r| r.passed()));
        assert_abs_diff_eq!(reps[0].lhs, 1.0);
        assert_abs_diff_eq!(reps[0].rhs, 1.0, epsilon = 1e-12);
        let sq = HarmonicMap::from_terms(2, &[(1, c(1.0, 0.0)), (2, c(0.25, 0.0))], &[]).unwrap();
        let reps = verify_gradient_bound(&sq, &[c(0.5, 0.0)], &small_grid(), &q).unwrap();
        assert!(reps.iter().all(|r| r.passed()));
        assert_abs_diff_eq!(reps[0].lhs, 1.25, epsilon = 1e-15);
        // folding square: h' vanishes at the origin
        let fold = HarmonicMap::from_terms(2, &[(2, c(1.0, 0.0))], &[]).unwrap();
        let reps = verify_gradient_bound(&fold, &[c(0.5, 0.0)], &small_grid(), &q).unwrap();
        assert!(reps.iter().all(|r| r.status == Status::HypothesisViolated));
        assert!(verify_gradient_bound(&sq, &[], &small_grid(), &q).is_err());
    }

    #[test]
    fn isoperimetric_equality_for_identity() {
        let rep = verify_isoperimetric(&HarmonicMap::identity(), 0.6, &QuadratureSpec::default())
            .unwrap();
        assert!(rep.passed());
        assert!(rep.margin.abs() <= 1e-9);
    }
}
