//! Majorants and estimators for Lipschitz-type characterizations of
//! harmonic maps on the unit disk.
//!
//! Distances to the boundary are `d(z) = 1 - |z|`. Constants are reported
//! as empirical suprema of the relevant ratios.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, invalid, Result};
use crate::functionals::{FunctionalValue, Method};
use crate::grid::{Grid, QuadratureSpec};
use crate::map::HarmonicMap;
use crate::quadrature::{adaptive_gauss, adaptive_simpson, gauss_legendre_on, pairwise_sum};
use crate::sup::estimate_sup;
use crate::verify::{Direction, Hypothesis, VerificationReport};
use crate::Complex;

/// Pairs closer than this are skipped by ratio estimators.
pub const MIN_PAIR_SEPARATION: f64 = 1e-12;
/// Points closer than this to the unit circle are skipped.
pub const MIN_BOUNDARY_DISTANCE: f64 = 1e-9;
/// Points used by the reverse Hardy-Littlewood check satisfy `d(z) >= this`.
pub const REVERSE_CHECK_MIN_DISTANCE: f64 = 1e-3;
/// Upper truncation of the far integral, as a multiple of `δ`.
pub const FAR_TRUNCATION: f64 = 1e6;
/// Lower truncation of the near integral, as a multiple of `δ`.
const NEAR_TRUNCATION: f64 = 1e-10;

fn boundary_distance(z: Complex) -> f64 {
    1.0 - z.norm()
}

/// A majorant `ω`: continuous, increasing, `ω(0) = 0`, `ω(t)/t` non-increasing.
///
/// Serialized as `{"family":"power","alpha":0.5}` or
/// `{"family":"sampled","table":[[t, ω(t)], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MajorantSpec", into = "MajorantSpec")]
pub struct Majorant {
    family: Family,
}

#[derive(Debug, Clone, PartialEq)]
enum Family {
    Power { alpha: f64 },
    Sampled(SampledTable),
}

/// Piecewise power law through the table nodes (log-linear interpolation),
/// extended below the first and above the last node by the end segments'
/// power laws.
#[derive(Debug, Clone, PartialEq)]
struct SampledTable {
    t: Vec<f64>,
    w: Vec<f64>,
    /// Log-log slope of each segment, all in `(0, 1]`.
    slopes: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
enum MajorantSpec {
    Power { alpha: f64 },
    Sampled { table: Vec<[f64; 2]> },
}

impl TryFrom<MajorantSpec> for Majorant {
    type Error = crate::Error;

    fn try_from(spec: MajorantSpec) -> Result<Self> {
        match spec {
            MajorantSpec::Power { alpha } => Majorant::power(alpha),
            MajorantSpec::Sampled { table } => {
                Majorant::sampled(table.into_iter().map(|[t, w]| (t, w)).collect())
            }
        }
    }
}

impl From<Majorant> for MajorantSpec {
    fn from(m: Majorant) -> Self {
        match m.family {
            Family::Power { alpha } => MajorantSpec::Power { alpha },
            Family::Sampled(s) => MajorantSpec::Sampled {
                table: s.t.iter().zip(&s.w).map(|(&t, &w)| [t, w]).collect(),
            },
        }
    }
}

impl Majorant {
    /// `ω_α(t) = t^α`, `0 < α <= 1`.
    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(invalid(format!(
                "power majorant needs 0 < alpha <= 1, got {alpha}"
            )));
        }
        Ok(Self {
            family: Family::Power { alpha },
        })
    }

    /// Majorant through the points `(t_i, ω(t_i))`, with `t` and `ω`
    /// strictly increasing and positive and `ω(t)/t` non-increasing.
    pub fn sampled(table: Vec<(f64, f64)>) -> Result<Self> {
        if table.len() < 2 {
            return Err(invalid("sampled majorant needs at least two points"));
        }
        if table
            .iter()
            .any(|&(t, w)| !(t.is_finite() && w.is_finite() && t > 0.0 && w > 0.0))
        {
            return Err(invalid(
                "sampled majorant entries must be finite and positive",
            ));
        }
        let mut slopes = Vec::with_capacity(table.len() - 1);
        for pair in table.windows(2) {
            let ((t0, w0), (t1, w1)) = (pair[0], pair[1]);
            if t1 <= t0 || w1 <= w0 {
                return Err(invalid(format!(
                    "sampled majorant must be strictly increasing near t = {t0}"
                )));
            }
            let slope = (w1 / w0).ln() / (t1 / t0).ln();
            if slope > 1.0 + 1e-12 {
                return Err(invalid(format!(
                    "ω(t)/t increases between t = {t0} and t = {t1}"
                )));
            }
            slopes.push(slope.min(1.0));
        }
        let (t, w) = table.into_iter().unzip();
        let majorant = Self {
            family: Family::Sampled(SampledTable { t, w, slopes }),
        };
        majorant.check_ratio_monotone()?;
        Ok(majorant)
    }

    pub fn alpha(&self) -> Option<f64> {
        match self.family {
            Family::Power { alpha } => Some(alpha),
            Family::Sampled(_) => None,
        }
    }

    /// `ω(t)` for `t >= 0`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        ensure_finite("t", t)?;
        if t < 0.0 {
            return Err(invalid(format!("majorant argument must be >= 0, got {t}")));
        }
        Ok(self.value(t))
    }

    pub(crate) fn value(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match &self.family {
            Family::Power { alpha } => t.powf(*alpha),
            Family::Sampled(s) => {
                let last = s.t.len() - 1;
                let i = match s.t.partition_point(|&x| x <= t) {
                    0 => 0,
                    k if k > last => last - 1,
                    k => k - 1,
                };
                s.w[i] * (t / s.t[i]).powf(s.slopes[i])
            }
        }
    }

    /// Power-law exponent governing `ω` near `t` from below (`near_zero`)
    /// or beyond `t` (`!near_zero`), if `ω` is an exact power law there.
    fn local_exponent(&self, t: f64, near_zero: bool) -> Option<f64> {
        match &self.family {
            Family::Power { alpha } => Some(*alpha),
            Family::Sampled(s) => {
                if near_zero && t <= s.t[0] {
                    Some(s.slopes[0])
                } else if !near_zero && t >= s.t[s.t.len() - 1] {
                    Some(s.slopes[s.slopes.len() - 1])
                } else {
                    None
                }
            }
        }
    }

    /// `ω(t)/t` non-increasing on a log-spaced probe set.
    fn check_ratio_monotone(&self) -> Result<()> {
        let (lo, hi) = match &self.family {
            Family::Power { .. } => (1e-8, 1e8),
            Family::Sampled(s) => (s.t[0] * 0.1, s.t[s.t.len() - 1] * 10.0),
        };
        let probes = 512;
        let step = (hi / lo).ln() / probes as f64;
        let mut prev = f64::INFINITY;
        for k in 0..=probes {
            let t = lo * (k as f64 * step).exp();
            let ratio = self.value(t) / t;
            if ratio > prev * (1.0 + 1e-12) {
                return Err(invalid(format!("ω(t)/t increases near t = {t}")));
            }
            prev = ratio;
        }
        Ok(())
    }
}

/// Outcome of probing `ω(λt) <= λ ω(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingCheck {
    pub passed: bool,
    /// Smallest `λω(t) - ω(λt)` over the probes.
    pub worst_margin: f64,
    /// Probe `(λ, t)` attaining the worst margin.
    pub witness: Option<(f64, f64)>,
}

/// Checks `ω(λt) <= λ ω(t)` at every probe `(λ >= 1, t > 0)`.
pub fn check_scaling_lemma(omega: &Majorant, probes: &[(f64, f64)]) -> Result<ScalingCheck> {
    let mut worst = ScalingCheck {
        passed: true,
        worst_margin: f64::INFINITY,
        witness: None,
    };
    for &(lambda, t) in probes {
        ensure_finite("lambda", lambda)?;
        ensure_finite("t", t)?;
        if lambda < 1.0 {
            return Err(invalid(format!(
                "scaling probe needs lambda >= 1, got {lambda}"
            )));
        }
        if t <= 0.0 {
            return Err(invalid(format!("scaling probe needs t > 0, got {t}")));
        }
        let rhs = lambda * omega.value(t);
        let margin = rhs - omega.value(lambda * t);
        if margin < worst.worst_margin {
            worst.worst_margin = margin;
            worst.witness = Some((lambda, t));
        }
        if margin < -1e-12 * rhs {
            worst.passed = false;
        }
    }
    Ok(worst)
}

/// Empirical constants of the two regularity conditions
/// `∫_0^δ ω(t)/t dt <= C ω(δ)` and `δ ∫_δ^∞ ω(t)/t² dt <= C ω(δ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularityReport {
    pub delta0: f64,
    /// `None` when the near integral diverges.
    pub c_eq2: Option<f64>,
    /// `None` when the far integral diverges.
    pub c_eq3: Option<f64>,
    /// Bound on the far integral's truncation at `FAR_TRUNCATION · δ` when
    /// it is not accounted for analytically, relative to `ω(δ)`.
    pub c_eq3_truncation_error: f64,
}

/// Probes `δ` log-spaced in `(0, delta0)` and reports the largest ratio
/// of each integral to `ω(δ)`.
pub fn regularity_check(omega: &Majorant, delta0: f64, probes: usize) -> Result<RegularityReport> {
    ensure_finite("delta0", delta0)?;
    if delta0 <= 0.0 {
        return Err(invalid(format!("delta0 must be positive, got {delta0}")));
    }
    if probes == 0 {
        return Err(invalid("regularity check needs at least one probe"));
    }
    let span = 1e6_f64.ln();
    let mut c_eq2: Option<f64> = Some(0.0);
    let mut c_eq3: Option<f64> = Some(0.0);
    let mut truncation = 0.0_f64;
    for k in 0..probes {
        let delta = delta0 * (-(k as f64 + 1.0) * span / probes as f64).exp();
        let w_delta = omega.value(delta);
        match near_integral(omega, delta) {
            Some(v) => c_eq2 = c_eq2.map(|c| c.max(v / w_delta)),
            None => c_eq2 = None,
        }
        match far_integral(omega, delta) {
            Some((v, tail_err)) => {
                c_eq3 = c_eq3.map(|c| c.max(delta * v / w_delta));
                truncation = truncation.max(delta * tail_err / w_delta);
            }
            None => c_eq3 = None,
        }
    }
    Ok(RegularityReport {
        delta0,
        c_eq2,
        c_eq3,
        c_eq3_truncation_error: truncation,
    })
}

/// `∫_0^δ ω(t)/t dt`, integrated in `u = ln t` with an analytic head below
/// the truncation point.
fn near_integral(omega: &Majorant, delta: f64) -> Option<f64> {
    let mut t_low = delta * NEAR_TRUNCATION;
    if let Family::Sampled(s) = &omega.family {
        t_low = t_low.min(0.5 * s.t[0]);
    }
    let head = omega.value(t_low) / omega.local_exponent(t_low, true)?;
    let tol = 1e-13 * omega.value(delta);
    let body = adaptive_simpson(&|u: f64| omega.value(u.exp()), t_low.ln(), delta.ln(), tol);
    Some(head + body)
}

/// `∫_δ^∞ ω(t)/t² dt` truncated at `T = FAR_TRUNCATION · δ`. The power
/// family adds its exact tail; sampled majorants return the tail estimate
/// from the local exponent as error instead. `None` on divergence.
fn far_integral(omega: &Majorant, delta: f64) -> Option<(f64, f64)> {
    let t_high = delta * FAR_TRUNCATION;
    let tol = 1e-13 * omega.value(delta) / delta;
    let body = adaptive_simpson(
        &|u: f64| omega.value(u.exp()) * (-u).exp(),
        delta.ln(),
        t_high.ln(),
        tol,
    );
    let exponent = omega.local_exponent(t_high, false);
    let tail = |s: f64| omega.value(t_high) / (t_high * (1.0 - s));
    match (&omega.family, exponent) {
        (_, Some(s)) if s >= 1.0 - 1e-12 => None,
        (Family::Power { .. }, Some(s)) => Some((body + tail(s), 0.0)),
        (_, Some(s)) => Some((body, tail(s))),
        // T inside the table: the remaining table span is integrated numerically
        (Family::Sampled(tab), None) => {
            let t_last = tab.t[tab.t.len() - 1];
            let s_last = tab.slopes[tab.slopes.len() - 1];
            if s_last >= 1.0 - 1e-12 {
                return None;
            }
            let rest = adaptive_simpson(
                &|u: f64| omega.value(u.exp()) * (-u).exp(),
                t_high.ln(),
                t_last.ln(),
                tol,
            );
            let far = omega.value(t_last) / (t_last * (1.0 - s_last));
            Some((body, rest + far))
        }
        (Family::Power { .. }, None) => unreachable!("power majorants have a global exponent"),
    }
}

/// `C₁ = sup_z Λ_f(z) / ω(1/d(z))`.
pub fn cond_a_constant(f: &HarmonicMap, omega: &Majorant, grid: &Grid) -> Result<FunctionalValue> {
    grid.validate()?;
    let est = estimate_sup(
        |z| {
            let d = boundary_distance(z);
            if d < MIN_BOUNDARY_DISTANCE {
                return 0.0;
            }
            f.derivatives_unchecked(z).max_stretch / omega.value(1.0 / d)
        },
        grid,
        1.0 - MIN_BOUNDARY_DISTANCE,
    );
    Ok(FunctionalValue {
        value: est.value,
        method: Method::GridSup,
        error_estimate: est.error_estimate,
    })
}

fn check_pair(z: Complex, w: Complex) -> Result<()> {
    for p in [z, w] {
        if !p.is_finite() || p.norm() >= 1.0 {
            return Err(invalid(format!(
                "pair point {p} is not inside the unit disk"
            )));
        }
    }
    Ok(())
}

/// `C₂ = sup |f(z) - f(w)| / (|z - w| ω(1/√(d(z)d(w))))` over the pairs.
pub fn cond_b_constant(
    f: &HarmonicMap,
    omega: &Majorant,
    pairs: &[(Complex, Complex)],
) -> Result<f64> {
    let mut sup = 0.0_f64;
    for &(z, w) in pairs {
        check_pair(z, w)?;
        let sep = (z - w).norm();
        let (dz, dw) = (boundary_distance(z), boundary_distance(w));
        if sep < MIN_PAIR_SEPARATION || dz < MIN_BOUNDARY_DISTANCE || dw < MIN_BOUNDARY_DISTANCE {
            continue;
        }
        let ratio = (f.eval_unchecked(z) - f.eval_unchecked(w)).norm()
            / sep
            / omega.value(1.0 / (dz * dw).sqrt());
        sup = sup.max(ratio);
    }
    Ok(sup)
}

/// Mean of `|f(ζ) - f(z)|` over the disk `D(z, r)` with respect to Lebesgue
/// area (`|D(z, r)| = πr²`), by Gauss-Legendre in radius and the trapezoid
/// rule in angle.
pub fn mean_oscillation(f: &HarmonicMap, z: Complex, r: f64, q: &QuadratureSpec) -> Result<f64> {
    q.validate()?;
    ensure_finite("r", r)?;
    if !z.is_finite() || z.norm() >= 1.0 {
        return Err(invalid(format!("center {z} is not inside the unit disk")));
    }
    let d = boundary_distance(z);
    if r <= 0.0 || r > d * (1.0 + 1e-12) {
        return Err(invalid(format!(
            "oscillation radius {r} must lie in (0, d(z) = {d}]"
        )));
    }
    let fz = f.eval_unchecked(z);
    let m = q.angular_nodes;
    let step = 2.0 * PI / m as f64;
    // (1/(πr²)) ∫_0^r ∫_0^{2π} |f(z + ρe^{iφ}) - f(z)| ρ dφ dρ
    let rows: Vec<f64> = gauss_legendre_on(0.0, r, q.radial_nodes)
        .into_iter()
        .map(|(rho, wt)| {
            let ring: Vec<f64> = (0..m)
                .map(|j| {
                    (f.eval_unchecked(z + Complex::from_polar(rho, j as f64 * step)) - fz).norm()
                })
                .collect();
            wt * rho * pairwise_sum(&ring) / m as f64
        })
        .collect();
    Ok(2.0 * pairwise_sum(&rows) / (r * r))
}

/// Mean oscillation at every `(z, r)` probe, as `(r, mean)` pairs.
pub fn oscillation_table(
    f: &HarmonicMap,
    probes: &[(Complex, Vec<f64>)],
    q: &QuadratureSpec,
) -> Result<Vec<(f64, f64)>> {
    let mut table = Vec::new();
    for (z, radii) in probes {
        for &r in radii {
            table.push((r, mean_oscillation(f, *z, r, q)?));
        }
    }
    Ok(table)
}

fn cond_c_from_table(omega: &Majorant, table: &[(f64, f64)]) -> f64 {
    table
        .iter()
        .map(|&(r, mean)| mean / (r * omega.value(1.0 / r)))
        .fold(0.0, f64::max)
}

/// `C₃ = sup mean_oscillation(z, r) / (r ω(1/r))` over the given centers
/// and radii.
pub fn cond_c_constant(
    f: &HarmonicMap,
    omega: &Majorant,
    probes: &[(Complex, Vec<f64>)],
    q: &QuadratureSpec,
) -> Result<f64> {
    Ok(cond_c_from_table(omega, &oscillation_table(f, probes, q)?))
}

/// Centers at radii `{0, 0.3, 0.6, 0.9}` (8 angles each off the origin),
/// each probed at `r ∈ {d, d/2, d/4, d/10}`.
pub fn default_oscillation_probes() -> Vec<(Complex, Vec<f64>)> {
    let mut centers = vec![Complex::default()];
    for rho in [0.3, 0.6, 0.9] {
        centers.extend((0..8).map(|j| Complex::from_polar(rho, j as f64 * PI / 4.0)));
    }
    centers
        .into_iter()
        .map(|z| {
            let d = boundary_distance(z);
            (z, vec![d, d / 2.0, d / 4.0, d / 10.0])
        })
        .collect()
}

/// Deterministic pair sample inside `|z| <= r_max`: half independent
/// uniform pairs, half near-diagonal pairs with separation up to `1e-3`.
pub fn sample_pairs(count: usize, seed: u64, r_max: f64) -> Vec<(Complex, Complex)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let point = |rng: &mut ChaCha8Rng| {
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        Complex::from_polar(r_max * u.sqrt(), 2.0 * PI * v)
    };
    (0..count)
        .map(|i| {
            let z = point(&mut rng);
            if i % 2 == 0 {
                (z, point(&mut rng))
            } else {
                let sep = 1e-3 * rng.random::<f64>().max(1e-6);
                let w = z + Complex::from_polar(sep, 2.0 * PI * rng.random::<f64>());
                if w.norm() <= r_max {
                    (z, w)
                } else {
                    (z, z - (w - z))
                }
            }
        })
        .collect()
}

/// Both sides of `1/(1 - |φ(t)|) <= 1/√((1-t) t d(w) d(z))` with
/// `φ(t) = zt + (1-t)w`.
pub fn segment_distance_bound(z: Complex, w: Complex, t: f64) -> Result<(f64, f64)> {
    check_pair(z, w)?;
    if !(t > 0.0 && t < 1.0) {
        return Err(invalid(format!(
            "segment parameter must lie in (0, 1), got {t}"
        )));
    }
    let phi = z * t + w * (1.0 - t);
    let lhs = 1.0 / (1.0 - phi.norm());
    let rhs = 1.0 / ((1.0 - t) * t * boundary_distance(w) * boundary_distance(z)).sqrt();
    Ok((lhs, rhs))
}

fn check_kernel_point(w: Complex, z: Complex, r: f64, theta: f64) -> Result<()> {
    for (name, x) in [
        ("w.re", w.re),
        ("w.im", w.im),
        ("z.re", z.re),
        ("z.im", z.im),
        ("r", r),
        ("theta", theta),
    ] {
        ensure_finite(name, x)?;
    }
    if r <= 0.0 {
        return Err(invalid(format!("kernel radius must be positive, got {r}")));
    }
    if (w - z).norm() >= r {
        return Err(invalid(format!(
            "kernel needs |w - z| < r, got |w - z| = {}",
            (w - z).norm()
        )));
    }
    Ok(())
}

/// Poisson kernel of `D(z, r)`: `(r² - |w-z|²) / |w - z - re^{iθ}|²`.
pub fn poisson_kernel(w: Complex, z: Complex, r: f64, theta: f64) -> Result<f64> {
    check_kernel_point(w, z, r, theta)?;
    let u = w - z;
    Ok((r * r - u.norm_sqr()) / (u - Complex::from_polar(r, theta)).norm_sqr())
}

/// `(∂P/∂w, ∂P/∂w̄)` of [`poisson_kernel`] in closed form.
pub fn poisson_kernel_derivatives(
    w: Complex,
    z: Complex,
    r: f64,
    theta: f64,
) -> Result<(Complex, Complex)> {
    check_kernel_point(w, z, r, theta)?;
    let u = w - z;
    let c = Complex::from_polar(r, theta);
    let dist2 = (u - c).norm_sqr();
    let numer = r * r - u.norm_sqr();
    let d_w = (-u.conj() * dist2 - (u.conj() - c.conj()) * numer) / (dist2 * dist2);
    let d_wbar = (-u * dist2 - (u - c) * numer) / (dist2 * dist2);
    Ok((d_w, d_wbar))
}

/// Bound on both kernel derivatives valid for `w ∈ D(z, r/2)`.
pub fn poisson_derivative_bound(r: f64) -> f64 {
    21.0 / (2.0 * r)
}

/// `max_θ |w cos θ + z sin θ|` on a 4096-node grid, and the closed form
/// `(|w + iz| + |w - iz|) / 2`.
pub fn trig_max_identity(w: Complex, z: Complex) -> (f64, f64) {
    const NODES: usize = 4096;
    let step = 2.0 * PI / NODES as f64;
    let grid_max = (0..NODES)
        .map(|j| {
            let t = j as f64 * step;
            (w * t.cos() + z * t.sin()).norm()
        })
        .fold(0.0, f64::max);
    let i = Complex::new(0.0, 1.0);
    let closed = 0.5 * ((w + i * z).norm() + (w - i * z).norm());
    (grid_max, closed)
}

/// Largest directional derivative `max_θ |f_x cos θ + f_y sin θ|` from
/// central-difference partials (step `h`) on the 4096-node grid, paired
/// with `Λ_f(z)`.
pub fn directional_stretch(f: &HarmonicMap, z: Complex, h: f64) -> Result<(f64, f64)> {
    if !z.is_finite() || z.norm() + h > 1.0 {
        return Err(invalid(format!(
            "finite-difference stencil at {z} leaves the disk"
        )));
    }
    let i = Complex::new(0.0, 1.0);
    let fx = (f.eval_unchecked(z + h) - f.eval_unchecked(z - h)) / (2.0 * h);
    let fy = (f.eval_unchecked(z + i * h) - f.eval_unchecked(z - i * h)) / (2.0 * h);
    let (grid_max, _) = trig_max_identity(fx, fy);
    Ok((grid_max, f.derivatives_unchecked(z).max_stretch))
}

/// Chain of constants for the three equivalent Lipschitz-type conditions,
/// one report per majorant.
///
/// Passes when `C₂ <= π C₁` (the factor visible in the (a) ⇒ (b)
/// argument) and all three constants are finite.
pub fn verify_lipschitz_chain(
    f: &HarmonicMap,
    omegas: &[Majorant],
    grid: &Grid,
    pairs: &[(Complex, Complex)],
    oscillation_probes: &[(Complex, Vec<f64>)],
    q: &QuadratureSpec,
) -> Result<Vec<VerificationReport>> {
    let table = oscillation_table(f, oscillation_probes, q)?;
    let mut out = Vec::with_capacity(omegas.len());
    for omega in omegas {
        let c1 = cond_a_constant(f, omega, grid)?;
        let c2 = cond_b_constant(f, omega, pairs)?;
        let c3 = cond_c_from_table(omega, &table);
        let finite = c1.value.is_finite() && c2.is_finite() && c3.is_finite();
        let hyps = vec![Hypothesis::new(
            "constants finite",
            finite,
            format!("C1 = {}, C2 = {c2}, C3 = {c3}", c1.value),
        )];
        let ratio = |x: f64| if c1.value > 0.0 { x / c1.value } else { 0.0 };
        out.push(
            VerificationReport::new(
                "lipschitz-16",
                hyps,
                c2,
                PI * c1.value,
                Direction::AtMost,
                1e-6,
            )
            .with_error(PI * c1.error_estimate)
            .with_quantity("C1", c1.value)
            .with_quantity("C2", c2)
            .with_quantity("C3", c3)
            .with_quantity("C2/C1", ratio(c2))
            .with_quantity("C3/C1", ratio(c3)),
        );
    }
    Ok(out)
}

/// Forward and reverse checks of the gradient/Lipschitz equivalence on the
/// unit disk, with segments as connecting curves.
///
/// Forward: with `C₄ = sup Λ_f d/ω(d)`, every pair must satisfy
/// `|f(z)-f(w)| <= ∫_[w,z] Λ_f ds <= C₄ ∫_[w,z] ω(d)/d ds`; `lhs` is the
/// worst link ratio (must be `<= 1`).
///
/// Reverse: with `C₅ = sup |f(z)-f(w)|/ω(|z-w|)` over the pairs,
/// `sup Λ_f d/ω(d)` over grid nodes with `d >= 1e-3` must not exceed
/// `21 C₅ / π`.
pub fn verify_hl_equivalence(
    f: &HarmonicMap,
    omega: &Majorant,
    grid: &Grid,
    pairs: &[(Complex, Complex)],
) -> Result<(VerificationReport, VerificationReport)> {
    grid.validate()?;
    let regular = regularity_check(omega, 1.0, 8)?;
    let hyps = vec![Hypothesis::new(
        "ω satisfies the near-integral condition",
        regular.c_eq2.is_some(),
        format!("c_eq2 = {:?}", regular.c_eq2),
    )];
    if regular.c_eq2.is_none() {
        let v = VerificationReport::new(
            "hl-17-forward",
            hyps.clone(),
            f64::NAN,
            f64::NAN,
            Direction::AtMost,
            0.0,
        );
        return Ok((
            v.clone(),
            VerificationReport {
                name: "hl-17-reverse".into(),
                ..v
            },
        ));
    }

    let gradient_ratio = |z: Complex| {
        let d = boundary_distance(z);
        if d < MIN_BOUNDARY_DISTANCE {
            return 0.0;
        }
        f.derivatives_unchecked(z).max_stretch * d / omega.value(d)
    };
    let c4 = estimate_sup(gradient_ratio, grid, 1.0 - MIN_BOUNDARY_DISTANCE);

    let mut link_first = 0.0_f64;
    let mut link_second = 0.0_f64;
    let mut c_prime = 0.0_f64;
    let mut c5 = 0.0_f64;
    let mut worst_pair = None;
    for &(z, w) in pairs {
        check_pair(z, w)?;
        let sep = (z - w).norm();
        if sep < MIN_PAIR_SEPARATION {
            continue;
        }
        let diff = (f.eval_unchecked(z) - f.eval_unchecked(w)).norm();
        let along = |g: &dyn Fn(Complex) -> f64| {
            let integrand = |t: f64| g(w + (z - w) * t);
            let scale = integrand(0.5).abs().max(integrand(0.0).abs()).max(1e-300);
            sep * adaptive_gauss(&integrand, 0.0, 1.0, 1e-13 * scale)
        };
        let stretch = along(&|p| f.derivatives_unchecked(p).max_stretch);
        let majorant = c4.value
            * along(&|p| {
                let d = boundary_distance(p);
                omega.value(d) / d
            });
        let first = if diff == 0.0 { 0.0 } else { diff / stretch };
        let second = if stretch == 0.0 {
            0.0
        } else {
            stretch / majorant
        };
        if first.max(second) > link_first.max(link_second) {
            worst_pair = Some(z);
        }
        link_first = link_first.max(first);
        link_second = link_second.max(second);
        let w_sep = omega.value(sep);
        c_prime = c_prime.max(diff / w_sep);
        c5 = c5.max(diff / w_sep);
    }
    let inflation = if c4.value > 0.0 {
        c_prime / c4.value
    } else {
        0.0
    };
    let mut forward = VerificationReport::new(
        "hl-17-forward",
        hyps.clone(),
        link_first.max(link_second),
        1.0,
        Direction::AtMost,
        1e-9,
    )
    .with_error(c4.error_estimate)
    .with_quantity("C4", c4.value)
    .with_quantity("C_prime", c_prime)
    .with_quantity("inflation", inflation)
    .with_quantity("link_difference_vs_stretch", link_first)
    .with_quantity("link_stretch_vs_majorant", link_second);
    if let Some(z) = worst_pair {
        forward = forward.with_witness(z, link_first.max(link_second));
    }

    let mut empirical = 0.0_f64;
    let mut witness = Complex::default();
    for z in grid.nodes() {
        if boundary_distance(z) < REVERSE_CHECK_MIN_DISTANCE {
            continue;
        }
        let v = gradient_ratio(z);
        if v > empirical {
            empirical = v;
            witness = z;
        }
    }
    let bound = 21.0 * c5 / PI;
    let reverse = VerificationReport::new(
        "hl-17-reverse",
        hyps,
        empirical,
        bound,
        Direction::AtMost,
        1e-6,
    )
    .with_witness(witness, empirical)
    .with_quantity("C5", c5)
    .with_quantity("ratio_to_C5", if c5 > 0.0 { empirical / c5 } else { 0.0 });
    Ok((forward, reverse))
}
