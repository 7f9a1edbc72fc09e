//! Deterministic random harmonic maps that satisfy theorem hypotheses.
//!
//! Map `i` of a corpus draws from its own ChaCha stream `(seed, i)`, so a
//! corpus is reproducible and independent of generation order.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::functionals::area_at_boundary;
use crate::grid::Grid;
use crate::map::{qc_constant, HarmonicMap, QcConstant};
use crate::Complex;

pub const MAX_DEGREE: usize = 32;
pub const MAX_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FuzzSpec {
    pub count: usize,
    pub degree: usize,
    pub seed: u64,
    /// Coefficient `n` is drawn with scale `coeff_decay^(n-1)`.
    pub coeff_decay: f64,
    /// Clamp `|b_n| <= |a_n|`.
    pub enforce_coeff_dominance: bool,
    /// Upper bound on the grid quasiconformality constant.
    pub target_k: f64,
    /// Rescale each map so that `S_f(1) = 1`.
    pub normalize_area: bool,
}

impl Default for FuzzSpec {
    fn default() -> Self {
        Self {
            count: 1000,
            degree: 8,
            seed: 42,
            coeff_decay: 0.3,
            enforce_coeff_dominance: true,
            target_k: 5.0,
            normalize_area: true,
        }
    }
}

impl FuzzSpec {
    pub fn validate(&self) -> Result<()> {
        if self.degree < 1 || self.degree > MAX_DEGREE {
            return Err(invalid(format!(
                "fuzz degree must lie in 1..={MAX_DEGREE}, got {}",
                self.degree
            )));
        }
        if !(self.coeff_decay > 0.0 && self.coeff_decay < 1.0) {
            return Err(invalid(format!(
                "coeff_decay must lie in (0, 1), got {}",
                self.coeff_decay
            )));
        }
        if self.target_k.is_nan() || self.target_k < 1.0 {
            return Err(invalid(format!(
                "target_k must be >= 1, got {}",
                self.target_k
            )));
        }
        Ok(())
    }
}

/// Generates `spec.count` maps, each sense-preserving with
/// `qc_constant <= spec.target_k` on `grid` and `f(0) = 0`.
pub fn fuzz_corpus(spec: &FuzzSpec, grid: &Grid) -> Result<Vec<HarmonicMap>> {
    spec.validate()?;
    grid.validate()?;
    (0..spec.count)
        .into_par_iter()
        .map(|i| fuzz_one(spec, grid, i))
        .collect()
}

/// The `index`-th map of the corpus described by `spec`.
pub fn fuzz_one(spec: &FuzzSpec, grid: &Grid, index: usize) -> Result<HarmonicMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(index as u64);
    let nodes = grid.nodes();
    let mut last_reason = String::new();
    for _ in 0..MAX_ATTEMPTS {
        let candidate = draw(spec, &mut rng)?;
        let zeros = analytic_derivative_zeros(&candidate);
        if zeros != 0 {
            last_reason = format!("h' has {zeros} zeros in the disk");
            continue;
        }
        let candidate = shape_dilatation(&candidate, spec, &nodes, &mut rng)?;
        match qc_constant(&candidate, grid) {
            Ok(QcConstant::Bounded { k, .. }) if k <= spec.target_k => {
                let map = if spec.normalize_area {
                    let s1 = area_at_boundary(&candidate).value;
                    candidate.scaled(1.0 / s1.sqrt())
                } else {
                    candidate
                };
                return Ok(map);
            }
            Ok(QcConstant::Bounded { k, .. }) => {
                last_reason = format!("K = {k} exceeds {}", spec.target_k)
            }
            Ok(QcConstant::Unbounded { witness }) => {
                last_reason = format!("λ_f vanishes at {witness}")
            }
            Err(Error::PreconditionViolated(msg)) => last_reason = msg,
            Err(e) => return Err(e),
        }
    }
    Err(Error::GenerationFailed {
        attempts: MAX_ATTEMPTS,
        reason: format!("map {index} of seed {}: {last_reason}", spec.seed),
    })
}

fn normal_complex(rng: &mut ChaCha8Rng, scale: f64) -> Complex {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(re, im) * (scale / 2f64.sqrt())
}

fn draw(spec: &FuzzSpec, rng: &mut ChaCha8Rng) -> Result<HarmonicMap> {
    let n = spec.degree;
    let mut a = vec![Complex::default(); n + 1];
    let mut b = vec![Complex::default(); n];
    a[1] = Complex::from_polar(1.0, 2.0 * PI * rng.random::<f64>());
    for (k, ak) in a.iter_mut().enumerate().skip(2) {
        *ak = normal_complex(rng, spec.coeff_decay.powi(k as i32 - 1));
    }
    for k in 1..=n {
        let mut bk = normal_complex(rng, spec.coeff_decay.powi(k as i32 - 1));
        if spec.enforce_coeff_dominance {
            let (ma, mb) = (a[k].norm(), bk.norm());
            if mb > ma {
                bk *= ma / mb;
            }
        }
        b[k - 1] = bk;
    }
    HarmonicMap::new(a, b)
}

/// Zeros of `h'` in the closed unit disk, by the winding number of
/// `h'(e^{iθ})`; a zero on the circle counts as one.
fn analytic_derivative_zeros(f: &HarmonicMap) -> i64 {
    let m = 64 * f.degree().max(1);
    let values: Vec<Complex> = (0..=m)
        .map(|k| {
            f.wirtinger_unchecked(Complex::from_polar(1.0, 2.0 * PI * k as f64 / m as f64))
                .0
        })
        .collect();
    if values.iter().any(|v| v.norm() < 1e-12) {
        return 1;
    }
    let turns: f64 = values.windows(2).map(|w| (w[1] / w[0]).arg()).sum();
    (turns / (2.0 * PI)).round() as i64
}

/// Shrinks the co-analytic part so that `max |g'/h'|` on the grid sits
/// strictly below the dilatation allowed by `target_k`.
fn shape_dilatation(
    f: &HarmonicMap,
    spec: &FuzzSpec,
    nodes: &[Complex],
    rng: &mut ChaCha8Rng,
) -> Result<HarmonicMap> {
    let allowed = (spec.target_k - 1.0) / (spec.target_k + 1.0);
    let shrink = 0.5 + 0.49 * rng.random::<f64>();
    let mut worst = 0.0_f64;
    for &z in nodes {
        let (hp, gp) = f.wirtinger_unchecked(z);
        let h = hp.norm();
        if h == 0.0 {
            // left for qc_constant to reject
            return Ok(f.clone());
        }
        worst = worst.max(gp.norm() / h);
    }
    if worst < allowed {
        return Ok(f.clone());
    }
    let s = shrink * allowed / worst;
    let b = f.co_analytic().iter().map(|c| c * s).collect();
    HarmonicMap::new(f.analytic().to_vec(), b)
}
