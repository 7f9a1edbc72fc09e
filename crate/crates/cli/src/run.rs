use std::f64::consts::PI;

use harmap_core::lipschitz::{
    check_scaling_lemma, default_oscillation_probes, regularity_check, sample_pairs,
    verify_hl_equivalence, verify_lipschitz_chain,
};
use harmap_core::verify::{
    verify_area_overlap, verify_coeff_bound, verify_gradient_bound, verify_hardy_area,
    verify_isoperimetric, verify_three_circles, Direction, Hypothesis,
};
use harmap_core::{Complex, HarmonicMap, Majorant, Status, VerificationReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Suite, SuiteConfig};
use crate::CliError;

/// One emitted report row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    #[serde(flatten)]
    pub report: VerificationReport,
    /// `|margin| <= slack` on a passing row.
    pub equality: bool,
}

impl Row {
    fn new(label: &str, mut report: VerificationReport) -> Self {
        report.name = format!("{label}/{}", report.name);
        let equality = report.status == Status::Pass && report.margin.abs() <= report.slack;
        Self { report, equality }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub hypothesis_violated: usize,
}

impl Summary {
    pub fn of(rows: &[Row]) -> Self {
        let mut s = Self::default();
        for row in rows {
            match row.report.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::HypothesisViolated => s.hypothesis_violated += 1,
            }
        }
        s
    }
}

pub fn majorant_label(omega: &Majorant, index: usize) -> String {
    match omega.alpha() {
        Some(alpha) => format!("omega-{alpha}"),
        None => format!("omega-sampled-{index}"),
    }
}

/// Uniform points in `|z| <= r_max`, deterministic in `seed`.
pub fn sample_points(count: usize, seed: u64, r_max: f64) -> Vec<Complex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let u: f64 = rng.random();
            let v: f64 = rng.random();
            Complex::from_polar(r_max * u.sqrt(), 2.0 * PI * v)
        })
        .collect()
}

struct Shared {
    pairs: Vec<(Complex, Complex)>,
    probes: Vec<(Complex, Vec<f64>)>,
    gradient_points: Vec<Complex>,
}

/// Runs every configured suite and returns rows in deterministic order:
/// maps in source order, suites in config order within each map, then
/// majorant regularity rows.
pub fn run_suites(config: &SuiteConfig) -> Result<Vec<Row>, CliError> {
    config.validate()?;
    let maps = config.load_maps()?;
    let c = &config.checks;
    let shared = Shared {
        pairs: sample_pairs(c.pairs, c.seed, config.grid.r_max),
        probes: default_oscillation_probes(),
        gradient_points: sample_points(c.gradient_samples, c.seed, 0.99),
    };
    let jobs: Vec<(usize, Suite)> = maps
        .iter()
        .enumerate()
        .flat_map(|(i, _)| {
            config
                .suites
                .iter()
                .filter(|s| **s != Suite::MajorantRegularity)
                .map(move |s| (i, *s))
        })
        .collect();
    let per_map: Vec<Vec<Row>> = jobs
        .par_iter()
        .map(|&(i, suite)| {
            let (label, f) = &maps[i];
            run_one(config, &shared, f, suite)
                .map(|reports| reports.into_iter().map(|r| Row::new(label, r)).collect())
        })
        .collect::<Result<_, CliError>>()?;
    let mut rows: Vec<Row> = per_map.into_iter().flatten().collect();
    if config.suites.contains(&Suite::MajorantRegularity) {
        for (i, omega) in c.majorants.iter().enumerate() {
            let label = majorant_label(omega, i);
            for report in majorant_reports(omega, c.regularity_delta0, c.regularity_probes)? {
                rows.push(Row::new(&label, report));
            }
        }
    }
    Ok(rows)
}

fn run_one(
    config: &SuiteConfig,
    shared: &Shared,
    f: &HarmonicMap,
    suite: Suite,
) -> Result<Vec<VerificationReport>, CliError> {
    let (q, grid, c) = (&config.quadrature, &config.grid, &config.checks);
    let reports = match suite {
        Suite::ThreeCircles => c
            .three_circles
            .iter()
            .map(|&[r1, r]| verify_three_circles(f, r1, r))
            .collect::<Result<_, _>>()?,
        Suite::AreaOverlap => vec![verify_area_overlap(f, &c.omega1, &c.omega2, q, grid)?],
        Suite::HardyArea => vec![verify_hardy_area(f, grid)?],
        Suite::CoeffBound => verify_coeff_bound(f, grid, q)?,
        Suite::GradientBound => verify_gradient_bound(f, &shared.gradient_points, grid, q)?,
        Suite::Isoperimetric => c
            .isoperimetric_radii
            .iter()
            .map(|&r| verify_isoperimetric(f, r, q))
            .collect::<Result<_, _>>()?,
        Suite::Lipschitz16 => {
            let mut out =
                verify_lipschitz_chain(f, &c.majorants, grid, &shared.pairs, &shared.probes, q)?;
            for (i, (rep, omega)) in out.iter_mut().zip(&c.majorants).enumerate() {
                rep.name = format!("{}[{}]", rep.name, majorant_label(omega, i));
            }
            out
        }
        Suite::Hl17 => {
            let mut out = Vec::new();
            for (i, omega) in c.majorants.iter().enumerate() {
                let (mut fwd, mut rev) = verify_hl_equivalence(f, omega, grid, &shared.pairs)?;
                let tag = majorant_label(omega, i);
                fwd.name = format!("{}[{tag}]", fwd.name);
                rev.name = format!("{}[{tag}]", rev.name);
                out.extend([fwd, rev]);
            }
            out
        }
        Suite::MajorantRegularity => Vec::new(),
    };
    Ok(reports)
}

/// Regularity constants and the scaling lemma for one majorant. A
/// divergent integral marks the majorant as not regular
/// (hypothesis-violated) rather than failing the run.
fn majorant_reports(
    omega: &Majorant,
    delta0: f64,
    probes: usize,
) -> Result<Vec<VerificationReport>, CliError> {
    let reg = regularity_check(omega, delta0, probes)?;
    let mut out = Vec::new();
    for (name, value, extra) in [
        ("regularity-near", reg.c_eq2, 0.0),
        ("regularity-far", reg.c_eq3, reg.c_eq3_truncation_error),
    ] {
        let finite = value.is_some();
        let hyp = Hypothesis::new(
            "integral converges",
            finite,
            if finite { "finite" } else { "diverges" },
        );
        let v = value.unwrap_or(f64::INFINITY);
        out.push(
            VerificationReport::new(name, vec![hyp], v, f64::INFINITY, Direction::AtMost, 0.0)
                .with_error(extra)
                .with_quantity("delta0", delta0),
        );
    }
    let lambdas = [1.0, 1.5, 2.0, 4.0, 10.0, 100.0];
    let ts = [1e-6, 1e-3, 0.1, 0.5, 1.0, 10.0];
    let grid: Vec<(f64, f64)> = lambdas
        .iter()
        .flat_map(|&l| ts.iter().map(move |&t| (l, t)))
        .collect();
    let scaling = check_scaling_lemma(omega, &grid)?;
    let worst_ratio = grid
        .iter()
        .map(|&(l, t)| {
            omega.eval(l * t).unwrap_or(f64::NAN) / (l * omega.eval(t).unwrap_or(f64::NAN))
        })
        .fold(0.0, f64::max);
    let mut rep = VerificationReport::new(
        "scaling-lemma",
        Vec::new(),
        worst_ratio,
        1.0,
        Direction::AtMost,
        1e-12,
    )
    .with_quantity("worst_margin", scaling.worst_margin);
    if let Some((l, t)) = scaling.witness {
        rep = rep
            .with_quantity("witness_lambda", l)
            .with_quantity("witness_t", t);
    }
    out.push(rep);
    Ok(out)
}
