//! Library side of the `harmap` command: suite configuration, the suite
//! runner, report emission, and the functional and fuzz commands.

pub mod config;
pub mod report;
pub mod run;

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use harmap_core::functionals::{
    area_at_boundary, area_series, bloch_seminorm, hardy_mean, hardy_norm, length_at_boundary,
    length_function,
};
use harmap_core::{fuzz_corpus, FunctionalValue, FuzzSpec, Grid, HarmonicMap, QuadratureSpec};
use serde::Serialize;

pub use config::{Builtin, Format, Suite, SuiteConfig};
pub use run::{run_suites, Row, Summary};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] harmap_core::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    /// 2 for usage, config and input errors, 3 for corpus generation failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(harmap_core::Error::GenerationFailed { .. }) => 3,
            _ => 2,
        }
    }
}

pub(crate) fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FunctionalName {
    Area,
    Length,
    Hardy,
    Bloch,
}

/// Evaluates one functional. `r = 1` selects the boundary value for area,
/// length and Hardy means.
pub fn functional(
    f: &HarmonicMap,
    name: FunctionalName,
    r: f64,
    p: f64,
    grid: &Grid,
    q: &QuadratureSpec,
) -> Result<FunctionalValue, CliError> {
    let boundary = r == 1.0;
    let value = match name {
        FunctionalName::Area if boundary => area_at_boundary(f),
        FunctionalName::Area => area_series(f, r)?,
        FunctionalName::Length if boundary => length_at_boundary(f, q)?,
        FunctionalName::Length => length_function(f, r, q)?,
        FunctionalName::Hardy if boundary => hardy_norm(f, p, q)?,
        FunctionalName::Hardy => hardy_mean(f, p, r, q)?,
        FunctionalName::Bloch => bloch_seminorm(f, grid)?,
    };
    Ok(value)
}

/// Writes `r, S_f(r), l_f(r)` and the right-hand sides of the
/// isoperimetric and three-circles (`r1 = 0.1`) inequalities on
/// `r = 0.01, 0.02, ..., 0.99`.
pub fn emit_table(
    f: &HarmonicMap,
    q: &QuadratureSpec,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let r1 = 0.1;
    let m = area_series(f, r1)?.value;
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record([
        "r",
        "area",
        "length",
        "isoperimetric_rhs",
        "three_circles_rhs",
    ])
    .map_err(err)?;
    for k in 1..100 {
        let r = k as f64 / 100.0;
        let area = area_series(f, r)?.value;
        let length = length_function(f, r, q)?.value;
        let iso = length * length / (4.0 * PI * PI);
        let three = if m > 0.0 {
            m.powf(r.ln() / r1.ln())
        } else {
            0.0
        };
        w.write_record([r, area, length, iso, three].map(|x| x.to_string()))
            .map_err(err)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Manifest<'a> {
    spec: &'a FuzzSpec,
    grid: &'a Grid,
    files: Vec<String>,
}

/// Generates the corpus and writes `map-NNNN.json` files plus
/// `manifest.json` into `dir`.
pub fn write_corpus(spec: &FuzzSpec, grid: &Grid, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    spec.validate()?;
    let maps = fuzz_corpus(spec, grid)?;
    fs::create_dir_all(dir)?;
    let width = spec.count.saturating_sub(1).to_string().len().max(4);
    let mut names = Vec::with_capacity(maps.len());
    let mut paths = Vec::with_capacity(maps.len());
    for (i, f) in maps.iter().enumerate() {
        let name = format!("map-{i:0width$}.json");
        let path = dir.join(&name);
        fs::write(&path, f.to_json() + "\n")?;
        names.push(name);
        paths.push(path);
    }
    let manifest = Manifest {
        spec,
        grid,
        files: names,
    };
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Io(e.to_string()))?;
    fs::write(dir.join("manifest.json"), text + "\n")?;
    Ok(paths)
}

/// Rayon pool honoring `HARMAP_THREADS`.
pub fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("HARMAP_THREADS") {
        let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            CliError::Config(format!(
                "HARMAP_THREADS must be a positive integer, got {v:?}"
            ))
        })?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Config(e.to_string()))
}
