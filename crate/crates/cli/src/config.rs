use std::path::{Path, PathBuf};

use harmap_core::verify::DiskDomain;
use harmap_core::{fuzz_corpus, Complex, FuzzSpec, Grid, HarmonicMap, Majorant, QuadratureSpec};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    ThreeCircles,
    AreaOverlap,
    HardyArea,
    CoeffBound,
    GradientBound,
    Isoperimetric,
    #[serde(rename = "lipschitz-16")]
    Lipschitz16,
    #[serde(rename = "hl-17")]
    Hl17,
    MajorantRegularity,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::ThreeCircles,
        Suite::AreaOverlap,
        Suite::HardyArea,
        Suite::CoeffBound,
        Suite::GradientBound,
        Suite::Isoperimetric,
        Suite::Lipschitz16,
        Suite::Hl17,
        Suite::MajorantRegularity,
    ];
}

/// Named maps available without a file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Builtin {
    /// `f(z) = z`
    Identity,
    /// `f(z) = √2 z + conj(z)`
    AffineExtremal,
    /// `f(z) = z / 2`
    Dilation,
}

impl Builtin {
    pub fn label(self) -> &'static str {
        match self {
            Builtin::Identity => "identity",
            Builtin::AffineExtremal => "affine-extremal",
            Builtin::Dilation => "dilation",
        }
    }

    pub fn map(self) -> HarmonicMap {
        match self {
            Builtin::Identity => HarmonicMap::identity(),
            Builtin::AffineExtremal => {
                HarmonicMap::affine(Complex::new(2f64.sqrt(), 0.0), Complex::new(1.0, 0.0))
            }
            Builtin::Dilation => HarmonicMap::affine(Complex::new(0.5, 0.0), Complex::default()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MapSources {
    pub files: Vec<PathBuf>,
    pub builtin: Vec<Builtin>,
    pub fuzz: Option<FuzzSpec>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    /// Standard output when absent.
    pub path: Option<PathBuf>,
    pub format: Format,
}

/// Per-check parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckParams {
    /// `(r1, r)` pairs for the three-circles check.
    pub three_circles: Vec<[f64; 2]>,
    pub isoperimetric_radii: Vec<f64>,
    /// Sample points per map for the gradient bounds.
    pub gradient_samples: usize,
    pub omega1: DiskDomain,
    pub omega2: DiskDomain,
    pub majorants: Vec<Majorant>,
    /// Point pairs for the two-point Lipschitz constants.
    pub pairs: usize,
    pub regularity_delta0: f64,
    pub regularity_probes: usize,
    /// Seed for sample points and pairs.
    pub seed: u64,
}

impl Default for CheckParams {
    fn default() -> Self {
        Self {
            three_circles: vec![[0.1, 0.3], [0.1, 0.7], [0.3, 0.5], [0.3, 0.9]],
            isoperimetric_radii: vec![0.3, 0.6, 0.9],
            gradient_samples: 64,
            omega1: DiskDomain::unit(),
            omega2: DiskDomain::unit(),
            majorants: vec![Majorant::power(0.5).unwrap(), Majorant::power(1.0).unwrap()],
            pairs: 1000,
            regularity_delta0: 1.0,
            regularity_probes: 16,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub suites: Vec<Suite>,
    pub maps: MapSources,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default)]
    pub grid: Grid,
    #[serde(default)]
    pub checks: CheckParams,
    #[serde(default)]
    pub output: OutputSpec,
}

impl SuiteConfig {
    /// All suites on the builtin maps plus the seed-42 corpus.
    pub fn default_suite() -> Self {
        Self {
            suites: Suite::ALL.to_vec(),
            maps: MapSources {
                files: Vec::new(),
                builtin: vec![
                    Builtin::Identity,
                    Builtin::AffineExtremal,
                    Builtin::Dilation,
                ],
                fuzz: Some(FuzzSpec::default()),
            },
            quadrature: QuadratureSpec {
                mc_samples: 100_000,
                ..Default::default()
            },
            grid: Grid::default(),
            checks: CheckParams::default(),
            output: OutputSpec::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let config: Self = serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("invalid config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::from_json(&crate::read_file(path)?)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.suites.is_empty() {
            return Err(CliError::Config("config names no suites".into()));
        }
        let m = &self.maps;
        if m.files.is_empty() && m.builtin.is_empty() && m.fuzz.is_none() {
            return Err(CliError::Config("config names no map sources".into()));
        }
        self.quadrature.validate()?;
        self.grid.validate()?;
        if let Some(spec) = &m.fuzz {
            spec.validate()?;
        }
        let c = &self.checks;
        let uses_majorants = self.suites.iter().any(|s| {
            matches!(
                s,
                Suite::Lipschitz16 | Suite::Hl17 | Suite::MajorantRegularity
            )
        });
        if uses_majorants && c.majorants.is_empty() {
            return Err(CliError::Config(
                "majorant suites need at least one majorant".into(),
            ));
        }
        if self.suites.contains(&Suite::GradientBound) && c.gradient_samples == 0 {
            return Err(CliError::Config("gradient_samples must be positive".into()));
        }
        Ok(())
    }

    /// Maps in report order: files, builtins, corpus.
    pub fn load_maps(&self) -> Result<Vec<(String, HarmonicMap)>, CliError> {
        let mut maps = Vec::new();
        for path in &self.maps.files {
            let label = path.file_stem().map_or_else(
                || path.display().to_string(),
                |s| s.to_string_lossy().into_owned(),
            );
            maps.push((label, load_map(path)?));
        }
        for b in &self.maps.builtin {
            maps.push((b.label().to_string(), b.map()));
        }
        if let Some(spec) = &self.maps.fuzz {
            let corpus = fuzz_corpus(spec, &self.grid)?;
            maps.extend(
                corpus
                    .into_iter()
                    .enumerate()
                    .map(|(i, f)| (format!("fuzz-{}-{i:04}", spec.seed), f)),
            );
        }
        Ok(maps)
    }
}

pub fn load_map(path: &Path) -> Result<HarmonicMap, CliError> {
    let text = crate::read_file(path)?;
    HarmonicMap::from_json(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_fills_defaults() {
        let c = SuiteConfig::from_json(
            r#"{"suites":["hardy-area","hl-17"],"maps":{"builtin":["identity"]}}"#,
        )
        .unwrap();
        assert_eq!(c.suites, vec![Suite::HardyArea, Suite::Hl17]);
        assert_eq!(c.grid, Grid::default());
        assert_eq!(c.checks.majorants.len(), 2);
    }

    #[test]
    fn rejects_unknown_suite_and_empty_sources() {
        assert!(matches!(
            SuiteConfig::from_json(r#"{"suites":["nope"],"maps":{"builtin":["identity"]}}"#),
            Err(CliError::Config(_))
        ));
        assert!(SuiteConfig::from_json(r#"{"suites":["hardy-area"],"maps":{}}"#).is_err());
        assert!(
            SuiteConfig::from_json(r#"{"suites":[],"maps":{"builtin":["identity"]}}"#).is_err()
        );
    }

    #[test]
    fn builtin_labels_are_stable() {
        let c = SuiteConfig::default_suite();
        let labels: Vec<_> = c.maps.builtin.iter().map(|b| b.label()).collect();
        assert_eq!(labels, ["identity", "affine-extremal", "dilation"]);
    }
}
