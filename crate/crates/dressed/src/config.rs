//! Run configuration: an optional TOML file, overridden by flags.

use std::path::{Path, PathBuf};

use dressed_core::analysis::DEFAULT_TIE_TOL;
use dressed_core::{FiducialVector, Tolerances};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use thiserror::Error;

use crate::io::{self, from_pair, Pair};

/// Name of the built-in d = 3 fiducial.
pub const PRESET: &str = "paper-fi";
pub const DEFAULT_TABLE_TOL: f64 = 2e-3;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Toml {
        path: PathBuf,
        source: toml::de::Error,
    },
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error(transparent)]
    Format(#[from] io::FormatError),
    #[error(transparent)]
    Core(#[from] dressed_core::Error),
}

pub type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FiducialSource {
    Preset,
    /// Gaussian random coefficients from a seeded generator.
    Random(u64),
    Inline(Vec<Pair>),
    File(PathBuf),
}

impl FiducialSource {
    /// `paper-fi`, `random`, `random:<seed>`, or a path to a JSON file.
    pub fn parse(s: &str) -> Self {
        match s {
            PRESET => FiducialSource::Preset,
            "random" => FiducialSource::Random(0),
            _ => match s.strip_prefix("random:").and_then(|t| t.parse().ok()) {
                Some(seed) => FiducialSource::Random(seed),
                None => FiducialSource::File(PathBuf::from(s)),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunTolerances {
    pub tie: f64,
    pub hermiticity: f64,
    pub table_match: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub d: usize,
    pub fiducial: FiducialSource,
    pub tolerances: RunTolerances,
    pub format: OutputFormat,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            d: 3,
            fiducial: FiducialSource::Preset,
            tolerances: RunTolerances {
                tie: DEFAULT_TIE_TOL,
                hermiticity: Tolerances::default().hermiticity,
                table_match: DEFAULT_TABLE_TOL,
            },
            format: OutputFormat::Csv,
            out_dir: PathBuf::from("out"),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(untagged)]
enum FiducialEntry {
    #[default]
    Missing,
    Named(String),
    Inline(Vec<Pair>),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    d: Option<usize>,
    #[serde(default)]
    fiducial: FiducialEntry,
    format: Option<OutputFormat>,
    out_dir: Option<PathBuf>,
    #[serde(default)]
    tolerances: ToleranceFile,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ToleranceFile {
    tie: Option<f64>,
    hermiticity: Option<f64>,
    table_match: Option<f64>,
}

/// Flag values; `None` keeps whatever the file or the default says.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub d: Option<usize>,
    pub fiducial: Option<String>,
    pub tie_tol: Option<f64>,
    pub table_tol: Option<f64>,
    pub format: Option<OutputFormat>,
    pub out_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_toml_str(text: &str, origin: &Path) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|source| ConfigError::Toml {
            path: origin.to_owned(),
            source,
        })?;
        // relative fiducial paths are relative to the config file
        let base = origin.parent().unwrap_or(Path::new(""));
        let mut cfg = RunConfig::default();
        if let Some(d) = file.d {
            cfg.d = d;
        }
        match file.fiducial {
            FiducialEntry::Missing => {}
            FiducialEntry::Inline(c) => cfg.fiducial = FiducialSource::Inline(c),
            FiducialEntry::Named(s) => {
                cfg.fiducial = match FiducialSource::parse(&s) {
                    FiducialSource::File(p) if p.is_relative() => FiducialSource::File(base.join(p)),
                    other => other,
                }
            }
        }
        if let Some(f) = file.format {
            cfg.format = f;
        }
        if let Some(o) = file.out_dir {
            cfg.out_dir = o;
        }
        let t = file.tolerances;
        cfg.tolerances.tie = t.tie.unwrap_or(cfg.tolerances.tie);
        cfg.tolerances.hermiticity = t.hermiticity.unwrap_or(cfg.tolerances.hermiticity);
        cfg.tolerances.table_match = t.table_match.unwrap_or(cfg.tolerances.table_match);
        Ok(cfg)
    }

    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|source| ConfigError::Read {
                    path: p.to_owned(),
                    source,
                })?;
                RunConfig::from_toml_str(&text, p)?
            }
            None => RunConfig::default(),
        };
        cfg.apply(overrides);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(d) = o.d {
            self.d = d;
        }
        if let Some(f) = &o.fiducial {
            self.fiducial = FiducialSource::parse(f);
        }
        if let Some(t) = o.tie_tol {
            self.tolerances.tie = t;
        }
        if let Some(t) = o.table_tol {
            self.tolerances.table_match = t;
        }
        if let Some(f) = o.format {
            self.format = f;
        }
        if let Some(p) = &o.out_dir {
            self.out_dir = p.clone();
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(ConfigError::Invalid(format!("d = {} is too small", self.d)));
        }
        let t = &self.tolerances;
        for (name, v) in [("tie", t.tie), ("hermiticity", t.hermiticity), ("table_match", t.table_match)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError::Invalid(format!("{name} tolerance must be positive, got {v}")));
            }
        }
        if self.fiducial == FiducialSource::Preset && self.d != 3 {
            return Err(ConfigError::Invalid(format!(
                "the {PRESET} fiducial is three-dimensional, d = {}",
                self.d
            )));
        }
        Ok(())
    }

    pub fn fiducial_vector(&self) -> Result<FiducialVector> {
        let v = match &self.fiducial {
            FiducialSource::Preset => FiducialVector::preset(),
            FiducialSource::Random(seed) => FiducialVector::random(self.d, &mut ChaCha8Rng::seed_from_u64(*seed))?,
            FiducialSource::Inline(c) => FiducialVector::new(c.iter().map(|p| from_pair(*p)).collect())?,
            FiducialSource::File(p) => FiducialVector::new(io::read_fiducial(p)?)?,
        };
        if v.dim() != self.d {
            return Err(ConfigError::Invalid(format!(
                "fiducial has {} components but d = {}",
                v.dim(),
                self.d
            )));
        }
        Ok(v)
    }

    /// Whether reference values exist for this run.
    pub fn has_golden_data(&self) -> bool {
        self.d == 3 && self.fiducial == FiducialSource::Preset
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_and_overrides() {
        let text = r#"
            d = 5
            fiducial = "random:7"
            format = "json"
            [tolerances]
            tie = 1e-8
        "#;
        let mut cfg = RunConfig::from_toml_str(text, Path::new("conf/run.toml")).unwrap();
        assert_eq!(cfg.d, 5);
        assert_eq!(cfg.fiducial, FiducialSource::Random(7));
        assert_eq!(cfg.format, OutputFormat::Json);
        assert_eq!(cfg.tolerances.tie, 1e-8);
        assert_eq!(cfg.tolerances.table_match, DEFAULT_TABLE_TOL);
        cfg.apply(&Overrides {
            tie_tol: Some(1e-6),
            ..Default::default()
        });
        assert_eq!(cfg.tolerances.tie, 1e-6);
        assert_eq!(cfg.fiducial_vector().unwrap().dim(), 5);

        let cfg = RunConfig::from_toml_str("fiducial = \"eta.json\"", Path::new("conf/run.toml")).unwrap();
        assert_eq!(cfg.fiducial, FiducialSource::File(PathBuf::from("conf/eta.json")));
        let cfg = RunConfig::from_toml_str("fiducial = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]", Path::new("a.toml")).unwrap();
        assert!((cfg.fiducial_vector().unwrap().coeffs()[2].norm() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        assert!(RunConfig::from_toml_str("nonsense = 1", Path::new("a.toml")).is_err());
        let mut cfg = RunConfig::default();
        assert!(cfg.validate().is_ok());
        assert!(cfg.has_golden_data());
        cfg.d = 5;
        assert!(cfg.validate().is_err());
        cfg.fiducial = FiducialSource::Random(1);
        assert!(cfg.validate().is_ok());
        assert!(!cfg.has_golden_data());
        cfg.tolerances.tie = 0.0;
        assert!(cfg.validate().is_err());
        cfg.tolerances.tie = 1e-9;
        cfg.d = 1;
        assert!(cfg.validate().is_err());
    }
}
