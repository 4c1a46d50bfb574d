//! Flat `key = value` run configuration.
//!
//! ```text
//! # comments start with '#'
//! weight = linear-quadratic
//! n = 2
//! N = 8
//! ```
//!
//! Unknown keys are rejected. Command line flags override file values.

use std::fmt;
use std::path::{Path, PathBuf};

use fockpsi_core::criteria::CheckOptions;
use fockpsi_core::WeightFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(ConfigError(format!("format must be csv or json, got `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// `linear`, `linear:A`, `linear-quadratic` or `poly:c0,c1,..` (coefficients of ψ).
    pub weight: String,
    pub n: usize,
    /// Truncation degree `N`.
    pub degree: usize,
    /// Highest moment index; commands pick a default when unset.
    pub rmax: Option<usize>,
    /// Moment quadrature tolerance.
    pub tol: f64,
    pub matrix_tol: f64,
    pub series_tol: f64,
    pub samples: usize,
    pub seed: u64,
    pub tail_tol: f64,
    pub max_terms: Option<usize>,
    pub output: Option<PathBuf>,
    /// Each command has its own default when unset.
    pub format: Option<Format>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let o = CheckOptions::default();
        Self {
            weight: "linear".into(),
            n: 1,
            degree: 8,
            rmax: None,
            tol: 1e-12,
            matrix_tol: o.matrix_tol,
            series_tol: o.series_tol,
            samples: o.samples,
            seed: o.seed,
            tail_tol: 1e-12,
            max_terms: None,
            output: None,
            format: None,
        }
    }
}

fn positive<T: PartialOrd + Default + fmt::Display>(key: &str, v: T) -> Result<T, ConfigError> {
    if v > T::default() {
        Ok(v)
    } else {
        Err(ConfigError(format!("`{key}` must be positive, got {v}")))
    }
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
    v.parse().map_err(|_| ConfigError(format!("bad value `{v}` for `{key}`")))
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let v = value.trim();
        match key.trim() {
            "weight" => {
                weight_function(v)?;
                self.weight = v.to_string();
            }
            "n" => self.n = positive(key, num(key, v)?)?,
            "N" | "degree" => self.degree = num(key, v)?,
            "rmax" => self.rmax = Some(num(key, v)?),
            "tol" => self.tol = positive(key, num(key, v)?)?,
            "matrix_tol" => self.matrix_tol = positive(key, num(key, v)?)?,
            "series_tol" => self.series_tol = positive(key, num(key, v)?)?,
            "samples" => self.samples = positive(key, num(key, v)?)?,
            "seed" => self.seed = num(key, v)?,
            "tail_tol" => self.tail_tol = positive(key, num(key, v)?)?,
            "max_terms" => self.max_terms = Some(positive(key, num(key, v)?)?),
            "output" => self.output = Some(PathBuf::from(v)),
            "format" => self.format = Some(v.parse()?),
            other => return Err(ConfigError(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(ConfigError(format!("line {}: expected key = value", i + 1)));
            };
            cfg.set(k, v).map_err(|e| ConfigError(format!("line {}: {e}", i + 1)))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn weight_function(&self) -> Result<WeightFunction, ConfigError> {
        weight_function(&self.weight)
    }

    pub fn check_options(&self) -> CheckOptions {
        CheckOptions {
            matrix_tol: self.matrix_tol,
            series_tol: self.series_tol,
            samples: self.samples,
            seed: self.seed,
            ..CheckOptions::default()
        }
    }
}

pub fn weight_function(spec: &str) -> Result<WeightFunction, ConfigError> {
    if let Some(rest) = spec.strip_prefix("poly:") {
        let coeffs: Vec<f64> = rest.split(',').map(|c| num("weight", c.trim())).collect::<Result<_, _>>()?;
        return WeightFunction::polynomial(spec, coeffs).map_err(|e| ConfigError(e.to_string()));
    }
    WeightFunction::builtin(spec).ok_or_else(|| {
        ConfigError(format!("unknown weight `{spec}` (linear, linear:A, linear-quadratic, poly:c0,c1,..)"))
    })
}
