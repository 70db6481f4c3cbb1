//! Experiment configuration: a flat `key = value` file plus command-line
//! overrides. Unknown keys are rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Study {
    Commute,
    NyPopu,
    Sailing,
    ConjugateCheck,
}

impl Study {
    pub fn parse(s: &str) -> Option<Study> {
        match s {
            "commute" => Some(Study::Commute),
            "nypopu" => Some(Study::NyPopu),
            "sailing" => Some(Study::Sailing),
            "conjugate-check" => Some(Study::ConjugateCheck),
            _ => None,
        }
    }
}

impl fmt::Display for Study {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Study::Commute => "commute",
            Study::NyPopu => "nypopu",
            Study::Sailing => "sailing",
            Study::ConjugateCheck => "conjugate-check",
        };
        write!(f, "{name}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Is,
    Pmmh,
    Sghmc,
    Bbvi,
}

impl Algorithm {
    pub fn parse(s: &str) -> Option<Algorithm> {
        match s {
            "is" => Some(Algorithm::Is),
            "pmmh" => Some(Algorithm::Pmmh),
            "sghmc" => Some(Algorithm::Sghmc),
            "bbvi" => Some(Algorithm::Bbvi),
            _ => None,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Algorithm::Is => "is",
            Algorithm::Pmmh => "pmmh",
            Algorithm::Sghmc => "sghmc",
            Algorithm::Bbvi => "bbvi",
        };
        write!(f, "{name}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Full experiment configuration with documented defaults per study.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub study: Study,
    pub variant: Option<String>,
    pub algorithm: Algorithm,
    pub draws: u32,
    pub burn_in: Option<u32>,
    pub n: u32,
    pub seed: u64,
    pub out: std::path::PathBuf,
    pub format: OutputFormat,
    // algorithm hyperparameters
    pub step_size: Option<f64>,
    pub friction: Option<f64>,
    pub leapfrog: Option<u32>,
    pub grad_draws: Option<u32>,
    pub thin: u32,
    pub proposal_scale: Option<f64>,
    pub particles: u32,
    pub iterations: u32,
    pub batch: u32,
    pub learning_rate: Option<f64>,
    // study-specific
    pub lake_size: u32,
    pub temperature: f64,
    pub sample: u8,
    pub days: u32,
    pub theta: f64,
    pub predictive_reps: u32,
    pub episodes: u32,
}

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "STOCOND_OUT";

impl Default for ExperimentConfig {
    fn default() -> Self {
        let out = std::env::var(OUT_DIR_ENV).unwrap_or_else(|_| "out".to_string());
        ExperimentConfig {
            study: Study::ConjugateCheck,
            variant: None,
            algorithm: Algorithm::Pmmh,
            draws: 10_000,
            burn_in: None,
            n: 32,
            seed: 1,
            out: out.into(),
            format: OutputFormat::Csv,
            step_size: None,
            friction: None,
            leapfrog: None,
            grad_draws: None,
            thin: 1,
            proposal_scale: None,
            particles: 10_000,
            iterations: 2000,
            batch: 32,
            learning_rate: None,
            lake_size: 25,
            temperature: 0.1,
            sample: 1,
            days: 30,
            theta: 0.6,
            predictive_reps: 10_000,
            episodes: 10_000,
        }
    }
}

impl ExperimentConfig {
    /// Applies `key = value` assignments from a config file.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut pairs = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!(
                    "line {}: expected `key = value`, got `{raw}`",
                    lineno + 1
                ));
            };
            pairs.insert(key.trim().to_string(), value.trim().to_string());
        }
        for (key, value) in pairs {
            self.apply_kv(&key, &value)?;
        }
        Ok(())
    }

    /// Applies one key/value pair; unknown keys are errors.
    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
            value
                .parse::<T>()
                .map_err(|_| format!("invalid value for `{key}`: {value}"))
        }
        match key {
            "study" => {
                self.study =
                    Study::parse(value).ok_or_else(|| format!("unknown study: {value}"))?;
            }
            "variant" => self.variant = Some(value.to_string()),
            "algorithm" => {
                self.algorithm = Algorithm::parse(value)
                    .ok_or_else(|| format!("unknown algorithm: {value}"))?;
            }
            "draws" => self.draws = num(key, value)?,
            "burn_in" => self.burn_in = Some(num(key, value)?),
            "N" => self.n = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "out" => self.out = value.into(),
            "format" => {
                self.format = match value {
                    "csv" => OutputFormat::Csv,
                    "json" => OutputFormat::Json,
                    other => return Err(format!("unknown format: {other}")),
                };
            }
            "step_size" => self.step_size = Some(num(key, value)?),
            "friction" => self.friction = Some(num(key, value)?),
            "leapfrog" => self.leapfrog = Some(num(key, value)?),
            "grad_draws" => self.grad_draws = Some(num(key, value)?),
            "thin" => self.thin = num(key, value)?,
            "proposal_scale" => self.proposal_scale = Some(num(key, value)?),
            "particles" => self.particles = num(key, value)?,
            "iterations" => self.iterations = num(key, value)?,
            "batch" => self.batch = num(key, value)?,
            "learning_rate" => self.learning_rate = Some(num(key, value)?),
            "lake_size" => self.lake_size = num(key, value)?,
            "temperature" => self.temperature = num(key, value)?,
            "sample" => self.sample = num(key, value)?,
            "days" => self.days = num(key, value)?,
            "theta" => self.theta = num(key, value)?,
            "predictive_reps" => self.predictive_reps = num(key, value)?,
            "episodes" => self.episodes = num(key, value)?,
            unknown => return Err(format!("unknown config key: {unknown}")),
        }
        Ok(())
    }

    /// Precondition checks; an empty list means `run` would start.
    pub fn validate(&self) -> Vec<String> {
        let mut violations = Vec::new();
        if self.draws == 0 {
            violations.push("draws must be at least 1".to_string());
        }
        if self.thin == 0 {
            violations.push("thin must be at least 1".to_string());
        }
        if self.n == 0 {
            violations.push("N must be at least 1".to_string());
        }
        if (self.algorithm == Algorithm::Pmmh || self.algorithm == Algorithm::Is) && self.n < 2 {
            violations.push(format!(
                "N = {} is insufficient for {}: the bias adjustment needs N >= 2",
                self.n, self.algorithm
            ));
        }
        if self.algorithm == Algorithm::Is && self.particles == 0 {
            violations.push("particles must be at least 1".to_string());
        }
        if self.algorithm == Algorithm::Bbvi {
            if self.batch == 0 {
                violations.push("batch must be at least 1".to_string());
            }
            if self.iterations == 0 {
                violations.push("iterations must be at least 1".to_string());
            }
        }
        if let Some(s) = self.step_size {
            if s.is_nan() || s < 0.0 {
                violations.push("step_size must be nonnegative".to_string());
            }
        }
        if let Some(f) = self.friction {
            if f.is_nan() || f < 0.0 {
                violations.push("friction must be nonnegative".to_string());
            }
        }
        if let Some(p) = self.proposal_scale {
            if p.is_nan() || p < 0.0 {
                violations.push("proposal_scale must be nonnegative".to_string());
            }
        }
        match self.study {
            Study::Commute => {
                let variant = self.variant.as_deref().unwrap_or("stochastic");
                if stocond::studies::commute::CommuteVariant::parse(variant).is_none() {
                    violations.push(format!("unknown commute variant: {variant}"));
                }
                if self.days == 0 {
                    violations.push("days must be at least 1".to_string());
                }
            }
            Study::NyPopu => {
                if !(self.sample == 1 || self.sample == 2) {
                    violations.push(format!("sample must be 1 or 2, got {}", self.sample));
                }
                if self.predictive_reps == 0 {
                    violations.push("predictive_reps must be at least 1".to_string());
                }
            }
            Study::Sailing => {
                if self.lake_size < 2 {
                    violations.push(format!("lake_size must be at least 2, got {}", self.lake_size));
                }
                if !self.temperature.is_finite() || self.temperature <= 0.0 {
                    violations.push("temperature must be positive".to_string());
                }
                if self.episodes == 0 {
                    violations.push("episodes must be at least 1".to_string());
                }
            }
            Study::ConjugateCheck => {
                if !(0.0..=1.0).contains(&self.theta) {
                    violations.push(format!("theta must be in [0, 1], got {}", self.theta));
                }
            }
        }
        violations
    }
}
