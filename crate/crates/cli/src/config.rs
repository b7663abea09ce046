//! Experiment configuration: a versioned TOML file whose defaults ship as
//! `config/default.toml`.

use std::path::{Path, PathBuf};

use semiexp::ModelParams;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_CONFIG: &str = include_str!("../config/default.toml");
pub const OUTPUT_DIR_ENV: &str = "SEMIEXP_OUTPUT_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub output_dir: PathBuf,
    pub n_grid: Vec<u64>,
    pub params: ModelParams,
    pub seeds: Seeds,
    pub reps: Reps,
    pub truncation: Truncation,
    pub accept: Accept,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Seeds {
    pub root: u64,
    pub retry: u64,
    pub scheme: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Reps {
    pub subordinator: usize,
    pub zerosets: usize,
    pub process: usize,
    pub limit: usize,
    pub joint: usize,
    pub counterexample: usize,
    pub p_bar: usize,
    pub cinf_pairs: usize,
    pub cinf_ranges: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Truncation {
    pub k: usize,
    pub i: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Accept {
    pub scale: f64,
    pub path_dt: f64,
}

/// A configuration problem, reported with the path of the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error at `{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        field: field.to_string(),
        message: message.into(),
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(text).map_err(|e| {
            let field = e
                .span()
                .map(|s| field_at(text, s.start))
                .unwrap_or_else(|| "<root>".to_string());
            err(&field, e.message().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| err("<file>", format!("{}: {e}", p.display())))?;
                Self::parse(&text)?
            }
            None => Self::parse(DEFAULT_CONFIG)?,
        };
        if let Some(dir) = std::env::var_os(OUTPUT_DIR_ENV) {
            cfg.output_dir = PathBuf::from(dir);
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(err(
                "schema_version",
                format!("expected {SCHEMA_VERSION}, found {}", self.schema_version),
            ));
        }
        if self.n_grid.is_empty() || self.n_grid[0] == 0 || self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(err("n_grid", "must be a nonempty, strictly increasing list of positive horizons"));
        }
        if let Err(semiexp::Error::InvalidParams { field, reason }) = self.params.validate() {
            return Err(err(&format!("params.{field}"), reason));
        }
        let r = &self.reps;
        for (name, v) in [
            ("subordinator", r.subordinator),
            ("zerosets", r.zerosets),
            ("process", r.process),
            ("limit", r.limit),
            ("joint", r.joint),
            ("counterexample", r.counterexample),
            ("p_bar", r.p_bar),
            ("cinf_pairs", r.cinf_pairs),
        ] {
            if v < 1 {
                return Err(err(&format!("reps.{name}"), "must be at least 1"));
            }
        }
        if r.cinf_ranges < 2 {
            return Err(err("reps.cinf_ranges", "must be at least 2"));
        }
        if self.truncation.k < 1 || self.truncation.i < 1 {
            return Err(err("truncation", "k and i must be at least 1"));
        }
        if !(self.accept.scale > 0.0 && self.accept.scale.is_finite()) {
            return Err(err("accept.scale", "must be positive"));
        }
        if !(self.accept.path_dt > 0.0 && self.accept.path_dt <= 0.01) {
            return Err(err("accept.path_dt", "must lie in (0, 0.01]"));
        }
        Ok(())
    }
}

/// Dotted path of the TOML key whose value starts before `offset`, e.g. `reps.limit`.
fn field_at(text: &str, offset: usize) -> String {
    let mut table = String::new();
    let mut key = String::new();
    let mut pos = 0;
    for line in text.split_inclusive('\n') {
        if pos > offset {
            break;
        }
        let t = line.trim();
        if t.starts_with('[') && !t.starts_with("[[") {
            table = t.trim_matches(|c| c == '[' || c == ']').trim().to_string();
            key.clear();
        } else if let Some((k, _)) = t.split_once('=') {
            if !t.starts_with('#') {
                key = k.trim().to_string();
            }
        }
        pos += line.len();
    }
    match (table.is_empty(), key.is_empty()) {
        (true, true) => "<root>".to_string(),
        (true, false) => key,
        (false, true) => table,
        (false, false) => format!("{table}.{key}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_default_is_valid() {
        let cfg = ExperimentConfig::parse(DEFAULT_CONFIG).unwrap();
        assert_eq!(cfg.params, ModelParams::default());
        assert_eq!(cfg.n_grid, vec![1000, 10_000, 100_000]);
    }

    #[test]
    fn errors_name_the_field() {
        let bad = DEFAULT_CONFIG.replace("limit = 100000", "limit = -3");
        assert_eq!(ExperimentConfig::parse(&bad).unwrap_err().field, "reps.limit");
        let bad = DEFAULT_CONFIG.replace("beta = 0.25", "beta = 0.75");
        assert_eq!(ExperimentConfig::parse(&bad).unwrap_err().field, "params.beta");
        let bad = DEFAULT_CONFIG.replace("[1000, 10000, 100000]", "[1000, 1000]");
        assert_eq!(ExperimentConfig::parse(&bad).unwrap_err().field, "n_grid");
        let bad = DEFAULT_CONFIG.replace("schema_version = 1", "schema_version = 2");
        assert_eq!(ExperimentConfig::parse(&bad).unwrap_err().field, "schema_version");
        let bad = DEFAULT_CONFIG.replace("k = 60", "k = 60\nextra = 1");
        assert!(ExperimentConfig::parse(&bad).unwrap_err().field.starts_with("truncation"));
    }
}
