//! Cache of `c_∞` estimates, keyed by their full provenance.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub beta: f64,
    pub l_step: f64,
    pub n: u64,
    pub pairs: usize,
    pub ranges: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub provenance: Provenance,
    pub intersection: f64,
    pub intersection_se: f64,
    pub capacity: f64,
    pub capacity_se: f64,
    pub combined: f64,
}

/// Raised when a subcommand needs a `c_∞` that has not been estimated yet.
#[derive(Debug, Clone)]
pub struct CacheMiss(pub Provenance);

impl std::fmt::Display for CacheMiss {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "no cached c_inf for beta={}, L={}, pairs={}, ranges={}, seed={}; run `semiexp estimate-cinf` with the same config and seed first",
            self.0.beta, self.0.l_step, self.0.pairs, self.0.ranges, self.0.seed
        )
    }
}

impl std::error::Error for CacheMiss {}

pub const DEFAULT_N: u64 = 100_000;

pub fn path(cfg: &ExperimentConfig) -> PathBuf {
    cfg.output_dir.join("cache").join("c_inf.json")
}

/// Provenance of the estimate the current config would produce at horizon `n`.
pub fn provenance(cfg: &ExperimentConfig, n: u64) -> Provenance {
    let semiexp::analytic::StepSlowlyVarying::Constant(l) = cfg.params.l_step;
    Provenance {
        beta: cfg.params.beta,
        l_step: l,
        n,
        pairs: cfg.reps.cinf_pairs,
        ranges: cfg.reps.cinf_ranges,
        seed: cfg.seeds.root,
    }
}

pub fn load(file: &Path) -> Result<Vec<Entry>> {
    if !file.exists() {
        return Ok(Vec::new());
    }
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", file.display()))
}

/// Inserts or replaces the entry with the same provenance.
pub fn store(file: &Path, entry: Entry) -> Result<()> {
    let mut all = load(file)?;
    all.retain(|e| e.provenance != entry.provenance);
    all.push(entry);
    if let Some(dir) = file.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(file, serde_json::to_string_pretty(&all)? + "\n")?;
    Ok(())
}

/// The cached entry for the current config with the largest horizon, or a
/// [`CacheMiss`] naming what to run.
pub fn lookup(cfg: &ExperimentConfig) -> Result<Entry> {
    let want = provenance(cfg, DEFAULT_N);
    load(&path(cfg))?
        .into_iter()
        .filter(|e| Provenance { n: want.n, ..e.provenance.clone() } == want)
        .max_by_key(|e| e.provenance.n)
        .ok_or_else(|| CacheMiss(want).into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::DEFAULT_CONFIG;

    #[test]
    fn entries_never_cross_a_changed_law() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = ExperimentConfig::parse(DEFAULT_CONFIG).unwrap();
        cfg.output_dir = dir.path().to_path_buf();
        let entry = Entry {
            provenance: provenance(&cfg, DEFAULT_N),
            intersection: 0.9,
            intersection_se: 0.01,
            capacity: 0.9,
            capacity_se: 0.01,
            combined: 0.9,
        };
        store(&path(&cfg), entry.clone()).unwrap();
        store(&path(&cfg), entry.clone()).unwrap();
        assert_eq!(load(&path(&cfg)).unwrap().len(), 1);
        assert_eq!(lookup(&cfg).unwrap(), entry);
        let small = Entry {
            provenance: provenance(&cfg, 1000),
            ..entry.clone()
        };
        store(&path(&cfg), small).unwrap();
        assert_eq!(load(&path(&cfg)).unwrap().len(), 2);
        assert_eq!(lookup(&cfg).unwrap(), entry);
        cfg.params.beta = 0.2;
        let err = lookup(&cfg).unwrap_err();
        assert!(err.downcast_ref::<CacheMiss>().is_some());
        assert!(err.to_string().contains("estimate-cinf"));
    }
}
