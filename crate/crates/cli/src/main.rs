//! `semiexp`: runs the simulation experiments and the acceptance suite.

mod cache;
mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Ctx;
use config::{ConfigError, ExperimentConfig};

/// Exit status: everything ran and passed.
const EXIT_OK: u8 = 0;
/// Exit status: an acceptance criterion failed.
const EXIT_FAILED: u8 = 1;
/// Exit status: invalid configuration or a missing cached `c_inf`.
const EXIT_CONFIG: u8 = 2;
/// Exit status: any other runtime error.
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "semiexp", version, about = "Extremes of stationary processes driven by random walk zero sets")]
struct Cli {
    /// Experiment config (TOML); the shipped defaults are used when omitted.
    #[arg(long, global = true, env = "SEMIEXP_CONFIG")]
    config: Option<PathBuf>,
    /// Root seed, overriding `seeds.root`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Also write SVG plots.
    #[arg(long, global = true)]
    svg: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate c_inf by both routes and cache the result.
    EstimateCinf {
        #[arg(long, default_value_t = cache::DEFAULT_N)]
        n: u64,
    },
    /// First passage of the stable subordinator: discretized path vs exact sampler.
    SimulateSubordinator,
    /// Zero sets over the n grid: cardinality, first and last points.
    SimulateZerosets,
    /// Joint convergence table of scaled p-bar, intersection indices and min I/n.
    #[command(name = "theorem-4joint")]
    Theorem4Joint {
        #[arg(long = "K", default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long)]
        n: Option<u64>,
    },
    /// Normalized maxima of the simulated process over three windows.
    SimulateProcess {
        #[arg(long)]
        n: Option<u64>,
    },
    /// Samples of the limit random sup-measure against its marginal law.
    SampleLimit,
    /// Normalized maxima over the n grid against the limit marginal.
    CompareMarginal,
    /// Joint law of limit increments over a partition: formula vs sampler.
    JointIncrements {
        /// Partition points 0 = t_0 < … < t_m ≤ 1.
        #[arg(long, value_delimiter = ',', required = true)]
        partition: Vec<f64>,
        /// Levels x_1, …, x_m.
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<f64>,
    },
    /// Two-window convexity gap of the limit.
    Counterexample {
        #[arg(long, default_value_t = 0.5)]
        t1: f64,
        #[arg(long, default_value_t = 1.0)]
        t2: f64,
        #[arg(long, default_value_t = 0.0)]
        x1: f64,
        #[arg(long, default_value_t = 1.0)]
        x2: f64,
    },
    /// Deterministic analytic identities.
    LemmaSuite,
    /// Acceptance criteria with one verdict line each.
    Accept {
        /// Criteria to run, e.g. `1,3,8`.
        #[arg(long, value_delimiter = ',', default_values_t = vec![1u8, 2, 3, 4, 5, 6, 7, 8])]
        criteria: Vec<u8>,
        /// Exit 0 when the only failing checks are the documented known failures.
        #[arg(long)]
        allow_known_failures: bool,
    },
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let mut cfg = ExperimentConfig::load(cli.config.as_deref())?;
    if let Some(s) = cli.seed {
        cfg.seeds.root = s;
    }
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global()?;
    }
    let ctx = Ctx { cfg, svg: cli.svg };
    match cli.command {
        Command::EstimateCinf { n } => commands::estimate_cinf(&ctx, n)?,
        Command::SimulateSubordinator => commands::simulate_subordinator(&ctx)?,
        Command::SimulateZerosets => commands::simulate_zerosets(&ctx)?,
        Command::Theorem4Joint { k, m, n } => commands::theorem_4joint(&ctx, k, m, n)?,
        Command::SimulateProcess { n } => commands::simulate_process_cmd(&ctx, n)?,
        Command::SampleLimit => commands::sample_limit_cmd(&ctx)?,
        Command::CompareMarginal => commands::compare_marginal(&ctx)?,
        Command::JointIncrements { partition, x } => {
            if partition.len() != x.len() + 1 {
                anyhow::bail!(ConfigError {
                    field: "--x".into(),
                    message: "needs one level per partition interval".into(),
                });
            }
            commands::joint_increments(&ctx, &partition, &x)?
        }
        Command::Counterexample { t1, t2, x1, x2 } => commands::counterexample(&ctx, t1, t2, x1, x2)?,
        Command::LemmaSuite => return commands::lemma_suite(&ctx),
        Command::Accept {
            criteria,
            allow_known_failures,
        } => return commands::accept(&ctx, &criteria, allow_known_failures),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::from(EXIT_OK),
        Ok(false) => ExitCode::from(EXIT_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            let config_like = e.downcast_ref::<ConfigError>().is_some() || e.downcast_ref::<cache::CacheMiss>().is_some();
            ExitCode::from(if config_like { EXIT_CONFIG } else { EXIT_RUNTIME })
        }
    }
}
