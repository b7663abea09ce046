//! The acceptance suite: eight criteria, each a list of named checks.
//!
//! Randomized criteria run on a fixed seed and, when some check fails, once more on
//! a second fixed seed. Both attempts are kept in the verdict; the criterion passes
//! when either attempt passes. Budgets scale linearly with [`SuiteConfig::scale`] so
//! that smoke runs can reuse the exact same code paths.

use std::collections::HashMap;
use std::f64::consts::LN_10;
use std::sync::{Mutex, OnceLock};
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use statrs::function::gamma::gamma;

use crate::analytic::{
    c_ab, g, h, k_ab, log_tail_exponent, marginal_time_exponent, psi, psi_tilde, r_m, scr_l, tail_nu_bar, theta_n, v,
    ModelParams,
};
use crate::capacity::{capacity_with_rng, estimate_c_infty, CInfinity, CInfinityBudget};
use crate::error::Result;
use crate::limit::{counterexample_check, joint_increment_prob, marginal_cdf, sample_limit, scalar_convexity, MarkMode, Window};
use crate::process::{normalized_max_sample, simulate_process, Interval};
use crate::rng::{derive_seed, par_reps, StreamRng};
use crate::stats::{kendall_trend_pairs, EmpiricalDistribution};
use crate::subordinator::{ml_fractional_moment, sample_shift_start, sample_stable, PassageSampler, SubordinatorPath};
use crate::zeroset::{default_budget, find_intersections, first_meeting, sample_zero_set, StepLaw};

/// Checks that are known to fail for analytic reasons, as `(criterion, check name)`.
pub const KNOWN_FAILURES: &[(u8, &str)] = &[
    (1, "log-increment of V at x=1e12, t=10"),
    (8, "KS to the limit marginal is nonincreasing in n"),
];

/// Budget and seed settings of a suite run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub params: ModelParams,
    pub seed: u64,
    pub retry_seed: u64,
    /// Multiplier applied to every Monte Carlo budget.
    pub scale: f64,
    /// Time step of the simulated subordinator paths.
    pub path_dt: f64,
    /// Outer and inner truncation of the limit sampler.
    pub truncation: (usize, usize),
    /// A previously estimated `c_∞`, skipping the estimation when present.
    pub c_inf: Option<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            params: ModelParams::default(),
            seed: 20_240_601,
            retry_seed: 20_240_602,
            scale: 1.0,
            path_dt: crate::subordinator::DEFAULT_DT,
            truncation: (60, 60),
            c_inf: None,
        }
    }
}

impl SuiteConfig {
    fn reps(&self, base: usize) -> usize {
        ((base as f64 * self.scale).round() as usize).max(20)
    }
}

/// One named comparison `value` against `threshold`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn at_most(name: impl Into<String>, value: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            passed: value <= threshold,
            detail: detail.into(),
        }
    }

    fn at_least(name: impl Into<String>, value: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            passed: value >= threshold,
            detail: detail.into(),
        }
    }
}

/// All checks of one criterion under one seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Attempt {
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Outcome of one criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub attempts: Vec<Attempt>,
    pub seconds: f64,
}

impl Verdict {
    /// One-line summary, e.g. `criterion 3 PASS zero-set suite (12.1 s)`.
    pub fn line(&self) -> String {
        let failing: Vec<&str> = self
            .attempts
            .last()
            .map(|a| a.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect())
            .unwrap_or_default();
        let mut s = format!(
            "criterion {} {} {} ({:.1} s",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.seconds
        );
        if self.attempts.len() > 1 {
            s.push_str(", retried");
        }
        s.push(')');
        if !failing.is_empty() {
            s.push_str(&format!(" failing: {}", failing.join("; ")));
        }
        s
    }

    /// Failing checks of the final attempt that are not listed in [`KNOWN_FAILURES`].
    pub fn unexpected_failures(&self) -> Vec<&Check> {
        self.attempts
            .last()
            .map(|a| {
                a.checks
                    .iter()
                    .filter(|c| !c.passed && !KNOWN_FAILURES.contains(&(self.id, c.name.as_str())))
                    .collect()
            })
            .unwrap_or_default()
    }
}

pub const TITLES: [&str; 8] = [
    "analytic identities",
    "subordinator suite",
    "zero-set suite",
    "c_inf and joint convergence of intersections",
    "limit marginal",
    "joint increments",
    "time-change counterexample",
    "convergence trend and structural invariants",
];

/// Runs criterion `id` in `1..=8`, retrying a failed randomized attempt once.
pub fn run_criterion(id: u8, cfg: &SuiteConfig) -> Result<Verdict> {
    let start = Instant::now();
    let f: fn(&SuiteConfig, u64) -> Result<Vec<Check>> = match id {
        1 => criterion_1,
        2 => criterion_2,
        3 => criterion_3,
        4 => criterion_4,
        5 => criterion_5,
        6 => criterion_6,
        7 => criterion_7,
        8 => criterion_8,
        _ => return Err(crate::error::domain("criterion", id as f64, "{1, …, 8}")),
    };
    let mut attempts = Vec::new();
    for (round, &seed) in [cfg.seed, cfg.retry_seed].iter().enumerate() {
        let checks = f(cfg, seed)?;
        let passed = checks.iter().all(|c| c.passed);
        attempts.push(Attempt { seed, checks, passed });
        // Criterion 1 is deterministic, so a retry cannot change it.
        if passed || id == 1 || round == 1 {
            break;
        }
    }
    Ok(Verdict {
        id,
        title: TITLES[id as usize - 1].to_string(),
        passed: attempts.iter().any(|a| a.passed),
        attempts,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Runs all eight criteria in order.
pub fn run_all(cfg: &SuiteConfig) -> Result<Vec<Verdict>> {
    (1..=8).map(|id| run_criterion(id, cfg)).collect()
}

fn law(cfg: &SuiteConfig) -> Result<StepLaw> {
    StepLaw::from_params(&cfg.params)
}

type CacheKey = (u64, u64, u64, u64, u64);

fn c_inf_cache() -> &'static Mutex<HashMap<CacheKey, CInfinity>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, CInfinity>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Horizon of the capacity route to `c_∞`.
pub const C_INF_HORIZON: usize = 100_000;

/// Both `c_∞` estimates, computed once per (law, seed, scale) and process.
pub fn c_infinity(cfg: &SuiteConfig, seed: u64) -> Result<CInfinity> {
    let p = &cfg.params;
    let key = (p.beta.to_bits(), p.l_step.eval(1.0).to_bits(), seed, cfg.scale.to_bits(), C_INF_HORIZON as u64);
    if let Some(c) = c_inf_cache().lock().unwrap().get(&key) {
        return Ok(*c);
    }
    let d = CInfinityBudget::default();
    let budget = CInfinityBudget {
        pairs: cfg.reps(d.pairs),
        ranges: cfg.reps(d.ranges),
        points_per_range: d.points_per_range,
        tol: d.tol,
    };
    let c = estimate_c_infty(&law(cfg)?, C_INF_HORIZON, &budget, derive_seed(seed, "c_inf"))?;
    c_inf_cache().lock().unwrap().insert(key, c);
    Ok(c)
}

fn c_inf_value(cfg: &SuiteConfig, seed: u64) -> Result<f64> {
    match cfg.c_inf {
        Some(c) => Ok(c),
        None => Ok(c_infinity(cfg, seed)?.combined()),
    }
}

/// `K(α,β)` with the Mittag-Leffler moment estimated by Monte Carlo, and its SE.
fn k_mc(cfg: &SuiteConfig, seed: u64) -> Result<(f64, f64)> {
    let p = &cfg.params;
    let m = ml_fractional_moment(p.beta, 1.0 / c_ab(p), cfg.reps(1_000_000), derive_seed(seed, "k_ab"))?;
    let k = k_ab(p, m.value)?;
    Ok((k, k * m.se / m.value))
}

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

fn criterion_1(cfg: &SuiteConfig, _seed: u64) -> Result<Vec<Check>> {
    let p = &cfg.params;
    let mut checks = Vec::new();

    // V inverts 1/ν̄, checked from both sides; log y avoids overflow of 1/ν̄.
    let mut worst: f64 = 0.0;
    for x in logspace(1.0 + 1e-9, 1e4, 60) {
        let y = 1.0 / tail_nu_bar(x, p)?;
        worst = worst.max((v(y, p)? / x - 1.0).abs());
    }
    for x in logspace(2.0, 1e300, 60) {
        let s = v(x, p)?;
        let lhs = log_tail_exponent(s, p)? - p.gamma.ln();
        worst = worst.max((lhs / x.ln() - 1.0).abs());
    }
    checks.push(Check::at_most("V round trip", worst, 1e-8, "max relative error over a log grid"));

    let x = 100.0;
    let dx = 1e-3;
    let d = (g(x + dx, p)? - g(x - dx, p)?) / (2.0 * dx);
    let rhs = h(g(x, p)?, p)?;
    checks.push(Check::at_most(
        "x G'(x) = h(G(x)) at x=100",
        (x * d - rhs).abs() / rhs,
        1e-6,
        "central difference, relative error",
    ));

    let big = 1e12;
    let vx = v(big, p)?;
    for t in [0.5, 2.0, 10.0] {
        let lhs = (v(t * big, p)? - vx) / h(vx, p)?;
        let err = (lhs - t.ln()).abs();
        checks.push(Check::at_most(
            format!("log-increment of V at x=1e12, t={t}"),
            err,
            0.05,
            format!("(V(tx)-V(x))/h(V(x)) = {lhs:.6}, log t = {:.6}", t.ln()),
        ));
    }

    let lx = 12.0 * LN_10;
    let ratio = vx / (lx.powf(1.0 / p.alpha) * scr_l(lx, p)?);
    checks.push(Check::at_most(
        "V(x) / ((log x)^{1/α} L(log x)) at x=1e12",
        (ratio - 1.0).abs(),
        0.02,
        format!("ratio {ratio:.8}"),
    ));

    let mut violations = 0u32;
    for i in 1..=10 {
        for j in 1..=10 {
            let q = ModelParams::new(i as f64 / 11.0, 0.5 * j as f64 / 11.0)?;
            let top = 1.0 - q.beta;
            let mut prev = f64::NEG_INFINITY;
            for k in 0..1000 {
                let r = top * k as f64 / 1000.0;
                let s = psi(r, &q)?;
                violations += u32::from(s <= prev);
                prev = s;
                if r > 0.0 {
                    violations += u32::from(psi_tilde(r, &q)? <= r + q.beta);
                }
            }
            for m in 1..=10u32 {
                violations += u32::from(r_m(m, &q)? >= m as f64 / (m as f64 + 1.0) - q.beta);
            }
        }
    }
    checks.push(Check::at_most(
        "psi lemma on the (α, β) × m grid",
        violations as f64,
        0.0,
        "ψ increasing, ψ̃(r) > r + β, r_m < m/(m+1) - β",
    ));
    Ok(checks)
}

fn criterion_2(cfg: &SuiteConfig, seed: u64) -> Result<Vec<Check>> {
    let beta = cfg.params.beta;
    let mut checks = Vec::new();

    let s: Vec<f64> = par_reps(derive_seed(seed, "c2/half"), cfg.reps(100_000), |rng| sample_stable(0.5, 1.0, rng));
    let d = EmpiricalDistribution::new(s)?;
    let ks = d.ks_distance(|x| if x <= 0.0 { 0.0 } else { erfc(1.0 / (2.0 * x.sqrt())) });
    checks.push(Check::at_most(
        "1/2-stable law vs erfc(1/(2√x))",
        ks,
        0.005,
        format!("KS over {} draws", d.len()),
    ));

    let dt = cfg.path_dt;
    let times: Vec<f64> = par_reps(derive_seed(seed, "c2/passage"), cfg.reps(100_000), |rng| {
        SubordinatorPath::sample_until(beta, dt, 0.0, 1.0, rng)
            .and_then(|p| p.first_passage(1.0))
            .unwrap_or(f64::NAN)
    });
    let est = crate::subordinator::McEstimate::from_samples(&times)?;
    let target = 1.0 / gamma(1.0 + beta);
    checks.push(Check::at_most(
        "E Z^←(1) = 1/Γ(1+β) from paths",
        (est.value - target).abs() / est.se,
        3.0,
        format!("mean {:.5} ± {:.5}, target {target:.5}, dt {dt}", est.value, est.se),
    ));

    let z0: Vec<f64> = par_reps(derive_seed(seed, "c2/shift"), cfg.reps(100_000), |rng| sample_shift_start(beta, rng));
    let d = EmpiricalDistribution::new(z0)?;
    let ks = d.ks_distance(|x| x.clamp(0.0, 1.0).powf(1.0 - beta));
    checks.push(Check::at_most("Z*(0) vs x^{1-β}", ks, 0.005, format!("KS over {} draws", d.len())));
    Ok(checks)
}

/// Steps of one walk from the initial position up to and including the step that
/// leaves `[0, n]`, and whether each one is that final step.
fn walk_steps<R: Rng + ?Sized>(n: u64, law: &StepLaw, rng: &mut R) -> Vec<(u64, bool)> {
    let mut pos = law.sample_initial_position(n, rng);
    let mut out = Vec::new();
    loop {
        let s = law.sample_step(rng);
        pos = pos.saturating_add(s);
        let last = pos > n;
        out.push((s, last));
        if last {
            return out;
        }
    }
}

fn criterion_3(cfg: &SuiteConfig, seed: u64) -> Result<Vec<Check>> {
    let p = &cfg.params;
    let law = law(cfg)?;
    let mut checks = Vec::new();

    // Gap law: every step of the walk, including the one crossing n, is a φ draw,
    // and the pooled frequencies are unbiased by Wald's identity.
    let n_gap = 10_000u64;
    let walks = par_reps(derive_seed(seed, "c3/gaps"), cfg.reps(12_000), |rng| walk_steps(n_gap, &law, rng));
    let all: Vec<f64> = walks.iter().flatten().map(|&(s, _)| s as f64).collect();
    let interior: Vec<f64> = walks.iter().flatten().filter(|x| !x.1).map(|&(s, _)| s as f64).collect();
    let cdf = |x: f64| if x < 1.0 { 0.0 } else { 1.0 - law.tail(x.floor().min(u64::MAX as f64) as u64) };
    let pooled = EmpiricalDistribution::new(all)?;
    let ks_all = pooled.ks_distance_discrete(cdf);
    let ks_interior = EmpiricalDistribution::new(interior)?.ks_distance_discrete(cdf);
    checks.push(Check::at_most(
        "gap law",
        ks_all,
        0.01,
        format!(
            "KS over {} pooled steps at n={n_gap}; interior gaps only: {ks_interior:.4}",
            pooled.len()
        ),
    ));

    let n = 100_000u64;
    let mins: Vec<f64> = par_reps(derive_seed(seed, "c3/min"), cfg.reps(100_000), |rng| {
        law.sample_initial_position(n, rng) as f64 / n as f64
    });
    let d = EmpiricalDistribution::new(mins)?;
    let ks = d.ks_distance(|x| x.clamp(0.0, 1.0).powf(1.0 - p.beta));
    checks.push(Check::at_most(
        "min I_{0;n}/n vs x^{1-β} at n=1e5",
        ks,
        0.01,
        format!("KS over {} draws", d.len()),
    ));

    // #I_{1,1;n} ≥ 1 always, so the geometric bound applies to the excess count.
    let c_hat = c_inf_value(cfg, seed)?;
    let n_card = 10_000u64;
    let budget = default_budget(n_card, &law);
    let counts: Vec<Option<usize>> = par_reps(derive_seed(seed, "c3/card11"), cfg.reps(10_000), |rng| {
        let first = sample_zero_set(n_card, &law, rng);
        let rec = find_intersections(&first, 1, &law, 1, budget, rng);
        rec.complete.then(|| rec.common_sets[0].len())
    });
    let kept: Vec<usize> = counts.iter().flatten().copied().collect();
    let total = kept.len() as f64;
    let mut worst_excess = f64::NEG_INFINITY;
    for m in 1..=10usize {
        let f = kept.iter().filter(|&&c| c > m).count() as f64 / total;
        let se = (f * (1.0 - f) / total).sqrt().max(1.0 / total);
        worst_excess = worst_excess.max(f - (1.0 - c_hat).powi(m as i32) - 3.0 * se);
    }
    checks.push(Check::at_most(
        "P{#I_{1,1;n} > m} ≤ (1-c_inf)^m, m ≤ 10",
        worst_excess,
        0.0,
        format!(
            "largest excess over the bound plus 3 SE; c_inf {c_hat:.4}; {} of {} scans complete",
            kept.len(),
            counts.len()
        ),
    ));

    let mut moments = Vec::new();
    for &n in &[1_000u64, 10_000, 100_000] {
        let tail = law.tail(n);
        let xs: Vec<f64> = par_reps(derive_seed(seed, &format!("c3/allcard/{n}")), cfg.reps(20_000), |rng| {
            sample_zero_set(n, &law, rng).len() as f64 * tail
        });
        let m = xs.len() as f64;
        moments.push([xs.iter().sum::<f64>() / m, xs.iter().map(|x| x * x).sum::<f64>() / m]);
    }
    for (j, name) in ["first", "second"].iter().enumerate() {
        let vals: Vec<f64> = moments.iter().map(|m| m[j]).collect();
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        checks.push(Check::at_most(
            format!("{name} moment of #I_{{1;n}} F̄(n) within a band"),
            hi / lo,
            1.25,
            format!("values over n = 1e3, 1e4, 1e5: {vals:.4?}; band is max/min"),
        ));
    }
    Ok(checks)
}

/// `c_∞ Z^{*←}(1)` reference sample.
fn scaled_local_time_sample(beta: f64, c_inf: f64, reps: usize, seed: u64) -> Result<EmpiricalDistribution> {
    let sampler = PassageSampler::new(beta)?;
    let xs = par_reps(seed, reps, |rng| {
        let shift = sample_shift_start(beta, rng);
        c_inf * sampler.passage_times(shift, &[1.0], rng)[0]
    });
    EmpiricalDistribution::new(xs)
}

/// `cap(I)/ϑ_n = (w_n/ϑ_n) p̄` for a fresh zero set `I`.
fn scaled_p_bar<R: Rng + ?Sized>(n: u64, law: &StepLaw, reps_per_point: usize, rng: &mut R) -> (f64, f64) {
    let set = sample_zero_set(n, law, rng);
    let cap = capacity_with_rng(set.points(), law, reps_per_point, rng);
    (cap.value / theta_n(n, law), cap.value / law.wandering_rate(n))
}

fn criterion_4(cfg: &SuiteConfig, seed: u64) -> Result<Vec<Check>> {
    let p = &cfg.params;
    let law = law(cfg)?;
    let mut checks = Vec::new();

    let ci = c_infinity(cfg, seed)?;
    checks.push(Check::at_most(
        "c_inf routes agree",
        ci.discrepancy(),
        3.0,
        format!(
            "intersection {:.5} ± {:.5}, capacity {:.5} ± {:.5}; difference in combined SE",
            ci.intersection.value, ci.intersection.se, ci.capacity_ratio.value, ci.capacity_ratio.se
        ),
    ));
    let c_hat = cfg.c_inf.unwrap_or_else(|| ci.combined());

    let reference = scaled_local_time_sample(p.beta, c_hat, cfg.reps(200_000), derive_seed(seed, "c4/reference"))?;
    let batches = 4;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut means = Vec::new();
    for &n in &[1_000u64, 10_000, 100_000] {
        let mut row = Vec::new();
        for b in 0..batches {
            let s: Vec<f64> = par_reps(derive_seed(seed, &format!("c4/pbar/{n}/{b}")), cfg.reps(2_000), |rng| {
                scaled_p_bar(n, &law, 100, rng).0
            });
            let ks = EmpiricalDistribution::new(s)?.ks_two_sample(&reference);
            xs.push(n as f64);
            ys.push(ks);
            row.push(ks);
        }
        means.push(row.iter().sum::<f64>() / batches as f64);
    }
    let trend = kendall_trend_pairs(&xs, &ys)?;
    checks.push(Check::at_most(
        "(w_n/ϑ_n) p̄ approaches c_inf Z*^←(1): Kendall trend p",
        trend.p_decreasing,
        0.05,
        format!(
            "mean KS over n = 1e3, 1e4, 1e5: {means:.4?}; tau {:.3} over {} batches",
            trend.tau, trend.n
        ),
    ));
    checks.push(Check::at_most("Kendall tau is negative", trend.tau, -1e-12, ""));

    let n = 100_000u64;
    let budget = default_budget(n, &law);
    let rows: Vec<Option<f64>> = par_reps(derive_seed(seed, "c4/jp"), cfg.reps(6_000), |rng| {
        let set = sample_zero_set(n, &law, rng);
        let cap = capacity_with_rng(set.points(), &law, 400, rng);
        let pbar = cap.value / law.wandering_rate(n);
        first_meeting(&set, &law, budget, rng).map(|j| j as f64 * pbar)
    });
    let kept: Vec<f64> = rows.iter().flatten().copied().collect();
    let d = EmpiricalDistribution::new(kept)?;
    let ks = d.ks_distance(|x| 1.0 - (-x.max(0.0)).exp());
    checks.push(Check::at_most(
        "j_{1,1;n} p̄ vs Exp(1) at n=1e5",
        ks,
        0.03,
        format!("KS over {} draws, {} truncated scans excluded", d.len(), rows.len() - d.len()),
    ));
    Ok(checks)
}

fn criterion_5(cfg: &SuiteConfig, seed: u64) -> Result<Vec<Check>> {
    let p = &cfg.params;
    let mut checks = Vec::new();
    let (k, k_se) = k_mc(cfg, seed)?;
    let (kk, ii) = cfg.truncation;
    let mode = MarkMode::Profile { levels: vec![1.0] };
    let rows: Vec<Result<(f64, f64)>> = par_reps(derive_seed(seed, "c5/limit"), cfg.reps(100_000), |rng| {
        let s = sample_limit(p, kk, ii, &mode, rng)?;
        Ok((s.eval(Window::Upto(1.0))?, s.truncation_bound))
    });
    let rows: Vec<(f64, f64)> = rows.into_iter().collect::<Result<_>>()?;
    let bound = rows.iter().map(|r| r.1).sum::<f64>() / rows.len() as f64;
    let d = EmpiricalDistribution::new(rows.iter().map(|r| r.0).collect())?;
    let ks = d.ks_distance(|x| marginal_cdf(1.0, x, p, k).unwrap_or(f64::NAN));
    checks.push(Check::at_most(
        "M(1) vs exp(-K e^{-x})",
        ks,
        0.01 + bound,
        format!(
            "KS over {} samples, K = {k:.5} ± {k_se:.5}, truncation ({kk}, {ii}) bound {bound:.2e}",
            d.len()
        ),
    ));

    let e = marginal_time_exponent(p);
    let mut worst: f64 = 0.0;
    for a in [0.1, 0.5, 2.0, 7.0] {
        for t in [0.05, 0.3, 1.0] {
            for x in [-1.5, 0.0, 0.7, 3.0] {
                let lhs = marginal_cdf(a * t, x, p, k)?;
                let rhs = marginal_cdf(t, x - e * a.ln(), p, k)?;
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    checks.push(Check::at_most("self-affinity of the marginal", worst, 1e-12, "max abs difference on a grid"));
    Ok(checks)
}

fn criterion_6(cfg: &SuiteConfig, seed: u64) -> Result<Vec<Check>> {
    let p = &cfg.params;
    let mut checks = Vec::new();
    let (k, k_se) = k_mc(cfg, seed)?;
    let e = marginal_time_exponent(p);
    let mut worst: f64 = 0.0;
    let mut notes = Vec::new();
    for (j, &x) in [-0.5, 0.5, 1.5].iter().enumerate() {
        let est = joint_increment_prob(&[0.0, 1.0], &[x], p, cfg.reps(20_000), 256, derive_seed(seed, &format!("c6/k1/{j}")))?;
        let f = marginal_cdf(1.0, x, p, k)?;
        let f_se = f * 1f64.powf(e) * (-x).exp() * k_se;
        let z = (est.value - f).abs() / (est.se.powi(2) + f_se.powi(2)).sqrt();
        worst = worst.max(z);
        notes.push(format!("x={x}: {:.5}±{:.5} vs {f:.5}", est.value, est.se));
    }
    checks.push(Check::at_most(
        "one-interval joint formula = marginal",
        worst,
        3.0,
        format!("{}; difference in combined SE", notes.join(", ")),
    ));

    let (kk, ii) = cfg.truncation;
    let mode = MarkMode::Profile { levels: vec![0.5, 1.0] };
    let levels = [(0.0, 0.5), (0.5, 0.0), (1.0, 1.0)];
    let rows: Vec<Result<(f64, f64, f64)>> = par_reps(derive_seed(seed, "c6/sampler"), cfg.reps(100_000), |rng| {
        let s = sample_limit(p, kk, ii, &mode, rng)?;
        Ok((s.eval(Window::Upto(0.5))?, s.eval(Window::Between(0.5, 1.0))?, s.truncation_bound))
    });
    let rows: Vec<(f64, f64, f64)> = rows.into_iter().collect::<Result<_>>()?;
    let m = rows.len() as f64;
    let mut worst: f64 = 0.0;
    let mut notes = Vec::new();
    for (j, &(x1, x2)) in levels.iter().enumerate() {
        let freq = rows.iter().filter(|r| r.0 <= x1 && r.1 <= x2).count() as f64 / m;
        let se = (freq * (1.0 - freq) / m).sqrt();
        let est = joint_increment_prob(&[0.0, 0.5, 1.0], &[x1, x2], p, cfg.reps(20_000), 256, derive_seed(seed, &format!("c6/k2/{j}")))?;
        let z = (freq - est.value).abs() / (se.powi(2) + est.se.powi(2)).sqrt();
        worst = worst.max(z);
        notes.push(format!("({x1}, {x2}): sampler {freq:.5}±{se:.5}, formula {:.5}±{:.5}", est.value, est.se));
    }
    checks.push(Check::at_most(
        "two-interval sampler vs joint formula",
        worst,
        3.0,
        format!("{}; difference in combined SE", notes.join(", ")),
    ));
    Ok(checks)
}

fn criterion_7(cfg: &SuiteConfig, seed: u64) -> Result<Vec<Check>> {
    let p = &cfg.params;
    let c = c_ab(p);
    let mut checks = Vec::new();
    let mut violations = 0u32;
    for i in 1..=20 {
        let t1 = i as f64 / 21.0;
        for j in 1..=10 {
            for l in 1..=10 {
                let t2 = t1 + j as f64 / 10.0;
                let t3 = t1 + l as f64 / 10.0;
                let (split, joint) = scalar_convexity(c, t1, t2, t3);
                violations += u32::from(!(split < joint));
            }
        }
    }
    checks.push(Check::at_most(
        "t2^C - t1^C + t3^C < (t2 - t1 + t3)^C",
        violations as f64,
        0.0,
        format!("violations on a 20×10×10 grid, C = {c:.4}"),
    ));
    let r = counterexample_check(0.5, 1.0, 0.0, 1.0, p, cfg.reps(1_000_000), 256, derive_seed(seed, "c7/gap"))?;
    checks.push(Check::at_least(
        "gap between split and joint moments",
        r.gap.value / r.gap.se,
        3.0,
        format!(
            "split {:.6} ± {:.6}, joint {:.6} ± {:.6}, gap {:.3e} ± {:.1e}",
            r.split.value, r.split.se, r.joint.value, r.joint.se, r.gap.value, r.gap.se
        ),
    ));
    Ok(checks)
}

/// Normalized `max_k [V(w_n/Γ_k) + V₁(c_∞ ϑ_n Z_k^{*←}(1) / Γ_{k,1})]`: the two-level
/// Poisson structure of the limit with the exact `V` of horizon `n` in place of its
/// logarithmic expansion.
fn two_level_proxy(p: &ModelParams, table: &crate::analytic::NormalizerTable, reps: usize, seed: u64) -> Result<EmpiricalDistribution> {
    let tv = crate::analytic::TruncatedV::new(p)?;
    let sampler = PassageSampler::new(p.beta)?;
    let scale = (table.c_inf * table.theta_n).ln();
    let xs = par_reps(seed, reps, |rng| {
        let mut g = 0.0;
        let mut best = f64::NEG_INFINITY;
        for _ in 0..200 {
            g += rng.sample::<f64, _>(rand_distr::Exp1);
            let z = sampler.passage_times(sample_shift_start(p.beta, rng), &[1.0], rng)[0];
            let g1: f64 = rng.sample(rand_distr::Exp1);
            let value = tv.eval_log(table.w_n.ln() - g.ln()) + tv.eval_log(scale + z.ln() - g1.ln());
            best = best.max(value);
        }
        (best - table.b_n) / table.a_n
    });
    EmpiricalDistribution::new(xs)
}

fn criterion_8(cfg: &SuiteConfig, seed: u64) -> Result<Vec<Check>> {
    let p = &cfg.params;
    let law = law(cfg)?;
    let mut checks = Vec::new();
    let c_hat = c_inf_value(cfg, seed)?;
    let (k, _) = k_mc(cfg, seed)?;
    // Per-batch KS distances give the standard error of each mean directly.
    let batches = 4;
    let reps = cfg.reps(1_000);
    let mut means = Vec::new();
    let mut ses = Vec::new();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    let mut proxy_ks = Vec::new();
    let mut proxy_means = Vec::new();
    for &n in &[1_000u64, 10_000, 100_000] {
        let mut row = Vec::new();
        let mut proxy_row = Vec::new();
        let table = crate::analytic::normalizers(n, c_hat, &law, p)?;
        let proxy = two_level_proxy(p, &table, cfg.reps(20_000), derive_seed(seed, &format!("c8/proxy/{n}")))?;
        for b in 0..batches {
            let seed_nb = derive_seed(seed, &format!("c8/{n}/{b}"));
            let (_, d) = normalized_max_sample(n, p, c_hat, reps, &[Interval::unit()], seed_nb)?;
            row.push(d[0].ks_distance(|x| marginal_cdf(1.0, x, p, k).unwrap_or(f64::NAN)));
            proxy_row.push(d[0].ks_two_sample(&proxy));
        }
        proxy_means.push(proxy_row.iter().sum::<f64>() / batches as f64);
        proxy_ks.extend(proxy_row);
        let est = crate::subordinator::McEstimate::from_samples(&row)?;
        means.push(est.value);
        ses.push(est.se);
        xs.extend(std::iter::repeat(n as f64).take(batches));
        ys.extend(row);
    }
    let z_rise = (1..means.len())
        .map(|i| (means[i] - means[i - 1]) / (ses[i].powi(2) + ses[i - 1].powi(2)).sqrt())
        .fold(f64::NEG_INFINITY, f64::max);
    let trend = kendall_trend_pairs(&xs, &ys)?;
    checks.push(Check::at_most(
        "KS to the limit marginal is nonincreasing in n",
        z_rise,
        2.0,
        format!(
            "mean KS over n = 1e3, 1e4, 1e5: {means:.4?} ± {ses:.4?}; largest rise in SE; Kendall tau {:.3}, p {:.3}",
            trend.tau, trend.p_decreasing
        ),
    ));
    let proxy_trend = kendall_trend_pairs(&xs, &proxy_ks)?;
    checks.push(Check::at_most(
        "KS to the finite-n two-level proxy decreases: Kendall trend p",
        proxy_trend.p_decreasing,
        0.05,
        format!("mean KS over n = 1e3, 1e4, 1e5: {proxy_means:.4?}; tau {:.3}", proxy_trend.tau),
    ));

    let n = 10_000u64;
    let grid: Vec<f64> = (0..=50).map(|i| i as f64 / 50.0).collect();
    let violations: Vec<Result<u32>> = par_reps(derive_seed(seed, "c8/invariants"), cfg.reps(1_000), |rng: &mut StreamRng| {
        let r = simulate_process(n, &law, p, rng)?;
        let dense = r.dense();
        let mut bad = 0u32;
        let (a, b) = {
            let u: f64 = rng.random();
            let w: f64 = rng.random();
            (u.min(w), u.max(w))
        };
        let parts = [
            Interval::new(0.0, a)?,
            Interval::new(a, b)?,
            Interval::new(b, 1.0)?,
        ];
        let whole = r.sup_measure(Interval::unit());
        let joined = parts.iter().map(|&i| r.sup_measure(i)).fold(f64::NEG_INFINITY, f64::max);
        bad += u32::from(whole != joined);
        for &iv in parts.iter().chain(std::iter::once(&Interval::unit())) {
            let (lo, hi) = iv.times(n);
            let direct = if lo > hi {
                f64::NEG_INFINITY
            } else {
                dense[lo as usize..=hi as usize].iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            };
            bad += u32::from(direct != r.sup_measure(iv));
        }
        let rm = r.running_max(&grid);
        bad += rm.windows(2).filter(|w| w[1] < w[0]).count() as u32;
        for (&t, &m) in grid.iter().zip(&rm) {
            let hi = (t * n as f64).floor() as usize;
            let direct = dense[..=hi].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            bad += u32::from(direct != m);
        }
        Ok(bad)
    });
    let total: u32 = violations.into_iter().collect::<Result<Vec<u32>>>()?.iter().sum();
    checks.push(Check::at_most(
        "sup-measure and running-max invariants",
        total as f64,
        0.0,
        format!("violations over {} realizations at n={n}", cfg.reps(1_000)),
    ));
    Ok(checks)
}
