//! The stationary process `X_t = Σ_j V₁(w_n/Γ_j) 1{t ∈ I_{j;n}}` and its maxima.
//!
//! `V₁` vanishes for `Γ_j ≥ w_n ν̄(x0)`, so only finitely many arrivals matter and
//! the truncation is exact. `X` is zero off the union of the retained zero sets,
//! which is all that is stored.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::analytic::{normalizers, tail_nu_bar, ModelParams, NormalizerTable, TruncatedV};
use crate::error::{domain, Result};
use crate::rng::par_reps;
use crate::stats::EmpiricalDistribution;
use crate::zeroset::{disjointify, sample_zero_set, StepLaw, ZeroSet};

/// Closed window `[lo, hi] ⊆ [0, 1]`, acting on times `t` with `t/n ∈ [lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
            return Err(domain("interval", hi, "0 ≤ lo ≤ hi ≤ 1"));
        }
        Ok(Self { lo, hi })
    }

    pub fn unit() -> Self {
        Self { lo: 0.0, hi: 1.0 }
    }

    /// Integer times covered at horizon `n`.
    pub fn times(&self, n: u64) -> (u64, u64) {
        let nf = n as f64;
        ((self.lo * nf).ceil() as u64, (self.hi * nf).floor() as u64)
    }
}

/// One realization of the large-jump part of the process on `{0, …, n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessRealization {
    pub n: u64,
    pub w_n: f64,
    /// Arrivals `Γ_1 < Γ_2 < …` below `w_n ν̄(x0)`.
    pub gammas: Vec<f64>,
    /// `V₁(w_n / Γ_j)` per arrival.
    pub weights: Vec<f64>,
    pub zero_sets: Vec<ZeroSet>,
    /// `(t, X_t)` for every `t` in the union of the zero sets, sorted by `t`.
    support: Vec<(u64, f64)>,
}

/// Samples a realization: `N ~ Poisson(w_n ν̄(x0))` arrivals placed as uniform order
/// statistics, one independent zero set each.
pub fn simulate_process<R: Rng + ?Sized>(n: u64, law: &StepLaw, p: &ModelParams, rng: &mut R) -> Result<ProcessRealization> {
    if n == 0 {
        return Err(domain("n", 0.0, "{1, 2, ...}"));
    }
    let w_n = law.wandering_rate(n);
    let cut = w_n * tail_nu_bar(p.x0, p)?;
    let count = Poisson::new(cut).map_or(0, |d| d.sample(rng) as usize);
    let mut gammas: Vec<f64> = (0..count).map(|_| cut * rng.random::<f64>()).collect();
    gammas.sort_by(f64::total_cmp);
    let zero_sets: Vec<ZeroSet> = (0..count).map(|_| sample_zero_set(n, law, rng)).collect();
    let tv = TruncatedV::new(p)?;
    let weights: Vec<f64> = gammas.iter().map(|g| tv.eval_log(w_n.ln() - g.ln())).collect();
    Ok(ProcessRealization::assemble(n, w_n, gammas, weights, zero_sets))
}

impl ProcessRealization {
    /// Builds a realization from explicit arrivals, weights and zero sets.
    pub fn assemble(n: u64, w_n: f64, gammas: Vec<f64>, weights: Vec<f64>, zero_sets: Vec<ZeroSet>) -> Self {
        let mut pairs: Vec<(u64, f64)> = zero_sets
            .iter()
            .zip(&weights)
            .flat_map(|(z, &w)| z.points().iter().map(move |&t| (t, w)))
            .collect();
        pairs.sort_by_key(|x| x.0);
        let mut support: Vec<(u64, f64)> = Vec::with_capacity(pairs.len());
        for (t, w) in pairs {
            match support.last_mut() {
                Some(last) if last.0 == t => last.1 += w,
                _ => support.push((t, w)),
            }
        }
        Self {
            n,
            w_n,
            gammas,
            weights,
            zero_sets,
            support,
        }
    }

    /// True when no arrival was retained, so `X ≡ 0`.
    pub fn is_degenerate(&self) -> bool {
        self.gammas.is_empty()
    }

    pub fn support(&self) -> &[(u64, f64)] {
        &self.support
    }

    /// `X_t`.
    pub fn value(&self, t: u64) -> f64 {
        self.support
            .binary_search_by_key(&t, |x| x.0)
            .map_or(0.0, |i| self.support[i].1)
    }

    /// Dense array `X_0, …, X_n`, for small horizons.
    pub fn dense(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.n as usize + 1];
        for (z, &w) in self.zero_sets.iter().zip(&self.weights) {
            for &t in z.points() {
                x[t as usize] += w;
            }
        }
        x
    }

    /// `𝓜_n(B) = max_{t ∈ nB} X_t`; 0 when `nB` misses every zero set but contains
    /// an integer, `-∞` when `nB` contains no integer.
    pub fn sup_measure(&self, b: Interval) -> f64 {
        let (lo, hi) = b.times(self.n);
        if lo > hi {
            return f64::NEG_INFINITY;
        }
        let a = self.support.partition_point(|x| x.0 < lo);
        let e = self.support.partition_point(|x| x.0 <= hi);
        let span = hi - lo + 1;
        let mut m = if (e - a) as u64 == span { f64::NEG_INFINITY } else { 0.0 };
        for &(_, v) in &self.support[a..e] {
            m = m.max(v);
        }
        m
    }

    /// `𝕄_n(t) = max_{i ≤ nt} X_i` on a nondecreasing grid of `t ∈ [0, 1]`.
    pub fn running_max(&self, t_grid: &[f64]) -> Vec<f64> {
        t_grid
            .iter()
            .map(|&t| self.sup_measure(Interval { lo: 0.0, hi: t.clamp(0.0, 1.0) }))
            .collect()
    }

    fn max_over(&self, set: &[u64], lo: u64, hi: u64) -> f64 {
        set.iter()
            .filter(|&&t| t >= lo && t <= hi)
            .map(|&t| self.value(t))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Maxima over the disjointified sets `Î_{k;n}` and `Î_{k,i;n}` for `k ≤ K`, `i ≤ I`,
    /// where `I_{k,i;n}` intersects `I_{k;n}` with the `i`-th later zero set meeting it.
    pub fn decomposed_maxima(&self, b: Interval, k_max: usize, i_max: usize) -> MaximaRecord {
        let (lo, hi) = b.times(self.n);
        let kk = k_max.min(self.zero_sets.len());
        let sets: Vec<Vec<u64>> = self.zero_sets[..kk].iter().map(|z| z.points().to_vec()).collect();
        let hat_k = disjointify(&sets);
        let per_k: Vec<f64> = hat_k.iter().map(|s| self.max_over(s, lo, hi)).collect();
        let mut per_ki = Vec::with_capacity(kk);
        for k in 0..kk {
            let mut common = Vec::new();
            for later in &self.zero_sets[k + 1..] {
                if common.len() == i_max {
                    break;
                }
                let c = crate::zeroset::intersect(&self.zero_sets[k], later).unwrap_or_default();
                if !c.is_empty() {
                    common.push(c);
                }
            }
            per_ki.push(disjointify(&common).iter().map(|s| self.max_over(s, lo, hi)).collect());
        }
        let mut upto = Vec::with_capacity(kk);
        let mut acc = f64::NEG_INFINITY;
        for &m in &per_k {
            acc = acc.max(m);
            upto.push(acc);
        }
        MaximaRecord {
            total: self.sup_measure(b),
            per_k,
            per_ki,
            upto_k: upto,
        }
    }
}

/// Decomposition of `𝓜_n(B)` over the first arrivals; `-∞` marks empty domains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximaRecord {
    /// `𝓜_n(B)`.
    pub total: f64,
    /// `𝓜_{k;n}(B)`.
    pub per_k: Vec<f64>,
    /// `𝓜_{k,i;n}(B)`.
    pub per_ki: Vec<Vec<f64>>,
    /// `𝓜_{[K];n}(B)` for `K = 1, 2, …`.
    pub upto_k: Vec<f64>,
}

impl MaximaRecord {
    /// `(raw - b_n) / a_n`.
    pub fn normalized(&self, t: &NormalizerTable) -> f64 {
        (self.total - t.b_n) / t.a_n
    }
}

/// `X_t` at a single time, by thinning: each arrival covers `t` with probability
/// `1/w_n`, so the covering arrivals form a Poisson process of rate `1/w_n` on
/// `[0, w_n ν̄(x0))`.
pub fn sample_marginal<R: Rng + ?Sized>(n: u64, law: &StepLaw, p: &ModelParams, rng: &mut R) -> Result<f64> {
    let w_n = law.wandering_rate(n);
    let rate = tail_nu_bar(p.x0, p)?;
    let count = Poisson::new(rate).map_or(0, |d| d.sample(rng) as usize);
    let tv = TruncatedV::new(p)?;
    let cut = w_n * rate;
    Ok((0..count)
        .map(|_| tv.eval_log(w_n.ln() - (cut * rng.random::<f64>()).ln()))
        .sum())
}

/// Independent normalized maxima `(𝓜_n(B) - b_n)/a_n`, one sample per interval.
pub fn normalized_max_sample(
    n: u64,
    p: &ModelParams,
    c_inf: f64,
    reps: usize,
    intervals: &[Interval],
    seed: u64,
) -> Result<(NormalizerTable, Vec<EmpiricalDistribution>)> {
    let law = StepLaw::from_params(p)?;
    let table = normalizers(n, c_inf, &law, p)?;
    let rows = par_reps(seed, reps, |rng| -> Result<Vec<f64>> {
        let r = simulate_process(n, &law, p, rng)?;
        Ok(intervals
            .iter()
            .map(|&b| (r.sup_measure(b) - table.b_n) / table.a_n)
            .collect())
    });
    let rows: Vec<Vec<f64>> = rows.into_iter().collect::<Result<_>>()?;
    let dists = (0..intervals.len())
        .map(|j| EmpiricalDistribution::new(rows.iter().map(|r| r[j]).collect()))
        .collect::<Result<_>>()?;
    Ok((table, dists))
}
