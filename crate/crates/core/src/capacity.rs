//! Capacities of sets for the one-sided renewal walk and the constant `c_∞`.
//!
//! A renewal walk is nondecreasing, so whether it escapes a finite set is decided
//! exactly as soon as it passes the set's maximum.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::rng::{par_reps, stream, StreamRng};
use crate::zeroset::StepLaw;

/// Capacity estimate with its Monte Carlo standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityEstimate {
    pub value: f64,
    pub se: f64,
    /// Displacement up to which walks were followed; 0 when escape is exact.
    pub horizon: u128,
    pub reps: usize,
}

/// Whether a walk started at `set[from]` avoids every later point of the sorted `set`.
fn escapes<R: Rng + ?Sized>(set: &[u128], from: usize, law: &StepLaw, rng: &mut R) -> bool {
    let last = match set.last() {
        Some(&l) => l,
        None => return true,
    };
    let mut pos = set[from];
    let mut i = from + 1;
    loop {
        pos = pos.saturating_add(law.sample_step_wide(rng));
        if pos > last {
            return true;
        }
        // Gallop, then bisect, to the first set point not below `pos`.
        let mut step = 1;
        while i + step < set.len() && set[i + step] < pos {
            i += step;
            step *= 2;
        }
        let hi = (i + step).min(set.len());
        i += set[i..hi].partition_point(|&x| x < pos);
        if set[i] == pos {
            return false;
        }
    }
}

fn to_wide<T: Copy + Into<u128>>(set: &[T]) -> Vec<u128> {
    set.iter().map(|&x| x.into()).collect()
}

/// Frequency with which a walk from `a` never hits `A \ {a}`.
pub fn escape_probability<T: Copy + Into<u128>>(
    set: &[T],
    a: T,
    law: &StepLaw,
    reps: usize,
    seed: u64,
) -> Result<CapacityEstimate> {
    let wide = to_wide(set);
    let from = wide
        .binary_search(&a.into())
        .map_err(|_| Error::NotInSet(a.into()))?;
    let hits = par_reps(seed, reps, |rng| escapes(&wide, from, law, rng) as u64 as f64);
    let p = hits.iter().sum::<f64>() / reps as f64;
    Ok(CapacityEstimate {
        value: p,
        se: (p * (1.0 - p) / reps as f64).sqrt(),
        horizon: 0,
        reps,
    })
}

/// `cap(A) = Σ_{a∈A} P_a{walk never returns to A}` with `reps_per_point` walks per point.
pub fn capacity<T: Copy + Into<u128>>(set: &[T], law: &StepLaw, reps_per_point: usize, seed: u64) -> Result<CapacityEstimate> {
    if set.is_empty() {
        return Err(Error::EmptySample);
    }
    let wide = to_wide(set);
    let per_point: Vec<(f64, f64)> = (0..wide.len())
        .into_par_iter()
        .map(|k| {
            let mut rng = stream(seed, k as u64);
            let esc = (0..reps_per_point)
                .filter(|_| escapes(&wide, k, law, &mut rng))
                .count();
            let p = esc as f64 / reps_per_point as f64;
            (p, p * (1.0 - p) / reps_per_point as f64)
        })
        .collect();
    Ok(CapacityEstimate {
        value: per_point.iter().map(|x| x.0).sum(),
        se: per_point.iter().map(|x| x.1).sum::<f64>().sqrt(),
        horizon: 0,
        reps: reps_per_point,
    })
}

/// Serial capacity estimate with a caller-supplied stream, for use inside parallel loops.
pub fn capacity_with_rng<R: Rng + ?Sized>(set: &[u64], law: &StepLaw, reps_per_point: usize, rng: &mut R) -> CapacityEstimate {
    let wide = to_wide(set);
    let mut value = 0.0;
    let mut var = 0.0;
    for k in 0..wide.len() {
        let esc = (0..reps_per_point).filter(|_| escapes(&wide, k, law, rng)).count();
        let p = esc as f64 / reps_per_point as f64;
        value += p;
        var += p * (1.0 - p) / reps_per_point as f64;
    }
    CapacityEstimate {
        value,
        se: var.sqrt(),
        horizon: 0,
        reps: reps_per_point,
    }
}

/// Capacity of a large set estimated from `points` uniformly chosen elements, one
/// escape walk each: `#A · (fraction escaping)`.
pub fn capacity_sampled<R: Rng + ?Sized>(set: &[u128], law: &StepLaw, points: usize, rng: &mut R) -> CapacityEstimate {
    let esc = (0..points)
        .filter(|_| {
            let k = rng.random_range(0..set.len());
            escapes(set, k, law, rng)
        })
        .count();
    let p = esc as f64 / points as f64;
    let m = set.len() as f64;
    CapacityEstimate {
        value: m * p,
        se: m * (p * (1.0 - p) / points as f64).sqrt(),
        horizon: 0,
        reps: points,
    }
}

/// Rao–Blackwellized estimate of `u(m) = P{m ∈ range of a walk from 0}`: the sum over
/// visited positions `p < m` of `P{φ = m - p}`.
pub fn hit_probability(m: u64, law: &StepLaw, reps: usize, seed: u64) -> (f64, f64) {
    let xs = par_reps(seed, reps, |rng| {
        let mut pos = 0u64;
        let mut s = 0.0;
        while pos < m {
            s += law.pmf(m - pos);
            pos = pos.saturating_add(law.sample_step(rng));
        }
        s
    });
    let n = reps as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Asymptotic renewal density `u(m) ≈ m^{β-1} / (Γ(β) Γ(1-β) L(m))`.
pub fn renewal_density_asymptotic(m: f64, law: &StepLaw) -> f64 {
    let b = law.beta();
    m.powf(b - 1.0) / (gamma(b) * gamma(1.0 - b) * law.l_const())
}

/// Displacement `M` beyond which two independent walks from 0 meet again with
/// probability below `tol`, from `Σ_{k>M} u(k)² ≈ M^{2β-1} / ((1-2β) (Γ(β)Γ(1-β)L)²)`.
pub fn intersection_cutoff(law: &StepLaw, tol: f64) -> u128 {
    let b = law.beta();
    let k = gamma(b) * gamma(1.0 - b) * law.l_const();
    let m = ((1.0 - 2.0 * b) * k * k * tol).powf(1.0 / (2.0 * b - 1.0));
    m.min(1e30).max(1.0) as u128
}

/// Whether two independent walks from 0 share no point other than 0 below `cutoff`.
fn ranges_disjoint<R: Rng + ?Sized>(law: &StepLaw, cutoff: u128, rng: &mut R) -> bool {
    let mut a = law.sample_step_wide(rng);
    let mut b = law.sample_step_wide(rng);
    while a <= cutoff && b <= cutoff {
        if a == b {
            return false;
        }
        if a < b {
            a = a.saturating_add(law.sample_step_wide(rng));
        } else {
            b = b.saturating_add(law.sample_step_wide(rng));
        }
    }
    true
}

/// The range `{S_0 = 0, S_1, …, S_n}` of a walk from 0.
pub fn walk_range<R: Rng + ?Sized>(n: usize, law: &StepLaw, rng: &mut R) -> Vec<u128> {
    let mut out = Vec::with_capacity(n + 1);
    let mut pos = 0u128;
    out.push(0);
    for _ in 0..n {
        pos = pos.saturating_add(law.sample_step_wide(rng));
        if pos != *out.last().unwrap() {
            out.push(pos);
        }
    }
    out
}

/// The two routes to `c_∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CInfinity {
    /// Frequency of `A_0 ∩ Ã_0 = {0}` for independent walks followed up to the cutoff.
    pub intersection: CapacityEstimate,
    /// `cap(A_0(0, n)) / n` averaged over independent ranges.
    pub capacity_ratio: CapacityEstimate,
}

impl CInfinity {
    /// Inverse-variance weighted combination of the two routes.
    pub fn combined(&self) -> f64 {
        let (a, b) = (self.intersection, self.capacity_ratio);
        let (wa, wb) = (1.0 / a.se.powi(2).max(1e-300), 1.0 / b.se.powi(2).max(1e-300));
        (wa * a.value + wb * b.value) / (wa + wb)
    }

    /// `|a - b| / √(se_a² + se_b²)`.
    pub fn discrepancy(&self) -> f64 {
        let (a, b) = (self.intersection, self.capacity_ratio);
        (a.value - b.value).abs() / (a.se.powi(2) + b.se.powi(2)).sqrt()
    }
}

/// Budget of the `c_∞` estimation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CInfinityBudget {
    /// Pairs of walks for the intersection route.
    pub pairs: usize,
    /// Independent ranges for the capacity route.
    pub ranges: usize,
    /// Escape walks per range.
    pub points_per_range: usize,
    /// Truncation tolerance of the intersection route.
    pub tol: f64,
}

impl Default for CInfinityBudget {
    fn default() -> Self {
        Self {
            pairs: 200_000,
            ranges: 40,
            points_per_range: 200,
            tol: 1e-4,
        }
    }
}

/// Estimates `c_∞` by both routes at horizon `n`.
pub fn estimate_c_infty(law: &StepLaw, n: usize, budget: &CInfinityBudget, seed: u64) -> Result<CInfinity> {
    if n < 1000 {
        return Err(crate::error::domain("n", n as f64, "[1000, ∞)"));
    }
    let cutoff = intersection_cutoff(law, budget.tol);
    let seed_a = crate::rng::derive_seed(seed, "c_inf/intersection");
    let hits = par_reps(seed_a, budget.pairs, |rng| ranges_disjoint(law, cutoff, rng) as u64);
    let p = hits.iter().sum::<u64>() as f64 / budget.pairs as f64;
    let intersection = CapacityEstimate {
        value: p,
        se: (p * (1.0 - p) / budget.pairs as f64).sqrt(),
        horizon: cutoff,
        reps: budget.pairs,
    };
    let seed_b = crate::rng::derive_seed(seed, "c_inf/capacity");
    let ratios: Vec<f64> = par_reps(seed_b, budget.ranges, |rng: &mut StreamRng| {
        let range = walk_range(n, law, rng);
        capacity_sampled(&range, law, budget.points_per_range, rng).value / n as f64
    });
    let est = crate::subordinator::McEstimate::from_samples(&ratios)?;
    Ok(CInfinity {
        intersection,
        capacity_ratio: CapacityEstimate {
            value: est.value,
            se: est.se,
            horizon: 0,
            reps: budget.ranges * budget.points_per_range,
        },
    })
}
