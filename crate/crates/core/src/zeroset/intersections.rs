//! Intersection indices `j_{k,i;n}`, common sets `I_{k,i;n}` and the hitting
//! probability `p̄_{k;n}`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::law::StepLaw;
use super::set::{intersect_sorted, walk_into, walk_meets, ZeroSet};
use crate::analytic::theta_n;
use crate::capacity::capacity;
use crate::error::Result;
use crate::rng::par_reps;
use crate::subordinator::McEstimate;

/// The first intersections of `I_{k;n}` with later independent zero sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntersectionRecord {
    pub k: u64,
    /// `j_{k,1;n} < j_{k,2;n} < …`.
    pub j_indices: Vec<u64>,
    /// `I_{k,i;n} = I_{k;n} ∩ I_{j_{k,i;n};n}`.
    pub common_sets: Vec<Vec<u64>>,
    /// `Î_{k,i;n} = I_{k,i;n} \ ∪_{l<i} I_{k,l;n}`.
    pub disjointified: Vec<Vec<u64>>,
    /// False when the scan hit its budget before `max_i` intersections.
    pub complete: bool,
    /// Number of later sets drawn.
    pub scanned: u64,
}

/// Default scan budget `50 w_n / ϑ_n`, several multiples of the mean waiting time.
pub fn default_budget(n: u64, law: &StepLaw) -> u64 {
    (50.0 * law.wandering_rate(n) / theta_n(n.max(1), law)).ceil() as u64
}

/// Removes from each set the points of the sets before it.
pub fn disjointify(sets: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut seen: Vec<u64> = Vec::new();
    let mut out = Vec::with_capacity(sets.len());
    for s in sets {
        let fresh: Vec<u64> = s.iter().copied().filter(|x| seen.binary_search(x).is_err()).collect();
        seen.extend(&fresh);
        seen.sort_unstable();
        out.push(fresh);
    }
    out
}

/// Scans `j = k+1, k+2, …` drawing fresh zero sets until `max_i` of them meet `k_set`
/// or `budget` sets have been drawn.
pub fn find_intersections<R: Rng + ?Sized>(
    k_set: &ZeroSet,
    k: u64,
    law: &StepLaw,
    max_i: usize,
    budget: u64,
    rng: &mut R,
) -> IntersectionRecord {
    let n = k_set.horizon();
    let mut buf = Vec::new();
    let mut j_indices = Vec::new();
    let mut common_sets = Vec::new();
    let mut scanned = 0;
    while j_indices.len() < max_i.max(1) && scanned < budget {
        scanned += 1;
        walk_into(n, law, rng, &mut buf);
        let common = intersect_sorted(k_set.points(), &buf);
        if !common.is_empty() {
            j_indices.push(k + scanned);
            common_sets.push(common);
        }
    }
    IntersectionRecord {
        k,
        complete: j_indices.len() >= max_i.max(1),
        disjointified: disjointify(&common_sets),
        j_indices,
        common_sets,
        scanned,
    }
}

/// First index `j > 0` with `I_{j;n} ∩ target ≠ ∅`, or `None` past the budget.
pub fn first_meeting<R: Rng + ?Sized>(target: &ZeroSet, law: &StepLaw, budget: u64, rng: &mut R) -> Option<u64> {
    (1..=budget).find(|_| walk_meets(target.points(), target.horizon(), law, rng))
}

/// The two estimators of `p̄ = P{I_{0;n} ∩ A ≠ ∅ | A}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PBarEstimate {
    /// Frequency over fresh zero sets.
    pub direct: McEstimate,
    /// `cap(A) / w_n` by the last-exit decomposition.
    pub via_capacity: McEstimate,
}

/// Estimates `p̄` for the frozen set `k_set` by both routes.
pub fn estimate_p_bar(k_set: &ZeroSet, law: &StepLaw, reps: usize, cap_reps_per_point: usize, seed: u64) -> Result<PBarEstimate> {
    let n = k_set.horizon();
    let hits = par_reps(crate::rng::derive_seed(seed, "p_bar/direct"), reps, |rng| {
        walk_meets(k_set.points(), n, law, rng) as u64
    });
    let p = hits.iter().sum::<u64>() as f64 / reps as f64;
    let w = law.wandering_rate(n);
    let cap = capacity(k_set.points(), law, cap_reps_per_point, crate::rng::derive_seed(seed, "p_bar/cap"))?;
    Ok(PBarEstimate {
        direct: McEstimate {
            value: p,
            se: (p * (1.0 - p) / reps as f64).sqrt(),
            reps,
        },
        via_capacity: McEstimate {
            value: cap.value / w,
            se: cap.se / w,
            reps: cap_reps_per_point,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::ModelParams;
    use crate::rng::stream;
    use crate::stats::chi_square_gof;
    use crate::zeroset::sample_zero_set;

    fn law() -> StepLaw {
        StepLaw::from_params(&ModelParams::default()).unwrap()
    }

    #[test]
    fn full_set_is_always_hit() {
        let e = estimate_p_bar(&ZeroSet::full(50), &law(), 2000, 10, 1).unwrap();
        assert_eq!(e.direct.value, 1.0);
    }

    #[test]
    fn disjointify_is_a_partition_of_the_union() {
        let sets = vec![vec![1, 4, 7], vec![4, 8], vec![1, 2, 8, 9]];
        let d = disjointify(&sets);
        assert_eq!(d, vec![vec![1, 4, 7], vec![8], vec![2, 9]]);
        let l = law();
        let mut rng = stream(70, 0);
        for _ in 0..50 {
            let k = sample_zero_set(500, &l, &mut rng);
            let r = find_intersections(&k, 1, &l, 4, 100_000, &mut rng);
            let mut u: Vec<u64> = r.common_sets.concat();
            u.sort_unstable();
            u.dedup();
            let mut v: Vec<u64> = r.disjointified.concat();
            let len = v.len();
            v.sort_unstable();
            v.dedup();
            assert_eq!(v.len(), len);
            assert_eq!(u, v);
            assert!(r.j_indices.windows(2).all(|w| w[0] < w[1]));
            for c in &r.common_sets {
                assert!(c.iter().all(|x| k.contains(*x)));
            }
        }
    }

    #[test]
    fn two_estimators_agree() {
        let l = law();
        let mut rng = stream(71, 0);
        let mut bad = 0;
        for i in 0..20 {
            let k = sample_zero_set(10_000, &l, &mut rng);
            let e = estimate_p_bar(&k, &l, 200_000, 4000, 100 + i).unwrap();
            let se = (e.direct.se.powi(2) + e.via_capacity.se.powi(2)).sqrt();
            if (e.direct.value - e.via_capacity.value).abs() > 3.0 * se {
                bad += 1;
            }
        }
        assert!(bad <= 1, "{bad} of 20 frozen sets disagree");
    }

    #[test]
    fn waiting_time_is_geometric() {
        let l = law();
        let mut rng = stream(72, 0);
        let k = sample_zero_set(200, &l, &mut rng);
        let p = estimate_p_bar(&k, &l, 2_000_000, 1, 3).unwrap().direct.value;
        let draws: Vec<u64> = (0..10_000)
            .map(|_| first_meeting(&k, &l, u64::MAX, &mut rng).unwrap())
            .collect();
        // Bins of equal geometric mass.
        let bins = 10;
        let edges: Vec<u64> = (1..bins)
            .map(|b| ((1.0 - b as f64 / bins as f64).ln() / (1.0 - p).ln()).floor() as u64)
            .collect();
        let mut obs = vec![0u64; bins];
        for d in draws {
            obs[edges.partition_point(|&e| e < d)] += 1;
        }
        let mut probs = Vec::new();
        let mut prev = 0.0;
        for b in 0..bins {
            let cdf = if b + 1 == bins { 1.0 } else { 1.0 - (1.0 - p).powf(edges[b] as f64) };
            probs.push(cdf - prev);
            prev = cdf;
        }
        let (_, _, pv) = chi_square_gof(&obs, &probs).unwrap();
        assert!(pv > 0.001, "p-value {pv}");
    }
}
