//! Discretized stable regenerative sets and the normalized point sampler on them.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::path::SubordinatorPath;
use super::stable::sample_shift_start;
use crate::error::{domain, Result};

/// Default local-time step of simulated paths.
pub const DEFAULT_DT: f64 = 1e-4;

/// Range of a (shifted) subordinator inside `[0, 1]`, stored as an ε-net.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegenerativeSetSample {
    pub path: SubordinatorPath,
    pub resolution: f64,
    /// Sorted points of the range in `[0, 1]`, consecutive ones at least `resolution` apart.
    pub hits: Vec<f64>,
    /// `Z^{*←}(1)`.
    pub inv_at_1: f64,
}

/// Simulates the closed range of `Z` (or of the shifted `Z^*` when `shifted`) in `[0, 1]`.
pub fn sample_regenerative<R: Rng + ?Sized>(
    beta: f64,
    epsilon: f64,
    shifted: bool,
    dt: f64,
    rng: &mut R,
) -> Result<RegenerativeSetSample> {
    if !(epsilon > 0.0 && epsilon <= 0.01) {
        return Err(domain("epsilon", epsilon, "(0, 0.01]"));
    }
    loop {
        let shift = if shifted { sample_shift_start(beta, rng) } else { 0.0 };
        let path = SubordinatorPath::sample_until(beta, dt, shift, 1.0, rng)?;
        let inv_at_1 = path.first_passage(1.0)?;
        // A path jumping over 1 on its first refined step carries no local time.
        if inv_at_1 <= 0.0 {
            continue;
        }
        let mut hits: Vec<f64> = Vec::new();
        for &v in path.values.iter().take_while(|&&v| v <= 1.0) {
            if hits.last().map_or(true, |&h| v - h >= epsilon) {
                hits.push(v);
            }
        }
        return Ok(RegenerativeSetSample {
            path,
            resolution: epsilon,
            hits,
            inv_at_1,
        });
    }
}

impl RegenerativeSetSample {
    /// `η(x) = Z^{*←}(x) / Z^{*←}(1)` for `x ∈ [0, 1]`.
    pub fn eta(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        // The path is long enough for every level up to 1.
        self.path.first_passage(x).map_or(1.0, |t| (t / self.inv_at_1).min(1.0))
    }

    /// `η^←(u)`: the range point reached at local time `u·Z^{*←}(1)`.
    pub fn eta_inverse(&self, u: f64) -> f64 {
        self.path.value_before(u * self.inv_at_1)
    }

    /// `J_i = η^←(U_i)` for `m` independent uniforms.
    pub fn sample_j_points<R: Rng + ?Sized>(&self, m: usize, rng: &mut R) -> Vec<f64> {
        (0..m).map(|_| self.eta_inverse(rng.random::<f64>())).collect()
    }

    /// Distance from `x` to the nearest hit.
    pub fn distance_to_hits(&self, x: f64) -> f64 {
        let i = self.hits.partition_point(|&h| h < x);
        let mut d = f64::INFINITY;
        if i < self.hits.len() {
            d = d.min(self.hits[i] - x);
        }
        if i > 0 {
            d = d.min(x - self.hits[i - 1]);
        }
        d
    }

    /// Whether the range meets the open interval `(a, b)`.
    pub fn hits_interval(&self, a: f64, b: f64) -> bool {
        let i = self.path.values.partition_point(|&v| v <= a);
        i < self.path.values.len() && self.path.values[i] < b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::stats::EmpiricalDistribution;

    #[test]
    fn unshifted_contains_zero() {
        let mut rng = stream(30, 0);
        for _ in 0..200 {
            let s = sample_regenerative(0.25, 1e-3, false, 1e-3, &mut rng).unwrap();
            assert_eq!(s.hits[0], 0.0);
            assert!(s.inv_at_1 > 0.0);
            assert!(s.hits.iter().all(|&h| (0.0..=1.0).contains(&h)));
        }
        assert!(sample_regenerative(0.25, 0.5, false, 1e-3, &mut rng).is_err());
    }

    #[test]
    fn shifted_min_hit_has_shift_law() {
        let mut rng = stream(31, 0);
        let mins: Vec<f64> = (0..20_000)
            .map(|_| sample_regenerative(0.25, 1e-3, true, 1e-2, &mut rng).unwrap().hits[0])
            .collect();
        let d = EmpiricalDistribution::new(mins).unwrap();
        // Conditioning on positive local time before 1 removes mass of order dt.
        assert!(d.ks_distance(|x| x.clamp(0.0, 1.0).powf(0.75)) < 0.015);
    }

    #[test]
    fn hitting_frequency_monotone_in_length() {
        let mut rng = stream(32, 0);
        let samples: Vec<_> = (0..3000)
            .map(|_| sample_regenerative(0.25, 1e-3, true, 1e-3, &mut rng).unwrap())
            .collect();
        let mut prev = 0;
        for &w in &[0.01, 0.05, 0.1, 0.2, 0.4] {
            let c = samples.iter().filter(|s| s.hits_interval(0.5 - w / 2.0, 0.5 + w / 2.0)).count();
            assert!(c >= prev);
            prev = c;
        }
    }

    #[test]
    fn j_points_lie_near_hits() {
        let mut rng = stream(33, 0);
        let mut violations = 0;
        for _ in 0..10_000 {
            let s = sample_regenerative(0.25, 1e-2, true, 1e-2, &mut rng).unwrap();
            for j in s.sample_j_points(3, &mut rng) {
                if !(0.0..=1.0).contains(&j) || s.distance_to_hits(j) > s.resolution {
                    violations += 1;
                }
            }
        }
        assert_eq!(violations, 0);
    }

    #[test]
    fn eta_normalization_and_inverse_sampling() {
        let mut rng = stream(34, 0);
        let s = sample_regenerative(0.25, 1e-3, true, 1e-4, &mut rng).unwrap();
        assert!((s.eta(1.0) - 1.0).abs() < 1e-12);
        assert!(s.eta(s.hits[0]) <= 1e-12);
        let j = EmpiricalDistribution::new(s.sample_j_points(100_000, &mut rng)).unwrap();
        let mut worst: f64 = 0.0;
        for k in 0..=200 {
            let x = k as f64 / 200.0;
            worst = worst.max((j.ecdf(x) - s.eta(x)).abs());
        }
        assert!(worst < 2.0 * s.resolution + 0.005, "{worst}");
    }

    #[test]
    fn j_points_exchangeable() {
        let mut rng = stream(35, 0);
        let mut a = Vec::new();
        let mut b = Vec::new();
        for _ in 0..20_000 {
            let s = sample_regenerative(0.25, 1e-2, true, 1e-2, &mut rng).unwrap();
            let j = s.sample_j_points(2, &mut rng);
            a.push(j[0]);
            b.push(j[1]);
        }
        let ks = EmpiricalDistribution::new(a)
            .unwrap()
            .ks_two_sample(&EmpiricalDistribution::new(b).unwrap());
        assert!(ks < 0.015, "{ks}");
    }
}
