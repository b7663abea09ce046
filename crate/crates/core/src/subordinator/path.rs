//! Discretized subordinator paths on a local-time grid.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::stable::sample_stable;
use crate::error::{domain, Error, Result};

/// Number of geometric refinement steps below the first regular grid point.
const REFINE: u32 = 12;

/// Values `Z(t_i)` of a (possibly shifted) β-stable subordinator on an increasing grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubordinatorPath {
    pub beta: f64,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// `Z^*(0)`; zero for an unshifted path.
    pub shift: f64,
}

impl SubordinatorPath {
    /// Simulates from `shift` until the path exceeds `level`. The grid halves
    /// geometrically towards 0 below `dt` and is uniform with step `dt` above.
    pub fn sample_until<R: Rng + ?Sized>(beta: f64, dt: f64, shift: f64, level: f64, rng: &mut R) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(domain("dt", dt, "(0, ∞)"));
        }
        let mut grid = vec![0.0];
        let mut values = vec![shift];
        let push = |t: f64, grid: &mut Vec<f64>, values: &mut Vec<f64>, rng: &mut R| {
            let last_t = *grid.last().unwrap();
            let last_v = *values.last().unwrap();
            grid.push(t);
            values.push(last_v + sample_stable(beta, t - last_t, rng));
        };
        for k in (1..=REFINE).rev() {
            if *values.last().unwrap() > level {
                break;
            }
            push(dt * 0.5f64.powi(k as i32), &mut grid, &mut values, rng);
        }
        let mut i = 1u64;
        while *values.last().unwrap() <= level {
            push(dt * i as f64, &mut grid, &mut values, rng);
            i += 1;
        }
        Ok(Self {
            beta,
            grid,
            values,
            shift,
        })
    }

    /// Simulates on the uniform grid `0, dt, …, steps·dt`.
    pub fn sample_fixed<R: Rng + ?Sized>(beta: f64, dt: f64, steps: usize, shift: f64, rng: &mut R) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(domain("dt", dt, "(0, ∞)"));
        }
        let grid: Vec<f64> = (0..=steps).map(|i| dt * i as f64).collect();
        let mut values = Vec::with_capacity(steps + 1);
        let mut v = shift;
        values.push(v);
        for _ in 0..steps {
            v += sample_stable(beta, dt, rng);
            values.push(v);
        }
        Ok(Self {
            beta,
            grid,
            values,
            shift,
        })
    }

    pub fn max_value(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// `Z^←(level) = inf{t : Z(t) ≥ level}`, linearly interpolated inside the grid cell
    /// where the crossing happens; 0 when the path starts at or above `level`. Flat
    /// stretches left by underflowed increments resolve to their left end.
    pub fn first_passage(&self, level: f64) -> Result<f64> {
        let i = self.values.partition_point(|&v| v < level);
        if i == 0 {
            return Ok(0.0);
        }
        if i == self.values.len() {
            return Err(Error::PathTooShort {
                level,
                reached: self.max_value(),
            });
        }
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        let (t0, t1) = (self.grid[i - 1], self.grid[i]);
        Ok(t0 + (level - v0) / (v1 - v0) * (t1 - t0))
    }

    /// Value at the last grid time not after `t`.
    pub fn value_before(&self, t: f64) -> f64 {
        let i = self.grid.partition_point(|&s| s <= t);
        self.values[i.max(1) - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::stats::{kendall_trend, EmpiricalDistribution};

    #[test]
    fn path_is_monotone_and_reaches_level() {
        let mut rng = stream(20, 0);
        for _ in 0..100 {
            let p = SubordinatorPath::sample_until(0.25, 1e-3, 0.0, 1.0, &mut rng).unwrap();
            assert!(p.values.windows(2).all(|w| w[0] <= w[1]));
            assert!(p.grid.windows(2).all(|w| w[0] < w[1]));
            assert!(p.max_value() > 1.0);
            assert!(p.first_passage(1.0).is_ok());
            assert!(p.first_passage(p.max_value() + 1.0).is_err());
        }
    }

    #[test]
    fn shifted_path_passage_below_shift_is_zero() {
        let mut rng = stream(21, 0);
        let p = SubordinatorPath::sample_until(0.25, 1e-3, 0.4, 1.0, &mut rng).unwrap();
        assert_eq!(p.first_passage(0.3).unwrap(), 0.0);
        assert_eq!(p.values[0], 0.4);
    }

    #[test]
    fn self_similarity_of_values() {
        let mut rng = stream(22, 0);
        let a = 3.0f64;
        let n = 100_000;
        let mut x = Vec::with_capacity(n);
        let mut y = Vec::with_capacity(n);
        for _ in 0..n {
            let p = SubordinatorPath::sample_fixed(0.4, 0.1, 3, 0.0, &mut rng).unwrap();
            x.push(p.values[3] / a.powf(1.0 / 0.4));
            y.push(p.values[1]);
        }
        let ks = EmpiricalDistribution::new(x)
            .unwrap()
            .ks_two_sample(&EmpiricalDistribution::new(y).unwrap());
        assert!(ks < 0.01, "{ks}");
    }

    #[test]
    fn mean_passage_grows_like_power_beta() {
        let mut rng = stream(23, 0);
        let levels = [0.5, 1.0, 2.0, 4.0];
        let mut means = Vec::new();
        for &l in &levels {
            let reps = 4000;
            let m: f64 = (0..reps)
                .map(|_| {
                    SubordinatorPath::sample_until(0.25, 1e-3, 0.0, l, &mut rng)
                        .unwrap()
                        .first_passage(l)
                        .unwrap()
                })
                .sum::<f64>()
                / reps as f64;
            means.push(m);
        }
        let xs: Vec<f64> = levels.iter().map(|l| l.ln()).collect();
        let ys: Vec<f64> = means.iter().map(|m| m.ln()).collect();
        let mx = xs.iter().sum::<f64>() / 4.0;
        let my = ys.iter().sum::<f64>() / 4.0;
        let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
            / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
        assert!((slope - 0.25).abs() < 0.05, "{slope}");
        assert!(kendall_trend(&means).tau > 0.0);
    }
}
