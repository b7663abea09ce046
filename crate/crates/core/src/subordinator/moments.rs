//! Fractional moments of the Mittag-Leffler law of `Z^←(1)`.

use serde::{Deserialize, Serialize};

use super::stable::sample_stable;
use crate::error::{domain, Result};
use crate::rng::par_reps;

/// Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    pub se: f64,
    pub reps: usize,
}

impl McEstimate {
    pub fn from_samples(x: &[f64]) -> Result<Self> {
        if x.len() < 2 {
            return Err(crate::error::Error::EmptySample);
        }
        let n = x.len() as f64;
        let m = x.iter().sum::<f64>() / n;
        let var = x.iter().map(|a| (a - m).powi(2)).sum::<f64>() / (n - 1.0);
        Ok(Self {
            value: m,
            se: (var / n).sqrt(),
            reps: x.len(),
        })
    }
}

/// Monte Carlo estimate of `E[Z^←(1)^q]`, using `Z^←(1) = S^{-β}` in law.
pub fn ml_fractional_moment(beta: f64, q: f64, reps: usize, seed: u64) -> Result<McEstimate> {
    if !(q > 0.0) {
        return Err(domain("q", q, "(0, ∞)"));
    }
    let xs = par_reps(seed, reps, |rng| sample_stable(beta, 1.0, rng).powf(-beta * q));
    McEstimate::from_samples(&xs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::ml_moment_closed_form;

    #[test]
    fn first_moments_match_oracle() {
        for &(b, q) in &[(0.25, 1.0), (0.5, 1.0), (0.25, 1.0 / 3.0)] {
            let e = ml_fractional_moment(b, q, 1_000_000, 40).unwrap();
            let exact = ml_moment_closed_form(b, q);
            assert!((e.value - exact).abs() < 3.0 * e.se, "{b} {q}: {} vs {exact}", e.value);
        }
    }

    #[test]
    fn tiny_order_is_near_one() {
        let e = ml_fractional_moment(0.25, 1e-6, 10_000, 41).unwrap();
        assert!((e.value - 1.0).abs() < 1e-4);
        assert!(ml_fractional_moment(0.25, 0.0, 10, 1).is_err());
    }
}
