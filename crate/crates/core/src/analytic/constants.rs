//! Limit-law constants.

use statrs::function::beta::beta as beta_fn;
use statrs::function::gamma::gamma;

use super::params::ModelParams;
use crate::error::{domain, Result};

/// `C_{α,β} = ((1-β)/β)^{1/α - 1}`, the ratio of the two Poissonian level scales.
pub fn c_ab(p: &ModelParams) -> f64 {
    ((1.0 - p.beta) / p.beta).powf(1.0 / p.alpha - 1.0)
}

/// `K(α,β) = (1-β) Γ(1 - 1/C) B(1-β, 1+β/C) · E[Z^←(1)^{1/C}]`, with the moment supplied
/// by the caller (Monte Carlo or [`ml_moment_closed_form`]).
pub fn k_ab(p: &ModelParams, ml_moment_value: f64) -> Result<f64> {
    if !(ml_moment_value > 0.0) {
        return Err(domain("ml_moment_value", ml_moment_value, "(0, ∞)"));
    }
    let c = c_ab(p);
    let b = p.beta;
    Ok((1.0 - b) * gamma(1.0 - 1.0 / c) * beta_fn(1.0 - b, 1.0 + b / c) * ml_moment_value)
}

/// `E[Z^←(1)^q] = Γ(1+q) / Γ(1+βq)` for the Mittag-Leffler law of index β.
pub fn ml_moment_closed_form(beta: f64, q: f64) -> f64 {
    gamma(1.0 + q) / gamma(1.0 + beta * q)
}

/// Exponent `1 - β + β/C` of `t` in the marginal of the limit extremal process.
pub fn marginal_time_exponent(p: &ModelParams) -> f64 {
    1.0 - p.beta + p.beta / c_ab(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn c_values() {
        assert_relative_eq!(c_ab(&ModelParams::default()), 3.0, max_relative = 1e-15);
        assert_relative_eq!(c_ab(&ModelParams::new(0.5, 0.1).unwrap()), 9.0, max_relative = 1e-14);
        let near_one = c_ab(&ModelParams::new(1.0 - 1e-9, 0.25).unwrap());
        assert!(near_one > 1.0 && near_one < 1.0 + 1e-8);
    }

    #[test]
    fn k_with_unit_moment() {
        let p = ModelParams::default();
        let g23: f64 = 1.354_117_939_426_400_5;
        // B(3/4, 13/12) via Γ identities computed independently.
        let b = gamma(0.75) * gamma(13.0 / 12.0) / gamma(0.75 + 13.0 / 12.0);
        assert_relative_eq!(k_ab(&p, 1.0).unwrap(), 0.75 * g23 * b, max_relative = 1e-12);
        assert!(k_ab(&p, 0.0).is_err());
    }

    #[test]
    fn c_above_one_and_k_positive_on_grid() {
        for i in 1..=10 {
            for j in 1..=10 {
                let a = i as f64 / 11.0;
                let b = 0.5 * j as f64 / 11.0;
                let p = ModelParams::new(a, b).unwrap();
                assert!(c_ab(&p) > 1.0);
                let k = k_ab(&p, ml_moment_closed_form(b, 1.0 / c_ab(&p))).unwrap();
                assert!(k > 0.0 && k.is_finite(), "a={a} b={b} k={k}");
            }
        }
    }

    #[test]
    fn ml_moment_known_values() {
        assert_relative_eq!(ml_moment_closed_form(0.25, 1.0), 1.0 / gamma(1.25), max_relative = 1e-14);
        assert_relative_eq!(ml_moment_closed_form(0.25, 1.0), 1.1033, max_relative = 1e-4);
        assert_relative_eq!(ml_moment_closed_form(0.5, 1.0), 1.1284, max_relative = 1e-4);
        assert_relative_eq!(ml_moment_closed_form(0.3, 1e-12), 1.0, max_relative = 1e-10);
    }
}
