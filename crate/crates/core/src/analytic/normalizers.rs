//! Normalizing sequences of the extremal limit theorems.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use super::params::ModelParams;
use super::tail::{h, v};
use crate::error::{domain, Result};
use crate::zeroset::StepLaw;

/// Normalizing constants at horizon `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizerTable {
    pub n: u64,
    pub w_n: f64,
    pub theta_n: f64,
    pub a_n: f64,
    pub b_n: f64,
    pub c_inf: f64,
}

/// `ϑ_n = n^β / (Γ(1-β) L(n))`, the scale of `#I_{0;n}` in units of `Z^{*←}(1)`.
///
/// Each point of `{0, …, n}` lies in `I_{0;n}` with probability `1/w_n`, so
/// `E #I_{0;n} ≈ (1-β) n^β / L(n)`, while `E Z^{*←}(1) = (1-β) Γ(1-β)`.
pub fn theta_n(n: u64, law: &StepLaw) -> f64 {
    (n as f64).powf(law.beta()) / (gamma(1.0 - law.beta()) * law.l_const())
}

/// The alternative scale `(2-β) n^β / (β L(n))`; kept to quantify how far it is from
/// the mean cardinality of the zero sets.
pub fn theta_n_alternative(n: u64, law: &StepLaw) -> f64 {
    let b = law.beta();
    (2.0 - b) * (n as f64).powf(b) / (b * law.l_const())
}

/// `a_n = h(V(w_n))`, `b_n = V(w_n) + V(c_∞ ϑ_n)`.
pub fn normalizers(n: u64, c_inf: f64, law: &StepLaw, p: &ModelParams) -> Result<NormalizerTable> {
    if n == 0 {
        return Err(domain("n", 0.0, "{1, 2, ...}"));
    }
    if !(c_inf > 0.0 && c_inf < 1.0) {
        return Err(domain("c_inf", c_inf, "(0, 1)"));
    }
    let w_n = law.wandering_rate(n);
    let theta = theta_n(n, law);
    let vw = v(w_n, p)?;
    Ok(NormalizerTable {
        n,
        w_n,
        theta_n: theta,
        a_n: h(vw, p)?,
        b_n: vw + v(c_inf * theta, p)?,
        c_inf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn law() -> StepLaw {
        StepLaw::from_params(&ModelParams::default()).unwrap()
    }

    #[test]
    fn table_fields() {
        let p = ModelParams::default();
        let t = normalizers(1, 0.3, &law(), &p).unwrap();
        assert_relative_eq!(t.w_n, 1.0 + 2f64.powf(-0.25));
        assert!(t.a_n > 0.0);
        assert!(normalizers(10, 1.2, &law(), &p).is_err());
        assert!(normalizers(0, 0.3, &law(), &p).is_err());
    }

    #[test]
    fn theta_matches_mean_cardinality() {
        let l = law();
        let n = 1_000_000u64;
        let mean_card = (n + 1) as f64 / l.wandering_rate(n);
        let expected = theta_n(n, &l) * 0.75 * gamma(0.75);
        assert!((mean_card / expected - 1.0).abs() < 0.02);
        assert!(theta_n_alternative(n, &l) / theta_n(n, &l) > 8.0);
    }

    #[test]
    fn a_over_b_decreases() {
        let p = ModelParams::default();
        let l = law();
        let mut prev = f64::INFINITY;
        for e in 3..=7 {
            let t = normalizers(10u64.pow(e), 0.3, &l, &p).unwrap();
            let r = t.a_n / t.b_n;
            assert!(r < prev);
            prev = r;
        }
    }
}
