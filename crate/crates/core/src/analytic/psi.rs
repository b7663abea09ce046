//! The functions ψ, ψ̃ and the level roots r_m governing cluster sizes.

use super::params::ModelParams;
use crate::error::{domain, Result};

fn mass(p: &ModelParams) -> f64 {
    (1.0 - p.beta).powf(1.0 / p.alpha) + p.beta.powf(1.0 / p.alpha)
}

fn check(r: f64, p: &ModelParams) -> Result<()> {
    if !(r >= 0.0 && r < 1.0 - p.beta) {
        return Err(domain("r", r, "[0, 1-β)"));
    }
    Ok(())
}

/// `ψ(r) = ((1-β)^{1/α} + β^{1/α}) / (1-β-r)^{1/α} - 1`.
pub fn psi(r: f64, p: &ModelParams) -> Result<f64> {
    check(r, p)?;
    Ok(mass(p) / (1.0 - p.beta - r).powf(1.0 / p.alpha) - 1.0)
}

/// `ψ̃(r) = (1-β-r) (⌊ψ(r)⌋ + (ψ(r) - ⌊ψ(r)⌋)^α)`.
pub fn psi_tilde(r: f64, p: &ModelParams) -> Result<f64> {
    let s = psi(r, p)?;
    let fl = s.floor();
    Ok((1.0 - p.beta - r) * (fl + (s - fl).powf(p.alpha)))
}

/// The root `r_m` of `ψ(r) = m`.
pub fn r_m(m: u32, p: &ModelParams) -> Result<f64> {
    if m == 0 {
        return Err(domain("m", 0.0, "{1, 2, ...}"));
    }
    Ok(1.0 - p.beta - (mass(p) / (m as f64 + 1.0)).powf(p.alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid() -> Vec<ModelParams> {
        let mut out = Vec::new();
        for i in 1..=10 {
            for j in 1..=10 {
                out.push(ModelParams::new(i as f64 / 11.0, 0.5 * j as f64 / 11.0).unwrap());
            }
        }
        out
    }

    #[test]
    fn psi_at_zero() {
        assert_relative_eq!(psi(0.0, &ModelParams::default()).unwrap(), 1.0 / 9.0, max_relative = 1e-14);
        assert!(psi(0.75, &ModelParams::default()).is_err());
        assert!(psi(-0.1, &ModelParams::default()).is_err());
    }

    #[test]
    fn roots_round_trip() {
        for p in grid() {
            for m in 1..=20 {
                let r = r_m(m, &p).unwrap();
                assert!((psi(r, &p).unwrap() - m as f64).abs() <= 1e-10 * m as f64);
            }
        }
    }

    #[test]
    fn lemma_properties_on_grid() {
        for p in grid() {
            let top = 1.0 - p.beta;
            let mut prev = f64::NEG_INFINITY;
            for k in 0..2000 {
                let r = top * k as f64 / 2000.0;
                let s = psi(r, &p).unwrap();
                assert!(s > prev);
                prev = s;
                if r > 0.0 {
                    assert!(psi_tilde(r, &p).unwrap() > r + p.beta);
                }
            }
            for m in 1..=20 {
                assert!(r_m(m, &p).unwrap() < m as f64 / (m as f64 + 1.0) - p.beta);
            }
        }
    }

    #[test]
    fn psi_tilde_blows_up() {
        let p = ModelParams::default();
        let mut prev = 0.0;
        for e in 2..8 {
            let v = psi_tilde(0.75 - 10f64.powi(-e), &p).unwrap();
            assert!(v > prev);
            prev = v;
        }
        assert!(prev > 1e3);
    }
}
