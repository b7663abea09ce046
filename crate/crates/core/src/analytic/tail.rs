//! Tail of the local Lévy measure and the functions derived from it.
//!
//! With `q(x) = ∫_1^x du / h(u)` and `h(u) = u^{1-α} L_α(u)`, the tail is
//! `H̄(x) = exp(-q(x))` and the Lévy tail is taken to be exactly `ν̄ = γ H̄`
//! above the truncation point. `V`, `G` and `𝓛` are inverses of `q` in
//! disguise, so everything reduces to evaluating and inverting `q`.

use std::f64::consts::E;

use super::params::{AuxSlowlyVarying, ModelParams};
use crate::error::{domain, Result};
use crate::numeric::{integrate, invert_nondecreasing};

const REL_TOL: f64 = 1e-13;

/// `q(x) = ∫_1^x du / (u^{1-α} L_α(u))` for `x ≥ 1`.
pub fn log_tail_exponent(x: f64, p: &ModelParams) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(domain("x", x, "[1, ∞)"));
    }
    let a = p.alpha;
    Ok(match p.l_alpha {
        AuxSlowlyVarying::Constant(c) => (x.powf(a) - 1.0) / (a * c),
        AuxSlowlyVarying::LogPower(pw) => {
            if x <= E {
                (x.powf(a) - 1.0) / a
            } else {
                (E.powf(a) - 1.0) / a + log_power_tail(x.ln(), a, pw)
            }
        }
    })
}

// ∫_1^v e^{αw} w^{-p} dw, the part of q above e after substituting u = e^w.
fn log_power_tail(v: f64, a: f64, pw: f64) -> f64 {
    integrate(|w| (a * w).exp() * w.powf(-pw), 1.0, v, REL_TOL)
}

/// Inverse of `q`: the unique `s ≥ 1` with `q(s) = z`, for `z ≥ 0`.
pub fn log_tail_exponent_inverse(z: f64, p: &ModelParams) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(domain("z", z, "[0, ∞)"));
    }
    let a = p.alpha;
    match p.l_alpha {
        AuxSlowlyVarying::Constant(c) => Ok((1.0 + a * c * z).powf(1.0 / a)),
        AuxSlowlyVarying::LogPower(pw) => {
            let z_e = (E.powf(a) - 1.0) / a;
            if z <= z_e {
                return Ok((1.0 + a * z).powf(1.0 / a));
            }
            let v = invert_nondecreasing(|v| log_power_tail(v, a, pw), z - z_e, 1.0, 2.0, 1e-15)?;
            Ok(v.exp())
        }
    }
}

/// `H̄(x) = exp{-∫_1^x du / (u^{1-α} L_α(u))}`.
pub fn tail_h_bar(x: f64, p: &ModelParams) -> Result<f64> {
    Ok((-log_tail_exponent(x, p)?).exp())
}

/// `ν̄(x) = γ H̄(x)`; part of the model for `x ≥ x0`.
pub fn tail_nu_bar(x: f64, p: &ModelParams) -> Result<f64> {
    Ok(p.gamma * tail_h_bar(x, p)?)
}

/// `h(x) = x^{1-α} L_α(x)`.
pub fn h(x: f64, p: &ModelParams) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(domain("x", x, "[1, ∞)"));
    }
    Ok(x.powf(1.0 - p.alpha) * p.l_alpha.eval(x))
}

/// `G = (1 / (γ H̄))^←`, defined for `y ≥ 1/γ`.
pub fn g(y: f64, p: &ModelParams) -> Result<f64> {
    if !(y * p.gamma >= 1.0) {
        return Err(domain("y", y, "[1/γ, ∞)"));
    }
    log_tail_exponent_inverse((p.gamma * y).ln(), p)
}

/// `V(y) = (1/ν̄)^←(y) = inf{s ≥ 1 : 1/ν̄(s) ≥ y}`; equals 1 for `y ≤ 1/γ`.
pub fn v(y: f64, p: &ModelParams) -> Result<f64> {
    if !(y > 0.0) {
        return Err(domain("y", y, "(0, ∞)"));
    }
    if y * p.gamma <= 1.0 {
        return Ok(1.0);
    }
    g(y, p)
}

/// Truncated `V₁`: zero for `y ≤ 1/ν̄(x0)`, `V(y)` above.
pub fn v1(y: f64, p: &ModelParams) -> Result<f64> {
    if y <= truncation_level(p)? {
        return Ok(0.0);
    }
    v(y, p)
}

/// `1/ν̄(x0)`, the level below which `V₁` vanishes.
pub fn truncation_level(p: &ModelParams) -> Result<f64> {
    Ok(1.0 / tail_nu_bar(p.x0, p)?)
}

/// `𝓛(x) = x^{-1/α} q^←(x)`, slowly varying.
pub fn scr_l(x: f64, p: &ModelParams) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain("x", x, "(0, ∞)"));
    }
    Ok(x.powf(-1.0 / p.alpha) * log_tail_exponent_inverse(x, p)?)
}

/// Fast evaluator of `V₁(w / Γ)` for repeated use inside the process simulator.
#[derive(Debug, Clone, Copy)]
pub struct TruncatedV {
    params: ModelParams,
    log_level: f64,
}

impl TruncatedV {
    pub fn new(p: &ModelParams) -> Result<Self> {
        Ok(Self {
            params: *p,
            log_level: truncation_level(p)?.ln(),
        })
    }

    /// `V₁(e^{log_y})`.
    pub fn eval_log(&self, log_y: f64) -> f64 {
        if log_y <= self.log_level {
            return 0.0;
        }
        let z = log_y + self.params.gamma.ln();
        if z <= 0.0 {
            return 1.0;
        }
        // Inputs above the truncation level are always in the domain.
        log_tail_exponent_inverse(z, &self.params).unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn h_bar_closed_form() {
        let p = ModelParams::default();
        assert_eq!(tail_h_bar(1.0, &p).unwrap(), 1.0);
        assert_relative_eq!(tail_h_bar(4.0, &p).unwrap(), (-2f64).exp(), max_relative = 1e-15);
        assert!(tail_h_bar(0.5, &p).is_err());
    }

    #[test]
    fn h_bar_log_power_matches_simpson_oracle() {
        let p = ModelParams::default().with_l_alpha(AuxSlowlyVarying::LogPower(1.0));
        // Direct integrand in u, not the w = ln u substitution used by the implementation.
        let integrand = |u: f64| 1.0 / (u.powf(0.5) * p.l_alpha.eval(u));
        let oracle = simpson(integrand, 1.0, E, 20_000) + simpson(integrand, E, 10.0, 200_000);
        let got = tail_h_bar(10.0, &p).unwrap();
        assert!((got - (-oracle).exp()).abs() < 1e-8, "{got} vs {}", (-oracle).exp());
    }

    #[test]
    fn v_closed_form_and_truncation() {
        let p = ModelParams::default();
        assert_relative_eq!(v(E * E, &p).unwrap(), 4.0, max_relative = 1e-14);
        let below = truncation_level(&p).unwrap() * 0.5;
        assert_eq!(v1(below, &p).unwrap(), 0.0);
        assert!(v(0.0, &p).is_err());
    }

    #[test]
    fn v_round_trip_non_unit_gamma() {
        let p = ModelParams::new(0.7, 0.25).unwrap().with_gamma(2.0);
        let y = 1e3;
        let s = v(y, &p).unwrap();
        let back = 1.0 / tail_nu_bar(s, &p).unwrap();
        assert!((back - y).abs() / y <= 1e-8);
    }

    #[test]
    fn v_round_trip_log_power() {
        let p = ModelParams::new(0.4, 0.2)
            .unwrap()
            .with_l_alpha(AuxSlowlyVarying::LogPower(-0.5));
        for &x in &[1.5, 3.0, 50.0, 1e4] {
            let y = 1.0 / tail_nu_bar(x, &p).unwrap();
            assert_relative_eq!(v(y, &p).unwrap(), x, max_relative = 1e-8);
        }
        // 1/ν̄ overflows here, so round-trip through q directly.
        for &x in &[1e6, 1e12] {
            let z = log_tail_exponent(x, &p).unwrap();
            assert_relative_eq!(log_tail_exponent_inverse(z, &p).unwrap(), x, max_relative = 1e-8);
        }
    }

    #[test]
    fn h_values() {
        let p = ModelParams::default();
        assert_relative_eq!(h(4.0, &p).unwrap(), 2.0);
        assert_eq!(h(1.0, &p).unwrap(), 1.0);
        let q = ModelParams::new(0.3, 0.25)
            .unwrap()
            .with_l_alpha(AuxSlowlyVarying::LogPower(1.0));
        assert_relative_eq!(h(E, &q).unwrap(), 0.7f64.exp(), max_relative = 1e-14);
        assert_relative_eq!(h(E, &q).unwrap(), 2.01375, max_relative = 1e-5);
    }

    #[test]
    fn g_equals_v_for_unit_gamma() {
        let p = ModelParams::default();
        for &y in &[1.0, 2.0, 10.0, 1e5] {
            assert_eq!(g(y, &p).unwrap(), v(y, &p).unwrap());
        }
        assert!(g(0.5, &p).is_err());
    }

    #[test]
    fn scr_l_limit() {
        let p = ModelParams::default();
        let l = scr_l(1e6, &p).unwrap();
        assert!((l - 0.25).abs() / 0.25 < 0.01);
    }

    #[test]
    fn g_derivative_identity() {
        for p in [
            ModelParams::default(),
            ModelParams::new(0.3, 0.1)
                .unwrap()
                .with_l_alpha(AuxSlowlyVarying::LogPower(1.0)),
        ] {
            let x = 100.0;
            let dx = 1e-3;
            let d = (g(x + dx, &p).unwrap() - g(x - dx, &p).unwrap()) / (2.0 * dx);
            let lhs = x * d;
            let rhs = h(g(x, &p).unwrap(), &p).unwrap();
            assert!((lhs - rhs).abs() / rhs <= 1e-6, "{lhs} {rhs}");
        }
    }

    #[test]
    fn truncated_v_matches_v1() {
        let p = ModelParams::new(0.6, 0.3).unwrap().with_gamma(0.5);
        let tv = TruncatedV::new(&p).unwrap();
        for &y in &[0.1, 1.0, 2.5, 7.0, 1e4] {
            assert_relative_eq!(tv.eval_log(f64::ln(y)), v1(y, &p).unwrap(), max_relative = 1e-14);
        }
    }
}
