use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slowly varying factor `L_α` of the auxiliary function `h(x) = x^{1-α} L_α(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum AuxSlowlyVarying {
    /// `L_α ≡ c`.
    Constant(f64),
    /// `L_α(u) = (max(1, ln u))^p`, equal to 1 on `[1, e]`.
    LogPower(f64),
}

impl AuxSlowlyVarying {
    pub fn eval(&self, u: f64) -> f64 {
        match *self {
            Self::Constant(c) => c,
            Self::LogPower(p) => {
                if u <= std::f64::consts::E {
                    1.0
                } else {
                    u.ln().powf(p)
                }
            }
        }
    }
}

/// Slowly varying factor `L` of the return-time tail `F̄(n) ≈ n^{-β} L(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum StepSlowlyVarying {
    Constant(f64),
}

impl StepSlowlyVarying {
    pub fn eval(&self, _n: f64) -> f64 {
        match *self {
            Self::Constant(c) => c,
        }
    }
}

/// Parameters shared by every formula and sampler.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Semi-exponential tail index, in (0, 1).
    pub alpha: f64,
    /// Memory index of the return times, in (0, 1/2).
    pub beta: f64,
    /// Tail multiplier of the local Lévy measure.
    pub gamma: f64,
    /// Truncation point separating large from small jumps.
    pub x0: f64,
    pub l_alpha: AuxSlowlyVarying,
    pub l_step: StepSlowlyVarying,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            beta: 0.25,
            gamma: 1.0,
            x0: 1.0,
            l_alpha: AuxSlowlyVarying::Constant(1.0),
            l_step: StepSlowlyVarying::Constant(1.0),
        }
    }
}

impl ModelParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let p = Self {
            alpha,
            beta,
            ..Self::default()
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_l_alpha(mut self, l: AuxSlowlyVarying) -> Self {
        self.l_alpha = l;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field, reason: &str| {
            Err(Error::InvalidParams {
                field,
                reason: reason.to_string(),
            })
        };
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad("alpha", "must lie in (0, 1)");
        }
        if !(self.beta > 0.0 && self.beta < 0.5) {
            return bad("beta", "must lie in (0, 1/2)");
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return bad("gamma", "must be positive");
        }
        if !(self.x0 >= 1.0 && self.x0.is_finite()) {
            return bad("x0", "must be at least 1");
        }
        match self.l_alpha {
            AuxSlowlyVarying::Constant(c) if !(c > 0.0 && c.is_finite()) => {
                return bad("l_alpha", "constant must be positive")
            }
            AuxSlowlyVarying::LogPower(p) if !(p.abs() <= 1.0) => {
                return bad("l_alpha", "log power must satisfy |p| <= 1")
            }
            _ => {}
        }
        let StepSlowlyVarying::Constant(c) = self.l_step;
        if !(c > 0.0 && c.is_finite()) {
            return bad("l_step", "constant must be positive");
        }
        Ok(())
    }

    /// True when `L_α` is constant, so that tails and inverses have closed forms.
    pub fn closed_form(&self) -> bool {
        matches!(self.l_alpha, AuxSlowlyVarying::Constant(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        ModelParams::default().validate().unwrap();
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(ModelParams::new(1.0, 0.25).is_err());
        assert!(ModelParams::new(0.5, 0.5).is_err());
        assert!(ModelParams::new(0.5, 0.0).is_err());
        let mut p = ModelParams::default();
        p.x0 = 0.5;
        assert!(p.validate().is_err());
        let p = ModelParams::default().with_l_alpha(AuxSlowlyVarying::LogPower(1.5));
        assert!(p.validate().is_err());
    }

    #[test]
    fn log_power_is_one_below_e() {
        let l = AuxSlowlyVarying::LogPower(1.0);
        assert_eq!(l.eval(1.0), 1.0);
        assert_eq!(l.eval(std::f64::consts::E), 1.0);
        assert!((l.eval(100.0) - 100f64.ln()).abs() < 1e-15);
    }
}
