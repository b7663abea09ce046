//! Positive stable variates and exact first-passage sampling for the standard
//! β-stable subordinator `E e^{-θ Z(t)} = e^{-t θ^β}`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Beta, Distribution, Exp1, Gamma};

use crate::error::{domain, Result};

fn uniform_angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    PI * (1.0 - rng.random::<f64>())
}

/// `(sin(βu)^β sin((1-β)u)^{1-β} / sin u)^{1/(1-β)}`, Zolotarev's function.
fn zolotarev_a(beta: f64, u: f64) -> f64 {
    ((beta * u).sin().powf(beta) * ((1.0 - beta) * u).sin().powf(1.0 - beta) / u.sin())
        .powf(1.0 / (1.0 - beta))
}

/// One positive strictly stable variate with `E e^{-θS} = exp(-scale θ^β)`, by the
/// two-uniform (Kanter) representation `S = (A(U)/W)^{(1-β)/β}`.
pub fn sample_stable<R: Rng + ?Sized>(beta: f64, scale: f64, rng: &mut R) -> f64 {
    let u = uniform_angle(rng);
    let w: f64 = Exp1.sample(rng);
    let s = (beta * u).sin() / u.sin().powf(1.0 / beta)
        * (((1.0 - beta) * u).sin() / w).powf((1.0 - beta) / beta);
    scale.powf(1.0 / beta) * s
}

/// Exact sampler of first-passage data of the standard β-stable subordinator.
///
/// For a crossing of level `x` from 0, the undershoot is `x·Beta(β, 1-β)`, the
/// overshooting jump is `(x - y) V^{-1/β}` and, given the undershoot `y`, the
/// passage time is `y^β T` with `T = S^{-β}` under the `s^{-β}`-biased stable law.
/// Biasing Kanter's representation by `S^{-β}` turns the exponential into a
/// Gamma(2-β) variable and tilts the angle by `A(u)^{-(1-β)}`.
#[derive(Debug, Clone)]
pub struct PassageSampler {
    beta: f64,
    undershoot: Beta<f64>,
    gamma: Gamma<f64>,
    bound: f64,
}

/// One realized crossing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    /// Local time of the crossing.
    pub time: f64,
    /// Position just before the crossing jump.
    pub undershoot: f64,
    /// Position just after.
    pub overshoot: f64,
}

impl PassageSampler {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(domain("beta", beta, "(0, 1)"));
        }
        Ok(Self {
            beta,
            undershoot: Beta::new(beta, 1.0 - beta).expect("valid beta"),
            gamma: Gamma::new(2.0 - beta, 1.0).expect("valid shape"),
            bound: beta.powf(-beta) * (1.0 - beta).powf(beta - 1.0),
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    fn tilted_angle<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let u = uniform_angle(rng);
            let f = zolotarev_a(self.beta, u).powf(self.beta - 1.0);
            if rng.random::<f64>() * self.bound <= f {
                return u;
            }
        }
    }

    /// The size-biased factor `T` so that the passage time is `y^β T`.
    pub fn sample_time_factor<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u = self.tilted_angle(rng);
        let g = self.gamma.sample(rng);
        (g / zolotarev_a(self.beta, u)).powf(1.0 - self.beta)
    }

    /// Crossing of `level > 0` for a subordinator started at 0 at time 0.
    pub fn cross<R: Rng + ?Sized>(&self, level: f64, rng: &mut R) -> Crossing {
        let y = level * self.undershoot.sample(rng);
        let v = 1.0 - rng.random::<f64>();
        let jump = (level - y) * v.powf(-1.0 / self.beta);
        let time = if y > 0.0 {
            y.powf(self.beta) * self.sample_time_factor(rng)
        } else {
            0.0
        };
        Crossing {
            time,
            undershoot: y,
            overshoot: y + jump,
        }
    }

    /// `Z^←(x) = inf{t : Z(t) > x}` jointly at increasing `levels`, for a subordinator
    /// started at `start`. Levels below the start have passage time 0.
    pub fn passage_times<R: Rng + ?Sized>(&self, start: f64, levels: &[f64], rng: &mut R) -> Vec<f64> {
        let mut out = Vec::with_capacity(levels.len());
        let mut pos = start;
        let mut time = 0.0;
        for &x in levels {
            debug_assert!(out.is_empty() || x >= levels[out.len() - 1]);
            if pos <= x {
                let c = self.cross(x - pos, rng);
                time += c.time;
                pos += c.overshoot;
            }
            out.push(time);
        }
        out
    }
}

/// `Z^*(0) = U^{1/(1-β)}`, so that `P{Z^*(0) ≤ x} = x^{1-β}`.
pub fn shift_from_uniform(beta: f64, u: f64) -> f64 {
    u.powf(1.0 / (1.0 - beta))
}

/// Draws the starting point of the shifted subordinator.
pub fn sample_shift_start<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> f64 {
    shift_from_uniform(beta, rng.random::<f64>())
}
