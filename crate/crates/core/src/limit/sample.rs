//! Truncated sampler of the limiting random sup-measure on `[0, 1]`.
//!
//! Points are `Λ_{k,i} = -log Γ_k + (log Z_k^{*←}(1) - log Γ_{k,i}) / C` with marks
//! `J_{k,i} = η_k^←(U_{k,i})` in `[0, 1]`, and `𝓜(B) = sup{Λ_{k,i} : J_{k,i} ∈ B}`.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::analytic::{c_ab, ModelParams};
use crate::error::{domain, Error, Result};
use crate::subordinator::{sample_regenerative, sample_shift_start, PassageSampler};

/// How the marks `J_{k,i}` are represented.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MarkMode {
    /// Explicit marks from simulated regenerative sets.
    Path { dt: f64, epsilon: f64 },
    /// Exact values of each `η_k` at the given levels in `(0, 1]`; a mark is known
    /// through its uniform `U_{k,i}`, since `J ≤ t` iff `U ≤ η(t)`.
    Profile { levels: Vec<f64> },
}

/// A window of `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Window {
    /// `[0, t]`.
    Upto(f64),
    /// `(a, b]`.
    Between(f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Marks {
    Points(Vec<Vec<f64>>),
    Profile {
        levels: Vec<f64>,
        eta: Vec<Vec<f64>>,
        u: Vec<Vec<f64>>,
    },
}

/// One realization of the truncated limit on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSample {
    pub c: f64,
    /// `Γ_1 < … < Γ_K`.
    pub gammas: Vec<f64>,
    /// `Z_k^{*←}(1)`.
    pub z_inv_1: Vec<f64>,
    /// `Γ_{k,1} < … < Γ_{k,I}` per `k`.
    pub inner_gammas: Vec<Vec<f64>>,
    /// `Λ_{k,i}`, decreasing in `i`.
    pub lambdas: Vec<Vec<f64>>,
    marks: Marks,
    /// Expected number of dropped points above `𝓜([0, 1])`, bounding the probability
    /// that truncation changes `𝓜([0, 1])`.
    pub truncation_bound: f64,
    mean_z_inv_1: f64,
}

fn arrivals<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<f64> {
    let mut g = 0.0;
    (0..count)
        .map(|_| {
            let e: f64 = Exp1.sample(rng);
            g += e;
            g
        })
        .collect()
}

/// Draws one truncated realization with `k_max` outer and `i_max` inner points.
pub fn sample_limit<R: Rng + ?Sized>(
    p: &ModelParams,
    k_max: usize,
    i_max: usize,
    mode: &MarkMode,
    rng: &mut R,
) -> Result<LimitSample> {
    if k_max == 0 || i_max == 0 {
        return Err(domain("truncation", 0.0, "K, I ≥ 1"));
    }
    let c = c_ab(p);
    let beta = p.beta;
    let passage = PassageSampler::new(beta)?;
    let levels = match mode {
        MarkMode::Profile { levels } => {
            let mut l: Vec<f64> = levels.iter().copied().filter(|&x| x > 0.0 && x <= 1.0).collect();
            l.push(1.0);
            l.sort_by(f64::total_cmp);
            l.dedup();
            l
        }
        MarkMode::Path { .. } => Vec::new(),
    };
    let gammas = arrivals(k_max, rng);
    let mut z_inv_1 = Vec::with_capacity(k_max);
    let mut inner_gammas = Vec::with_capacity(k_max);
    let mut lambdas = Vec::with_capacity(k_max);
    let mut points = Vec::new();
    let mut etas = Vec::new();
    let mut us = Vec::new();
    for k in 0..k_max {
        let l1 = match mode {
            MarkMode::Path { dt, epsilon } => {
                let s = sample_regenerative(beta, *epsilon, true, *dt, rng)?;
                points.push(s.sample_j_points(i_max, rng));
                s.inv_at_1
            }
            MarkMode::Profile { .. } => {
                let shift = sample_shift_start(beta, rng);
                let times = passage.passage_times(shift, &levels, rng);
                let total = *times.last().unwrap();
                etas.push(times.iter().map(|t| t / total).collect::<Vec<f64>>());
                us.push((0..i_max).map(|_| rng.random::<f64>()).collect::<Vec<f64>>());
                total
            }
        };
        let inner = arrivals(i_max, rng);
        let base = -gammas[k].ln();
        lambdas.push(inner.iter().map(|g| base + (l1.ln() - g.ln()) / c).collect());
        z_inv_1.push(l1);
        inner_gammas.push(inner);
    }
    let marks = match mode {
        MarkMode::Path { .. } => Marks::Points(points),
        MarkMode::Profile { .. } => Marks::Profile {
            levels,
            eta: etas,
            u: us,
        },
    };
    let mut s = LimitSample {
        c,
        gammas,
        z_inv_1,
        inner_gammas,
        lambdas,
        marks,
        truncation_bound: 0.0,
        mean_z_inv_1: (1.0 - beta) * gamma(1.0 - beta),
    };
    let top = s.eval(Window::Upto(1.0))?;
    s.truncation_bound = s.truncation_bound_at(top);
    Ok(s)
}

impl LimitSample {
    pub fn k_max(&self) -> usize {
        self.gammas.len()
    }

    pub fn i_max(&self) -> usize {
        self.inner_gammas.first().map_or(0, Vec::len)
    }

    fn level_index(levels: &[f64], t: f64) -> Result<usize> {
        levels
            .iter()
            .position(|&l| (l - t).abs() <= 1e-12)
            .ok_or(Error::InvalidParams {
                field: "window",
                reason: format!("level {t} is not in the sampled profile"),
            })
    }

    /// Whether the mark of point `(k, i)` lies in the window.
    fn in_window(&self, k: usize, i: usize, w: Window) -> Result<bool> {
        match &self.marks {
            Marks::Points(j) => {
                let x = j[k][i];
                Ok(match w {
                    Window::Upto(t) => x <= t,
                    Window::Between(a, b) => a < x && x <= b,
                })
            }
            Marks::Profile { levels, eta, u } => {
                let at = |t: f64| -> Result<f64> {
                    if t <= 0.0 {
                        Ok(0.0)
                    } else {
                        Ok(eta[k][Self::level_index(levels, t)?])
                    }
                };
                let x = u[k][i];
                Ok(match w {
                    Window::Upto(t) => x <= at(t)?,
                    Window::Between(a, b) => at(a)? < x && x <= at(b)?,
                })
            }
        }
    }

    /// `𝓜(B)`: the largest `Λ_{k,i}` with mark in `B`, or `-∞`.
    pub fn eval(&self, w: Window) -> Result<f64> {
        let mut best = f64::NEG_INFINITY;
        for k in 0..self.k_max() {
            // Λ decreases in i, so the first point in the window is the largest.
            for i in 0..self.lambdas[k].len() {
                if self.lambdas[k][i] <= best {
                    break;
                }
                if self.in_window(k, i, w)? {
                    best = self.lambdas[k][i];
                    break;
                }
            }
        }
        Ok(best)
    }

    /// Expected number of points dropped by the truncation with level above `m`:
    /// outer indices beyond `K` contribute `E Z^{*←}(1) e^{-Cm} Γ_K^{1-C} / (C-1)`,
    /// inner indices beyond `I` contribute `(Z_k^{*←}(1) Γ_k^{-C} e^{-Cm} - Γ_{k,I})_+`.
    pub fn truncation_bound_at(&self, m: f64) -> f64 {
        if m == f64::NEG_INFINITY {
            return f64::INFINITY;
        }
        let c = self.c;
        let scale = (-c * m).exp();
        let gk = *self.gammas.last().unwrap();
        let mut b = self.mean_z_inv_1 * scale * gk.powf(1.0 - c) / (c - 1.0);
        for k in 0..self.k_max() {
            let a = self.z_inv_1[k] * self.gammas[k].powf(-c) * scale;
            b += (a - self.inner_gammas[k].last().unwrap()).max(0.0);
        }
        b
    }

    /// Marks as explicit points, when sampled in path mode.
    pub fn j_points(&self) -> Option<&Vec<Vec<f64>>> {
        match &self.marks {
            Marks::Points(j) => Some(j),
            Marks::Profile { .. } => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn profile() -> MarkMode {
        MarkMode::Profile {
            levels: vec![0.25, 0.5, 0.75],
        }
    }

    #[test]
    fn lambda_identity_and_ordering() {
        let p = ModelParams::default();
        let mut rng = stream(80, 0);
        for mode in [profile(), MarkMode::Path { dt: 1e-3, epsilon: 1e-2 }] {
            let s = sample_limit(&p, 5, 7, &mode, &mut rng).unwrap();
            for k in 0..5 {
                for i in 0..7 {
                    let want = -s.gammas[k].ln() + (-s.inner_gammas[k][i].ln() + s.z_inv_1[k].ln()) / 3.0;
                    assert!((s.lambdas[k][i] - want).abs() < 1e-12);
                    if i > 0 {
                        assert!(s.lambdas[k][i] < s.lambdas[k][i - 1]);
                    }
                }
            }
            if let Some(j) = s.j_points() {
                assert!(j.iter().flatten().all(|x| (0.0..=1.0).contains(x)));
            }
        }
        let s = sample_limit(&p, 1, 1, &profile(), &mut rng).unwrap();
        let want = -s.gammas[0].ln() + (-s.inner_gammas[0][0].ln() + s.z_inv_1[0].ln()) / 3.0;
        assert_eq!(s.eval(Window::Upto(1.0)).unwrap(), want);
        assert!(sample_limit(&p, 0, 1, &profile(), &mut rng).is_err());
    }

    #[test]
    fn monotone_in_window() {
        let p = ModelParams::default();
        let mut rng = stream(81, 0);
        for _ in 0..500 {
            let s = sample_limit(&p, 20, 20, &profile(), &mut rng).unwrap();
            let v: Vec<f64> = [0.25, 0.5, 0.75, 1.0].iter().map(|&t| s.eval(Window::Upto(t)).unwrap()).collect();
            assert!(v.windows(2).all(|w| w[0] <= w[1]));
            let split = s.eval(Window::Upto(0.5)).unwrap().max(s.eval(Window::Between(0.5, 1.0)).unwrap());
            assert_eq!(split, v[3]);
            assert!(s.eval(Window::Upto(0.3)).is_err());
        }
    }

    #[test]
    fn truncation_bound_shrinks_with_budget() {
        let p = ModelParams::default();
        let mut rng = stream(82, 0);
        let mut small = 0.0;
        let mut large = 0.0;
        for _ in 0..2000 {
            small += sample_limit(&p, 10, 10, &profile(), &mut rng).unwrap().truncation_bound;
            large += sample_limit(&p, 20, 20, &profile(), &mut rng).unwrap().truncation_bound;
        }
        assert!(large < small, "{large} vs {small}");
    }
}
