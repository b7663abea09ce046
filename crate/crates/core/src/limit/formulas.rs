//! Closed-form marginals, joint increments and the time-change counterexample.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::analytic::{c_ab, marginal_time_exponent, ModelParams};
use crate::error::{domain, Result};
use crate::numeric::composite_gauss_legendre;
use crate::rng::par_reps;
use crate::subordinator::{McEstimate, PassageSampler};

/// `P{𝕄(t) ≤ x} = exp{-K t^{1-β+β/C} e^{-x}}`.
pub fn marginal_cdf(t: f64, x: f64, p: &ModelParams, k_ab_value: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(domain("t", t, "(0, ∞)"));
    }
    Ok((-k_ab_value * t.powf(marginal_time_exponent(p)) * (-x).exp()).exp())
}

/// Quadrature of `∫_0^{t_k} (1-β) y^{-β} f(y) dy` after `u = y^{1-β}`, with panel
/// edges at the images of the partition points.
#[derive(Debug, Clone)]
struct YQuadrature {
    ys: Vec<f64>,
    ws: Vec<f64>,
}

impl YQuadrature {
    fn new(partition: &[f64], beta: f64, nodes: usize) -> Self {
        let top = partition.last().unwrap().powf(1.0 - beta);
        let order = 8;
        let mut ys = Vec::new();
        let mut ws = Vec::new();
        let mut prev = 0.0;
        for &t in &partition[1..] {
            let u = t.powf(1.0 - beta);
            let panels = (((u - prev) / top) * (nodes / order) as f64).ceil().max(1.0) as usize;
            let (x, w) = composite_gauss_legendre(prev, u, panels, order);
            ys.extend(x.iter().map(|u| u.powf(1.0 / (1.0 - beta))));
            ws.extend(w);
            prev = u;
        }
        Self { ys, ws }
    }

    /// Distinct levels `t_i - y` needed by the integrand, sorted increasingly.
    fn levels(&self, partition: &[f64]) -> Vec<f64> {
        let mut l: Vec<f64> = partition
            .iter()
            .flat_map(|&t| self.ys.iter().map(move |&y| t - y))
            .filter(|&s| s > 0.0)
            .collect();
        l.sort_by(f64::total_cmp);
        l.dedup();
        l
    }
}

/// Inverse subordinator evaluated at a fixed sorted level set.
struct InversePath<'a> {
    levels: &'a [f64],
    times: Vec<f64>,
}

impl InversePath<'_> {
    fn at(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        let i = self.levels.partition_point(|&l| l < s);
        self.times[i]
    }
}

fn validate_partition(partition: &[f64]) -> Result<()> {
    if partition.len() < 2 || partition[0] != 0.0 || partition.windows(2).any(|w| w[0] >= w[1]) {
        return Err(domain("partition", partition.len() as f64, "0 = t_0 < t_1 < … < t_k"));
    }
    Ok(())
}

/// Default quadrature node count in `y`.
pub const DEFAULT_NODES: usize = 2048;

/// `P{𝓜((t_{i-1}, t_i]) ≤ x_i, i = 1..k}` from the joint increment formula, with the
/// expectation over `Z^←` paths estimated by Monte Carlo and shared across nodes.
pub fn joint_increment_prob(
    partition: &[f64],
    x: &[f64],
    p: &ModelParams,
    mc_reps: usize,
    nodes: usize,
    seed: u64,
) -> Result<McEstimate> {
    validate_partition(partition)?;
    if x.len() + 1 != partition.len() {
        return Err(domain("levels", x.len() as f64, "one level per increment"));
    }
    let c = c_ab(p);
    let q = YQuadrature::new(partition, p.beta, nodes);
    let levels = q.levels(partition);
    let sampler = PassageSampler::new(p.beta)?;
    let weights: Vec<f64> = x.iter().map(|xi| (-c * xi).exp()).collect();
    let per_path = par_reps(seed, mc_reps, |rng| {
        let path = InversePath {
            levels: &levels,
            times: sampler.passage_times(0.0, &levels, rng),
        };
        q.ys.iter()
            .zip(&q.ws)
            .map(|(&y, &w)| {
                let s: f64 = (1..partition.len())
                    .map(|i| weights[i - 1] * (path.at(partition[i] - y) - path.at(partition[i - 1] - y)))
                    .sum();
                w * s.powf(1.0 / c)
            })
            .sum::<f64>()
    });
    let m = McEstimate::from_samples(&per_path)?;
    let g = gamma(1.0 - 1.0 / c);
    let prob = (-g * m.value).exp();
    Ok(McEstimate {
        value: prob,
        se: prob * g * m.se,
        reps: mc_reps,
    })
}

/// Both sides of the time-change identity and their gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleResult {
    /// Integral of the split moments, as a time-changed Gumbel process would require.
    pub split: McEstimate,
    /// Integral of the joint moment from the joint increment formula.
    pub joint: McEstimate,
    /// `split - joint`, estimated on shared paths.
    pub gap: McEstimate,
}

/// Compares `E∫ w(y) [(e^{-Cx_1} Z_1)^{1/C} + (e^{-Cx_2} Z_2)^{1/C} - (e^{-Cx_2} Z_1)^{1/C}] dy`
/// with `E∫ w(y) [e^{-Cx_1} Z_1 + e^{-Cx_2}(Z_2 - Z_1)]^{1/C} dy`, where
/// `Z_j = Z^←((t_j - y)_+)` and `w(y) = (1-β) y^{-β}`. Pathwise convexity makes the
/// gap nonnegative, and positive when `x_1 < x_2`.
pub fn counterexample_check(
    t1: f64,
    t2: f64,
    x1: f64,
    x2: f64,
    p: &ModelParams,
    mc_reps: usize,
    nodes: usize,
    seed: u64,
) -> Result<CounterexampleResult> {
    if !(t1 > 0.0 && t2 > t1) {
        return Err(domain("t2", t2, "0 < t1 < t2"));
    }
    if !(x1 <= x2) {
        return Err(domain("x1", x1, "x1 ≤ x2"));
    }
    let c = c_ab(p);
    let partition = [0.0, t1, t2];
    let q = YQuadrature::new(&partition, p.beta, nodes);
    let levels = q.levels(&partition);
    let sampler = PassageSampler::new(p.beta)?;
    let (e1, e2) = ((-c * x1).exp(), (-c * x2).exp());
    let rows = par_reps(seed, mc_reps, |rng| {
        let path = InversePath {
            levels: &levels,
            times: sampler.passage_times(0.0, &levels, rng),
        };
        let mut split = 0.0;
        let mut joint = 0.0;
        for (&y, &w) in q.ys.iter().zip(&q.ws) {
            let z1 = path.at(t1 - y);
            let z2 = path.at(t2 - y);
            split += w * ((e1 * z1).powf(1.0 / c) + (e2 * z2).powf(1.0 / c) - (e2 * z1).powf(1.0 / c));
            joint += w * (e1 * z1 + e2 * (z2 - z1)).powf(1.0 / c);
        }
        [split, joint]
    });
    let col = |j: usize| rows.iter().map(|r| r[j]).collect::<Vec<f64>>();
    let diff: Vec<f64> = rows.iter().map(|r| r[0] - r[1]).collect();
    Ok(CounterexampleResult {
        split: McEstimate::from_samples(&col(0))?,
        joint: McEstimate::from_samples(&col(1))?,
        gap: McEstimate::from_samples(&diff)?,
    })
}

/// `(t_2^C - t_1^C + t_3^C, (t_2 - t_1 + t_3)^C)`; the first is smaller for `C > 1`
/// whenever `t_1 > 0` and `t_2, t_3 > t_1`.
pub fn scalar_convexity(c: f64, t1: f64, t2: f64, t3: f64) -> (f64, f64) {
    (t2.powf(c) - t1.powf(c) + t3.powf(c), (t2 - t1 + t3).powf(c))
}
