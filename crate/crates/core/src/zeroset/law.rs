//! Return-time law of the renewal walk with tail `F̄(n) = min(1, c (n+1)^{-β})`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;

use crate::analytic::{ModelParams, StepSlowlyVarying};
use crate::error::{domain, Result};

const BLOCK: u64 = 4096;

/// Step law of the renewal walk. Clones share the wandering-rate and alias caches.
#[derive(Debug, Clone)]
pub struct StepLaw {
    beta: f64,
    c: f64,
    // Sums of F̄ over [BLOCK·i, BLOCK·(i+1)), each computed independently.
    blocks: Arc<RwLock<Vec<f64>>>,
    alias: Arc<Mutex<HashMap<u64, Arc<WeightedAliasIndex<f64>>>>>,
}

impl StepLaw {
    pub fn new(beta: f64, l: StepSlowlyVarying) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(domain("beta", beta, "(0, 1)"));
        }
        let StepSlowlyVarying::Constant(c) = l;
        if !(c > 0.0 && c.is_finite()) {
            return Err(domain("L", c, "(0, ∞)"));
        }
        Ok(Self {
            beta,
            c,
            blocks: Arc::default(),
            alias: Arc::default(),
        })
    }

    pub fn from_params(p: &ModelParams) -> Result<Self> {
        Self::new(p.beta, p.l_step)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The slowly varying constant `L`.
    pub fn l_const(&self) -> f64 {
        self.c
    }

    /// `F̄(n) = P{φ > n}`.
    pub fn tail(&self, n: u64) -> f64 {
        if n == 0 {
            return 1.0;
        }
        (self.c * ((n as f64) + 1.0).powf(-self.beta)).min(1.0)
    }

    /// `P{φ = n}`; zero for `n = 0`.
    pub fn pmf(&self, n: u64) -> f64 {
        if n == 0 {
            return 0.0;
        }
        self.tail(n - 1) - self.tail(n)
    }

    /// Draws a step `φ ≥ 1` by inversion of the tail.
    pub fn sample_step<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let u: f64 = 1.0 - rng.random::<f64>();
        // φ = min{m ≥ 1 : F̄(m) ≤ U}; `as` saturates at u64::MAX for tiny U.
        let x = (self.c / u).powf(1.0 / self.beta);
        (x.ceil() - 1.0).max(1.0) as u64
    }

    /// Step drawn without the `u64` ceiling, for walks that run far beyond any horizon.
    pub fn sample_step_wide<R: Rng + ?Sized>(&self, rng: &mut R) -> u128 {
        let u: f64 = 1.0 - rng.random::<f64>();
        let x = (self.c / u).powf(1.0 / self.beta);
        (x.ceil() - 1.0).max(1.0) as u128
    }

    fn block_sum(&self, i: u64) -> f64 {
        let mut s = 0.0;
        let mut comp = 0.0;
        for j in (i * BLOCK..(i + 1) * BLOCK).rev() {
            let y = self.tail(j) - comp;
            let t = s + y;
            comp = (t - s) - y;
            s = t;
        }
        s
    }

    /// Wandering rate `w_n = Σ_{j=0}^{n} F̄(j)`, exact up to rounding and independent of
    /// the order of earlier calls.
    pub fn wandering_rate(&self, n: u64) -> f64 {
        let full = (n + 1) / BLOCK;
        {
            let have = self.blocks.read().unwrap().len() as u64;
            if have < full {
                let extra: Vec<f64> = (have..full).map(|i| self.block_sum(i)).collect();
                let mut w = self.blocks.write().unwrap();
                if (w.len() as u64) == have {
                    w.extend(extra);
                }
            }
        }
        let blocks = self.blocks.read().unwrap();
        let mut s: f64 = blocks[..full as usize].iter().sum();
        for j in full * BLOCK..=n {
            s += self.tail(j);
        }
        s
    }

    fn alias_table(&self, n: u64) -> Arc<WeightedAliasIndex<f64>> {
        let mut cache = self.alias.lock().unwrap();
        cache
            .entry(n)
            .or_insert_with(|| {
                let w: Vec<f64> = (0..=n).map(|j| self.tail(j)).collect();
                Arc::new(WeightedAliasIndex::new(w).expect("tail weights are positive"))
            })
            .clone()
    }

    /// Initial position on `{0, …, n}` with `P(j) ∝ F̄(j)`.
    pub fn sample_initial_position<R: Rng + ?Sized>(&self, n: u64, rng: &mut R) -> u64 {
        if n == 0 {
            return 0;
        }
        self.alias_table(n).sample(rng) as u64
    }

    /// `P{m ∈ range}` for a walk started at 0, i.e. the renewal sequence `u(m)`,
    /// computed exactly by the renewal recursion.
    pub fn renewal_sequence(&self, m: usize) -> Vec<f64> {
        let f: Vec<f64> = (0..=m as u64).map(|k| self.pmf(k)).collect();
        let mut u = vec![0.0; m + 1];
        u[0] = 1.0;
        for k in 1..=m {
            u[k] = (1..=k).map(|j| f[j] * u[k - j]).sum();
        }
        u
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use approx::assert_relative_eq;

    fn law() -> StepLaw {
        StepLaw::new(0.25, StepSlowlyVarying::Constant(1.0)).unwrap()
    }

    #[test]
    fn tail_and_pmf() {
        let l = law();
        assert_eq!(l.tail(0), 1.0);
        assert_relative_eq!(l.tail(1), 2f64.powf(-0.25));
        assert_relative_eq!(l.pmf(1), 1.0 - 2f64.powf(-0.25));
        for n in 1..1000 {
            assert!(l.tail(n) <= l.tail(n - 1));
        }
    }

    #[test]
    fn wandering_rate_exact_and_order_independent() {
        let l = law();
        assert_relative_eq!(l.wandering_rate(1), 1.0 + 2f64.powf(-0.25), max_relative = 1e-15);
        let naive: f64 = (0..=10_000u64).map(|j| l.tail(j)).sum();
        let big = l.wandering_rate(20_000);
        assert_relative_eq!(l.wandering_rate(10_000), naive, max_relative = 1e-12);
        let fresh = law();
        assert_eq!(fresh.wandering_rate(20_000), big);
    }

    #[test]
    fn wandering_rate_asymptotics() {
        let n = 1_000_000u64;
        let ratio = law().wandering_rate(n) / ((n as f64).powf(0.75) / 0.75);
        assert!((0.98..=1.02).contains(&ratio), "{ratio}");
    }

    #[test]
    fn doney_condition() {
        let l = law();
        let mut worst: f64 = 0.0;
        let mut n = 1u64;
        while n <= 1_000_000 {
            worst = worst.max(n as f64 * l.pmf(n) / l.tail(n));
            n += if n < 10_000 { 1 } else { 97 };
        }
        assert!(worst <= 0.35, "{worst}");
    }

    #[test]
    fn step_law_matches_pmf() {
        let l = law();
        let mut rng = stream(1, 0);
        let reps = 200_000;
        let mut counts = [0usize; 4];
        for _ in 0..reps {
            let s = l.sample_step(&mut rng);
            assert!(s >= 1);
            if s <= 3 {
                counts[s as usize] += 1;
            }
        }
        for k in 1..=3u64 {
            let p = l.pmf(k);
            let se = (p * (1.0 - p) / reps as f64).sqrt();
            assert!((counts[k as usize] as f64 / reps as f64 - p).abs() < 4.0 * se);
        }
    }

    #[test]
    fn initial_position_small_n() {
        let l = law();
        let w2 = l.wandering_rate(2);
        let mut rng = stream(2, 0);
        assert_eq!(l.sample_initial_position(0, &mut rng), 0);
        let reps = 300_000;
        let mut c = [0usize; 3];
        for _ in 0..reps {
            c[l.sample_initial_position(2, &mut rng) as usize] += 1;
        }
        for j in 0..3u64 {
            let p = l.tail(j) / w2;
            let se = (p * (1.0 - p) / reps as f64).sqrt();
            assert!((c[j as usize] as f64 / reps as f64 - p).abs() < 4.0 * se);
        }
    }

    #[test]
    fn renewal_sequence_is_a_probability() {
        let u = law().renewal_sequence(50);
        assert_eq!(u[0], 1.0);
        assert_relative_eq!(u[1], 1.0 - 2f64.powf(-0.25), max_relative = 1e-14);
        assert!(u.iter().all(|&x| (0.0..=1.0).contains(&x)));
    }
}
