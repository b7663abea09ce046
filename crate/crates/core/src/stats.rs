//! Empirical distributions, goodness-of-fit and trend tests.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Provenance attached to a sample.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SampleMeta {
    pub experiment: String,
    pub seed: u64,
    pub params: String,
}

/// A sorted sample with ECDF queries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalDistribution {
    sorted: Vec<f64>,
    pub meta: SampleMeta,
}

impl EmpiricalDistribution {
    /// Sorts `sample`; fails when it is empty or contains NaN.
    pub fn new(mut sample: Vec<f64>) -> Result<Self> {
        if sample.is_empty() || sample.iter().any(|x| x.is_nan()) {
            return Err(Error::EmptySample);
        }
        sample.sort_by(f64::total_cmp);
        Ok(Self {
            sorted: sample,
            meta: SampleMeta::default(),
        })
    }

    pub fn with_meta(mut self, meta: SampleMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// `F_n(x) = #{x_i ≤ x} / n`.
    pub fn ecdf(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&s| s <= x) as f64 / self.len() as f64
    }

    /// Lower empirical quantile.
    pub fn quantile(&self, p: f64) -> f64 {
        let n = self.len();
        let k = ((p.clamp(0.0, 1.0) * n as f64).ceil() as usize).clamp(1, n);
        self.sorted[k - 1]
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5)
    }

    /// `sup_x |F_n(x) - F(x)|` against a continuous CDF.
    pub fn ks_distance<F: Fn(f64) -> f64>(&self, cdf: F) -> f64 {
        let n = self.len() as f64;
        let mut d: f64 = 0.0;
        let mut i = 0;
        while i < self.sorted.len() {
            let x = self.sorted[i];
            let mut j = i;
            while j < self.sorted.len() && self.sorted[j] == x {
                j += 1;
            }
            let f = cdf(x);
            d = d.max((j as f64 / n - f).abs()).max((f - i as f64 / n).abs());
            i = j;
        }
        d
    }

    /// KS distance against the CDF `F` of an integer-valued law. Both step functions
    /// are constant between integers, so the supremum is attained at a sample value
    /// `x`, comparing either `F_n(x)` with `F(x)` or `F_n(x-)` with `F(x-1)`.
    pub fn ks_distance_discrete<F: Fn(f64) -> f64>(&self, cdf: F) -> f64 {
        let n = self.len() as f64;
        let mut d: f64 = 0.0;
        let mut i = 0;
        while i < self.sorted.len() {
            let x = self.sorted[i];
            let mut j = i;
            while j < self.sorted.len() && self.sorted[j] == x {
                j += 1;
            }
            d = d.max((j as f64 / n - cdf(x)).abs()).max((i as f64 / n - cdf(x - 1.0)).abs());
            i = j;
        }
        d
    }

    /// Two-sample statistic `sup_x |F_n(x) - G_m(x)|`.
    pub fn ks_two_sample(&self, other: &Self) -> f64 {
        let (a, b) = (&self.sorted, &other.sorted);
        let (na, nb) = (a.len() as f64, b.len() as f64);
        let (mut i, mut j) = (0, 0);
        let mut d: f64 = 0.0;
        while i < a.len() && j < b.len() {
            let x = a[i].min(b[j]);
            while i < a.len() && a[i] <= x {
                i += 1;
            }
            while j < b.len() && b[j] <= x {
                j += 1;
            }
            d = d.max((i as f64 / na - j as f64 / nb).abs());
        }
        d
    }

    /// Merges two samples; associative and commutative.
    pub fn merge(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (a, b) = (&self.sorted, &other.sorted);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i] <= b[j]) {
                out.push(a[i]);
                i += 1;
            } else {
                out.push(b[j]);
                j += 1;
            }
        }
        Self {
            sorted: out,
            meta: self.meta.clone(),
        }
    }
}

/// Asymptotic Kolmogorov tail `P{√n D_n > λ}`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 0.3 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// p-value of a one-sample KS distance `d` at sample size `n`.
pub fn ks_pvalue(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d)
}

/// p-value of a two-sample KS distance.
pub fn ks_two_sample_pvalue(d: f64, n: usize, m: usize) -> f64 {
    let ne = (n * m) as f64 / (n + m) as f64;
    ks_pvalue(d, ne.round().max(1.0) as usize)
}

/// Result of a Kendall rank-correlation trend test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendTest {
    pub tau: f64,
    /// One-sided p-value for a decreasing trend.
    pub p_decreasing: f64,
    pub n: usize,
}

impl TrendTest {
    /// Decreasing-trend verdict at level 0.05.
    pub fn decreasing(&self) -> bool {
        self.tau < 0.0 && self.p_decreasing < 0.05
    }
}

fn sign(x: f64) -> i64 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

fn tie_groups(v: &[f64]) -> Vec<usize> {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    let mut i = 0;
    while i < s.len() {
        let mut j = i;
        while j < s.len() && s[j] == s[i] {
            j += 1;
        }
        if j - i > 1 {
            out.push(j - i);
        }
        i = j;
    }
    out
}

fn kendall_s(x: &[f64], y: &[f64]) -> i64 {
    let mut s = 0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            s += sign(x[j] - x[i]) * sign(y[j] - y[i]);
        }
    }
    s
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Kendall tau-b of `y` against `x`, with a one-sided test for negative association.
/// Untied samples of size at most 7 use the exact permutation law of `S`;
/// otherwise the tie-corrected normal approximation applies.
pub fn kendall_trend_pairs(x: &[f64], y: &[f64]) -> Result<TrendTest> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return Err(Error::EmptySample);
    }
    let s = kendall_s(x, y);
    let tx = tie_groups(x);
    let ty = tie_groups(y);
    let n0 = (n * (n - 1) / 2) as f64;
    let n1: f64 = tx.iter().map(|&t| (t * (t - 1) / 2) as f64).sum();
    let n2: f64 = ty.iter().map(|&t| (t * (t - 1) / 2) as f64).sum();
    let denom = ((n0 - n1) * (n0 - n2)).sqrt();
    let tau = if denom > 0.0 { s as f64 / denom } else { 0.0 };
    let p = if tx.is_empty() && ty.is_empty() && n <= 7 {
        let ranks: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let perms = permutations(n);
        let count = perms
            .iter()
            .filter(|p| {
                let yy: Vec<f64> = p.iter().map(|&i| i as f64).collect();
                kendall_s(&ranks, &yy) <= s
            })
            .count();
        count as f64 / perms.len() as f64
    } else {
        let nf = n as f64;
        let v0 = nf * (nf - 1.0) * (2.0 * nf + 5.0);
        let vt: f64 = tx.iter().map(|&t| (t * (t - 1) * (2 * t + 5)) as f64).sum();
        let vu: f64 = ty.iter().map(|&t| (t * (t - 1) * (2 * t + 5)) as f64).sum();
        let t3: f64 = tx.iter().map(|&t| (t * (t - 1) * (t - 2)) as f64).sum();
        let u3: f64 = ty.iter().map(|&t| (t * (t - 1) * (t - 2)) as f64).sum();
        let t2: f64 = tx.iter().map(|&t| (t * (t - 1)) as f64).sum();
        let u2: f64 = ty.iter().map(|&t| (t * (t - 1)) as f64).sum();
        let mut var = (v0 - vt - vu) / 18.0;
        if n > 2 {
            var += t3 * u3 / (9.0 * nf * (nf - 1.0) * (nf - 2.0));
        }
        var += t2 * u2 / (2.0 * nf * (nf - 1.0));
        if var <= 0.0 {
            1.0
        } else {
            // Continuity correction towards the null.
            let sc = if s < 0 { s as f64 + 1.0 } else if s > 0 { s as f64 - 1.0 } else { 0.0 };
            Normal::standard().cdf(sc / var.sqrt())
        }
    };
    Ok(TrendTest {
        tau,
        p_decreasing: p,
        n,
    })
}

/// Trend of a sequence against its index.
pub fn kendall_trend(values: &[f64]) -> TrendTest {
    let x: Vec<f64> = (0..values.len()).map(|i| i as f64).collect();
    kendall_trend_pairs(&x, values).unwrap_or(TrendTest {
        tau: 0.0,
        p_decreasing: 1.0,
        n: values.len(),
    })
}

/// Pearson chi-square goodness of fit. Returns `(statistic, degrees of freedom, p-value)`.
pub fn chi_square_gof(observed: &[u64], expected_prob: &[f64]) -> Result<(f64, usize, f64)> {
    if observed.len() != expected_prob.len() || observed.len() < 2 {
        return Err(Error::EmptySample);
    }
    let total: u64 = observed.iter().sum();
    let stat: f64 = observed
        .iter()
        .zip(expected_prob)
        .map(|(&o, &p)| {
            let e = p * total as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let df = observed.len() - 1;
    let p = 1.0 - ChiSquared::new(df as f64).expect("df > 0").cdf(stat);
    Ok((stat, df, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn ecdf_steps() {
        let d = EmpiricalDistribution::new(vec![3.0, 1.0, 2.0, 2.0]).unwrap();
        assert_eq!(d.ecdf(0.5), 0.0);
        assert_eq!(d.ecdf(1.0), 0.25);
        assert_eq!(d.ecdf(2.0), 0.75);
        assert_eq!(d.ecdf(10.0), 1.0);
        assert_eq!(d.median(), 2.0);
        assert!(EmpiricalDistribution::new(vec![]).is_err());
        assert!(EmpiricalDistribution::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn ks_uniform_coverage() {
        let mut ok = 0;
        for t in 0..100 {
            let mut rng = stream(50, t);
            let n = 1000;
            let d = EmpiricalDistribution::new((0..n).map(|_| rng.random::<f64>()).collect()).unwrap();
            if d.ks_distance(|x| x.clamp(0.0, 1.0)) < 1.36 / (n as f64).sqrt() {
                ok += 1;
            }
        }
        assert!(ok >= 88, "{ok}");
    }

    #[test]
    fn discrete_ks_of_exact_law_is_small() {
        // Geometric(1/2) on {1, 2, ...} with exact frequencies.
        let mut v = Vec::new();
        for k in 1..=10u32 {
            let c = 1usize << (10 - k);
            v.extend(std::iter::repeat(k as f64).take(c));
        }
        let d = EmpiricalDistribution::new(v).unwrap();
        let cdf = |x: f64| if x < 1.0 { 0.0 } else { 1.0 - 0.5f64.powf(x.floor()) };
        assert!(d.ks_distance_discrete(cdf) < 2e-3);
        assert!(d.ks_distance(cdf) > 0.2);
    }

    #[test]
    fn ks_self_is_zero() {
        let d = EmpiricalDistribution::new(vec![0.1, 0.5, 0.2]).unwrap();
        assert_eq!(d.ks_two_sample(&d), 0.0);
    }

    #[test]
    fn kolmogorov_values() {
        assert!((kolmogorov_survival(1.358) - 0.05).abs() < 1e-3);
        assert!((kolmogorov_survival(1.0) - 0.27).abs() < 1e-2);
    }

    #[test]
    fn kendall_exact_and_normal() {
        let t = kendall_trend(&[3.0, 2.0, 1.0]);
        assert_eq!(t.tau, -1.0);
        assert!((t.p_decreasing - 1.0 / 6.0).abs() < 1e-12);
        assert!(!t.decreasing());
        let t = kendall_trend(&(0..20).map(|i| -(i as f64)).collect::<Vec<_>>());
        assert!(t.decreasing());
        let t = kendall_trend(&(0..20).map(|i| i as f64).collect::<Vec<_>>());
        assert!(!t.decreasing());
        let x = [1.0, 1.0, 1.0, 2.0, 2.0, 2.0, 3.0, 3.0, 3.0];
        let y = [0.9, 0.8, 0.85, 0.5, 0.6, 0.55, 0.2, 0.3, 0.1];
        let t = kendall_trend_pairs(&x, &y).unwrap();
        assert!(t.tau < -0.8 && t.decreasing());
    }

    #[test]
    fn chi_square_sanity() {
        let (s, df, p) = chi_square_gof(&[50, 50], &[0.5, 0.5]).unwrap();
        assert_eq!((s, df), (0.0, 1));
        assert!((p - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn ks_symmetric_and_triangle(
            a in prop::collection::vec(-10.0f64..10.0, 1..40),
            b in prop::collection::vec(-10.0f64..10.0, 1..40),
            c in prop::collection::vec(-10.0f64..10.0, 1..40),
        ) {
            let (a, b, c) = (
                EmpiricalDistribution::new(a).unwrap(),
                EmpiricalDistribution::new(b).unwrap(),
                EmpiricalDistribution::new(c).unwrap(),
            );
            prop_assert!((a.ks_two_sample(&b) - b.ks_two_sample(&a)).abs() < 1e-12);
            prop_assert!(a.ks_two_sample(&c) <= a.ks_two_sample(&b) + b.ks_two_sample(&c) + 1e-12);
        }

        #[test]
        fn ecdf_range_and_merge(
            a in prop::collection::vec(-5.0f64..5.0, 1..30),
            b in prop::collection::vec(-5.0f64..5.0, 1..30),
            x in -6.0f64..6.0,
        ) {
            let da = EmpiricalDistribution::new(a.clone()).unwrap();
            let db = EmpiricalDistribution::new(b.clone()).unwrap();
            let f = da.ecdf(x);
            prop_assert!((0.0..=1.0).contains(&f));
            let mut all = a;
            all.extend(b);
            let merged = da.merge(&db);
            let direct = EmpiricalDistribution::new(all).unwrap();
            prop_assert_eq!(merged.sorted(), direct.sorted());
        }
    }
}
