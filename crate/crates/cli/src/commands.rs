//! Subcommand implementations. Each writes `rows.csv` and `summary.json` under
//! `<output_dir>/<subcommand>/`, plus SVG plots when requested.

use anyhow::{bail, Result};
use statrs::function::gamma::gamma;
use serde_json::{json, Value};

use semiexp::acceptance::{self, SuiteConfig, Verdict, KNOWN_FAILURES};
use semiexp::analytic::{c_ab, k_ab, ml_moment_closed_form, normalizers, theta_n, ModelParams};
use semiexp::capacity::{capacity_with_rng, estimate_c_infty, CInfinityBudget};
use semiexp::limit::{counterexample_check, joint_increment_prob, marginal_cdf, sample_limit, scalar_convexity, MarkMode, Window};
use semiexp::process::{simulate_process, Interval};
use semiexp::rng::{derive_seed, par_reps};
use semiexp::subordinator::{ml_fractional_moment, sample_shift_start, McEstimate, PassageSampler, SubordinatorPath};
use semiexp::zeroset::{default_budget, find_intersections, sample_zero_set};
use semiexp::{EmpiricalDistribution, StepLaw};

use crate::cache;
use crate::config::ExperimentConfig;
use crate::output::{num, Artifacts, Plot, Series};

/// Shared context of a subcommand run.
pub struct Ctx {
    pub cfg: ExperimentConfig,
    pub svg: bool,
}

impl Ctx {
    fn seed(&self, label: &str) -> u64 {
        derive_seed(self.cfg.seeds.root, label)
    }

    fn artifacts(&self, name: &str) -> Result<Artifacts> {
        Artifacts::new(&self.cfg.output_dir, name)
    }

    fn params(&self) -> &ModelParams {
        &self.cfg.params
    }

    fn law(&self) -> Result<StepLaw> {
        Ok(StepLaw::from_params(self.params())?)
    }

    fn seeds_json(&self) -> Value {
        json!({
            "root": self.cfg.seeds.root,
            "retry": self.cfg.seeds.retry,
            "scheme": self.cfg.seeds.scheme,
        })
    }

    /// `K(α,β)` with the Mittag-Leffler moment by Monte Carlo, and the closed form.
    fn k_ab(&self) -> Result<(McEstimate, f64)> {
        let p = self.params();
        let q = 1.0 / c_ab(p);
        let m = ml_fractional_moment(p.beta, q, 1_000_000, self.seed("k_ab"))?;
        let k = k_ab(p, m.value)?;
        let est = McEstimate {
            value: k,
            se: k * m.se / m.value,
            reps: m.reps,
        };
        Ok((est, k_ab(p, ml_moment_closed_form(p.beta, q))?))
    }
}

fn est_json(e: &McEstimate) -> Value {
    json!({ "value": e.value, "se": e.se, "reps": e.reps })
}

fn mean_se(xs: &[f64]) -> Result<McEstimate> {
    Ok(McEstimate::from_samples(xs)?)
}

pub fn estimate_cinf(ctx: &Ctx, n: u64) -> Result<()> {
    let law = ctx.law()?;
    let budget = CInfinityBudget {
        pairs: ctx.cfg.reps.cinf_pairs,
        ranges: ctx.cfg.reps.cinf_ranges,
        ..CInfinityBudget::default()
    };
    let c = estimate_c_infty(&law, n as usize, &budget, ctx.cfg.seeds.root)?;
    let a = ctx.artifacts("estimate-cinf")?;
    a.csv(
        "rows.csv",
        &["route", "value", "se", "reps"],
        &[
            vec!["intersection".into(), num(c.intersection.value), num(c.intersection.se), c.intersection.reps.to_string()],
            vec!["capacity".into(), num(c.capacity_ratio.value), num(c.capacity_ratio.se), c.capacity_ratio.reps.to_string()],
        ],
    )?;
    a.json(
        "summary.json",
        &json!({
            "n": n,
            "combined": c.combined(),
            "discrepancy_in_se": c.discrepancy(),
            "intersection": { "value": c.intersection.value, "se": c.intersection.se, "cutoff": c.intersection.horizon.to_string() },
            "capacity": { "value": c.capacity_ratio.value, "se": c.capacity_ratio.se },
            "seeds": ctx.seeds_json(),
        }),
    )?;
    cache::store(
        &cache::path(&ctx.cfg),
        cache::Entry {
            provenance: cache::provenance(&ctx.cfg, n),
            intersection: c.intersection.value,
            intersection_se: c.intersection.se,
            capacity: c.capacity_ratio.value,
            capacity_se: c.capacity_ratio.se,
            combined: c.combined(),
        },
    )?;
    println!(
        "c_inf = {:.5} (intersection {:.5} ± {:.5}, capacity {:.5} ± {:.5})",
        c.combined(),
        c.intersection.value,
        c.intersection.se,
        c.capacity_ratio.value,
        c.capacity_ratio.se
    );
    Ok(())
}

pub fn simulate_subordinator(ctx: &Ctx) -> Result<()> {
    let beta = ctx.params().beta;
    let dt = ctx.cfg.accept.path_dt;
    let passage = PassageSampler::new(beta)?;
    let rows: Vec<semiexp::Result<[f64; 3]>> = par_reps(ctx.seed("simulate-subordinator"), ctx.cfg.reps.subordinator, |rng| {
        let path = SubordinatorPath::sample_until(beta, dt, 0.0, 1.0, rng)?.first_passage(1.0)?;
        let exact = passage.passage_times(0.0, &[1.0], rng)[0];
        Ok([path, exact, sample_shift_start(beta, rng)])
    });
    let rows: Vec<[f64; 3]> = rows.into_iter().collect::<semiexp::Result<_>>()?;
    let col = |j: usize| rows.iter().map(|r| r[j]).collect::<Vec<f64>>();
    let (path, exact, shift) = (col(0), col(1), col(2));
    let oracle = 1.0 / gamma(1.0 + beta);
    let dp = EmpiricalDistribution::new(path.clone())?;
    let de = EmpiricalDistribution::new(exact.clone())?;
    let ds = EmpiricalDistribution::new(shift.clone())?;
    let a = ctx.artifacts("simulate-subordinator")?;
    a.csv(
        "rows.csv",
        &["rep", "passage_path", "passage_exact", "shift_start"],
        &rows
            .iter()
            .enumerate()
            .map(|(i, r)| vec![i.to_string(), num(r[0]), num(r[1]), num(r[2])])
            .collect::<Vec<_>>(),
    )?;
    a.json(
        "summary.json",
        &json!({
            "beta": beta,
            "dt": dt,
            "mean_passage_path": est_json(&mean_se(&path)?),
            "mean_passage_exact": est_json(&mean_se(&exact)?),
            "oracle_mean": oracle,
            "ks_path_vs_exact": dp.ks_two_sample(&de),
            "ks_shift_vs_power_law": ds.ks_distance(|x| x.clamp(0.0, 1.0).powf(1.0 - beta)),
            "seeds": ctx.seeds_json(),
        }),
    )?;
    if ctx.svg {
        a.svg(
            "passage_ecdf.svg",
            &Plot {
                title: "First passage above 1".into(),
                x_label: "Z^←(1)".into(),
                y_label: "ECDF".into(),
                log_x: false,
                series: vec![Series::ecdf("path", dp.sorted()), Series::ecdf("exact", de.sorted())],
            },
        )?;
    }
    Ok(())
}

pub fn simulate_zerosets(ctx: &Ctx) -> Result<()> {
    let law = ctx.law()?;
    let beta = law.beta();
    let mut rows = Vec::new();
    let mut per_n = Vec::new();
    let mut plots = Vec::new();
    for &n in &ctx.cfg.n_grid {
        let tail = law.tail(n);
        let sets = par_reps(ctx.seed(&format!("simulate-zerosets/{n}")), ctx.cfg.reps.zerosets, |rng| {
            let z = sample_zero_set(n, &law, rng);
            (z.len(), z.min(), z.max())
        });
        let cards: Vec<f64> = sets.iter().map(|s| s.0 as f64 * tail).collect();
        let mins = EmpiricalDistribution::new(sets.iter().map(|s| s.1 as f64 / n as f64).collect())?;
        for (i, s) in sets.iter().enumerate() {
            rows.push(vec![
                n.to_string(),
                i.to_string(),
                s.0.to_string(),
                s.1.to_string(),
                s.2.to_string(),
                num(s.0 as f64 * tail),
            ]);
        }
        per_n.push(json!({
            "n": n,
            "w_n": law.wandering_rate(n),
            "theta_n": theta_n(n, &law),
            "mean_card_times_tail": est_json(&mean_se(&cards)?),
            "ks_min_over_n": mins.ks_distance(|x| x.clamp(0.0, 1.0).powf(1.0 - beta)),
        }));
        plots.push(Series::ecdf(format!("n={n}"), mins.sorted()));
    }
    let a = ctx.artifacts("simulate-zerosets")?;
    a.csv("rows.csv", &["n", "rep", "cardinality", "min", "max", "card_times_tail"], &rows)?;
    a.json("summary.json", &json!({ "per_n": per_n, "seeds": ctx.seeds_json() }))?;
    if ctx.svg {
        plots.push(Series::curve(
            "x^(1-β)",
            (0..=100).map(|i| i as f64 / 100.0).map(|x| (x, x.powf(1.0 - beta))).collect(),
        ));
        a.svg(
            "min_ecdf.svg",
            &Plot {
                title: "min I/n against its limit".into(),
                x_label: "x".into(),
                y_label: "P(min I/n ≤ x)".into(),
                log_x: false,
                series: plots,
            },
        )?;
    }
    Ok(())
}

/// CDF of the `i`-th arrival of a unit rate Poisson process.
fn erlang_cdf(i: usize, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..i {
        term *= x / j as f64;
        sum += term;
    }
    1.0 - (-x).exp() * sum
}

pub fn theorem_4joint(ctx: &Ctx, k_max: usize, m: usize, n_override: Option<u64>) -> Result<()> {
    if k_max == 0 || m == 0 {
        bail!("--K and --m must be at least 1");
    }
    let c_inf = cache::lookup(&ctx.cfg)?.combined;
    let law = ctx.law()?;
    let p = *ctx.params();
    let grid: Vec<u64> = n_override.map_or_else(|| ctx.cfg.n_grid.clone(), |n| vec![n]);
    let passage = PassageSampler::new(p.beta)?;
    let reference = EmpiricalDistribution::new(par_reps(ctx.seed("4joint/reference"), 100_000, |rng| {
        c_inf * passage.passage_times(sample_shift_start(p.beta, rng), &[1.0], rng)[0]
    }))?;
    let mut rows = Vec::new();
    let mut excluded = Vec::new();
    for &n in &grid {
        let budget = default_budget(n, &law);
        let theta = theta_n(n, &law);
        let w = law.wandering_rate(n);
        for k in 1..=k_max {
            let draws = par_reps(ctx.seed(&format!("4joint/{n}/{k}")), ctx.cfg.reps.p_bar, |rng| {
                let set = sample_zero_set(n, &law, rng);
                let cap = capacity_with_rng(set.points(), &law, 200, rng).value;
                let rec = find_intersections(&set, k as u64, &law, m, budget, rng);
                let js: Vec<f64> = rec.j_indices.iter().map(|&j| (j - k as u64) as f64 * cap / w).collect();
                (cap / theta, js, set.min() as f64 / n as f64, rec.complete)
            });
            let complete: Vec<_> = draws.iter().filter(|d| d.3).collect();
            excluded.push(json!({ "n": n, "k": k, "excluded": draws.len() - complete.len() }));
            let mut row = |component: &str, i: String, xs: Vec<f64>, limit_mean: f64, ks: f64| -> Result<()> {
                let e = mean_se(&xs)?;
                rows.push(vec![n.to_string(), component.to_string(), k.to_string(), i, num(e.value), num(e.se), num(limit_mean), num(ks)]);
                Ok(())
            };
            let wp = EmpiricalDistribution::new(draws.iter().map(|d| d.0).collect())?;
            let ref_mean = reference.sorted().iter().sum::<f64>() / reference.len() as f64;
            row("scaled_p_bar", "-".into(), wp.sorted().to_vec(), ref_mean, wp.ks_two_sample(&reference))?;
            for i in 1..=m {
                let xs = EmpiricalDistribution::new(complete.iter().map(|d| d.1[i - 1]).collect())?;
                let ks = xs.ks_distance(|x| erlang_cdf(i, x));
                row("j_times_p_bar", i.to_string(), xs.sorted().to_vec(), i as f64, ks)?;
            }
            let mins = EmpiricalDistribution::new(draws.iter().map(|d| d.2).collect())?;
            let ks = mins.ks_distance(|x| x.clamp(0.0, 1.0).powf(1.0 - p.beta));
            row("min_I_over_n", "-".into(), mins.sorted().to_vec(), (1.0 - p.beta) / (2.0 - p.beta), ks)?;
        }
    }
    let a = ctx.artifacts("theorem-4joint")?;
    a.csv(
        "rows.csv",
        &["n", "component", "k", "i", "empirical_mean", "empirical_se", "limit_mean", "ks"],
        &rows,
    )?;
    a.json(
        "summary.json",
        &json!({
            "K": k_max,
            "m": m,
            "c_inf": c_inf,
            "components_per_n": rows.len() / grid.len(),
            "incomplete_scans": excluded,
            "limits": {
                "scaled_p_bar": "c_inf Z*^<-(1)",
                "j_times_p_bar": "Gamma(i, 1) arrival of a unit Poisson process",
                "min_I_over_n": "CDF x^(1-beta)",
            },
            "seeds": ctx.seeds_json(),
        }),
    )?;
    for r in &rows {
        println!("n={} {:<14} k={} i={} mean={} limit={} ks={}", r[0], r[1], r[2], r[3], r[4], r[6], r[7]);
    }
    Ok(())
}

pub fn simulate_process_cmd(ctx: &Ctx, n_override: Option<u64>) -> Result<()> {
    let c_inf = cache::lookup(&ctx.cfg)?.combined;
    let law = ctx.law()?;
    let p = *ctx.params();
    let n = n_override.unwrap_or(*ctx.cfg.n_grid.last().unwrap());
    let table = normalizers(n, c_inf, &law, &p)?;
    let windows = [Interval::unit(), Interval::new(0.0, 0.5)?, Interval::new(0.5, 1.0)?];
    let rows: Vec<semiexp::Result<Vec<f64>>> = par_reps(ctx.seed(&format!("simulate-process/{n}")), ctx.cfg.reps.process, |rng| {
        let r = simulate_process(n, &law, &p, rng)?;
        let mut out = vec![r.gammas.len() as f64, r.support().len() as f64];
        for w in windows {
            out.push((r.sup_measure(w) - table.b_n) / table.a_n);
        }
        Ok(out)
    });
    let rows: Vec<Vec<f64>> = rows.into_iter().collect::<semiexp::Result<_>>()?;
    let (k, _) = ctx.k_ab()?;
    let d = EmpiricalDistribution::new(rows.iter().map(|r| r[2]).collect())?;
    let a = ctx.artifacts("simulate-process")?;
    a.csv(
        "rows.csv",
        &["rep", "arrivals", "support_size", "max_0_1", "max_0_half", "max_half_1"],
        &rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut v = vec![i.to_string(), (r[0] as u64).to_string(), (r[1] as u64).to_string()];
                v.extend(r[2..].iter().map(|&x| num(x)));
                v
            })
            .collect::<Vec<_>>(),
    )?;
    a.json(
        "summary.json",
        &json!({
            "n": n,
            "normalizers": serde_json::to_value(table)?,
            "ks_unit_interval_vs_limit": d.ks_distance(|x| marginal_cdf(1.0, x, &p, k.value).unwrap_or(f64::NAN)),
            "k_ab": est_json(&k),
            "seeds": ctx.seeds_json(),
        }),
    )?;
    Ok(())
}

pub fn sample_limit_cmd(ctx: &Ctx) -> Result<()> {
    let p = *ctx.params();
    let (kk, ii) = (ctx.cfg.truncation.k, ctx.cfg.truncation.i);
    let levels = vec![0.25, 0.5, 0.75, 1.0];
    let mode = MarkMode::Profile { levels: levels.clone() };
    let rows: Vec<semiexp::Result<Vec<f64>>> = par_reps(ctx.seed("sample-limit"), ctx.cfg.reps.limit, |rng| {
        let s = sample_limit(&p, kk, ii, &mode, rng)?;
        let mut out = levels.iter().map(|&t| s.eval(Window::Upto(t))).collect::<semiexp::Result<Vec<f64>>>()?;
        out.push(s.truncation_bound);
        Ok(out)
    });
    let rows: Vec<Vec<f64>> = rows.into_iter().collect::<semiexp::Result<_>>()?;
    let (k, k_closed) = ctx.k_ab()?;
    let mut ks = Vec::new();
    let mut dists = Vec::new();
    for (j, &t) in levels.iter().enumerate() {
        let d = EmpiricalDistribution::new(rows.iter().map(|r| r[j]).collect())?;
        ks.push(json!({ "t": t, "ks": d.ks_distance(|x| marginal_cdf(t, x, &p, k.value).unwrap_or(f64::NAN)) }));
        dists.push(d);
    }
    let bound = rows.iter().map(|r| r[levels.len()]).sum::<f64>() / rows.len() as f64;
    let a = ctx.artifacts("sample-limit")?;
    a.csv(
        "rows.csv",
        &["rep", "M_0.25", "M_0.5", "M_0.75", "M_1", "truncation_bound"],
        &rows
            .iter()
            .enumerate()
            .map(|(i, r)| std::iter::once(i.to_string()).chain(r.iter().map(|&x| num(x))).collect())
            .collect::<Vec<_>>(),
    )?;
    a.json(
        "summary.json",
        &json!({
            "truncation": { "k": kk, "i": ii, "mean_bound": bound },
            "k_ab": est_json(&k),
            "k_ab_closed_form": k_closed,
            "ks_vs_marginal": ks,
            "seeds": ctx.seeds_json(),
        }),
    )?;
    if ctx.svg {
        let d = &dists[levels.len() - 1];
        let (lo, hi) = (d.quantile(0.001), d.quantile(0.999));
        let curve = (0..=200)
            .map(|i| lo + (hi - lo) * i as f64 / 200.0)
            .map(|x| (x, marginal_cdf(1.0, x, &p, k.value).unwrap_or(f64::NAN)))
            .collect();
        a.svg(
            "marginal_ecdf.svg",
            &Plot {
                title: "M(1): sampler against the closed form".into(),
                x_label: "x".into(),
                y_label: "P(M(1) ≤ x)".into(),
                log_x: false,
                series: vec![Series::ecdf("sampler", d.sorted()), Series::curve("exp(-K e^-x)", curve)],
            },
        )?;
    }
    Ok(())
}

pub fn compare_marginal(ctx: &Ctx) -> Result<()> {
    let c_inf = cache::lookup(&ctx.cfg)?.combined;
    let p = *ctx.params();
    let (k, _) = ctx.k_ab()?;
    let cdf = |x: f64| marginal_cdf(1.0, x, &p, k.value).unwrap_or(f64::NAN);
    let mut rows = Vec::new();
    let mut series = Vec::new();
    let mut trend = Vec::new();
    for &n in &ctx.cfg.n_grid {
        let (table, d) = semiexp::process::normalized_max_sample(
            n,
            &p,
            c_inf,
            ctx.cfg.reps.process,
            &[Interval::unit()],
            ctx.seed(&format!("compare-marginal/{n}")),
        )?;
        let ks = d[0].ks_distance(cdf);
        rows.push(vec![n.to_string(), num(table.a_n), num(table.b_n), num(ks), num(d[0].median())]);
        trend.push((n as f64, ks));
        series.push(Series::ecdf(format!("n={n}"), d[0].sorted()));
    }
    let median_limit = k.value.ln() - std::f64::consts::LN_2.ln();
    let a = ctx.artifacts("compare-marginal")?;
    a.csv("rows.csv", &["n", "a_n", "b_n", "ks", "median"], &rows)?;
    a.json(
        "summary.json",
        &json!({
            "c_inf": c_inf,
            "k_ab": est_json(&k),
            "median_limit": median_limit,
            "seeds": ctx.seeds_json(),
        }),
    )?;
    if ctx.svg {
        let curve = (0..=200).map(|i| -3.0 + 9.0 * i as f64 / 200.0).map(|x| (x, cdf(x))).collect();
        series.push(Series::curve("limit", curve));
        a.svg(
            "ecdf_overlay.svg",
            &Plot {
                title: "Normalized maxima against the limit marginal".into(),
                x_label: "x".into(),
                y_label: "ECDF".into(),
                log_x: false,
                series,
            },
        )?;
        a.svg(
            "ks_trend.svg",
            &Plot {
                title: "KS distance to the limit".into(),
                x_label: "n".into(),
                y_label: "KS".into(),
                log_x: true,
                series: vec![Series::curve("KS", trend)],
            },
        )?;
    }
    Ok(())
}

pub fn joint_increments(ctx: &Ctx, partition: &[f64], x: &[f64]) -> Result<()> {
    let p = *ctx.params();
    let formula = joint_increment_prob(partition, x, &p, ctx.cfg.reps.joint, 256, ctx.seed("joint-increments/formula"))?;
    let levels: Vec<f64> = partition[1..].to_vec();
    let mode = MarkMode::Profile { levels };
    let (kk, ii) = (ctx.cfg.truncation.k, ctx.cfg.truncation.i);
    let hits: Vec<semiexp::Result<bool>> = par_reps(ctx.seed("joint-increments/sampler"), ctx.cfg.reps.limit, |rng| {
        let s = sample_limit(&p, kk, ii, &mode, rng)?;
        for i in 1..partition.len() {
            let w = if i == 1 {
                Window::Upto(partition[1])
            } else {
                Window::Between(partition[i - 1], partition[i])
            };
            if s.eval(w)? > x[i - 1] {
                return Ok(false);
            }
        }
        Ok(true)
    });
    let hits: Vec<bool> = hits.into_iter().collect::<semiexp::Result<_>>()?;
    let freq = hits.iter().filter(|&&h| h).count() as f64 / hits.len() as f64;
    let se = (freq * (1.0 - freq) / hits.len() as f64).sqrt();
    let z = (freq - formula.value) / (se.powi(2) + formula.se.powi(2)).sqrt();
    let a = ctx.artifacts("joint-increments")?;
    let join = |v: &[f64]| v.iter().map(|&t| num(t)).collect::<Vec<_>>().join(";");
    a.csv(
        "rows.csv",
        &["partition", "levels", "formula", "formula_se", "sampler", "sampler_se", "z"],
        &[vec![join(partition), join(x), num(formula.value), num(formula.se), num(freq), num(se), num(z)]],
    )?;
    a.json(
        "summary.json",
        &json!({
            "partition": partition,
            "levels": x,
            "formula": est_json(&formula),
            "sampler": { "value": freq, "se": se, "reps": hits.len() },
            "difference_in_se": z,
            "seeds": ctx.seeds_json(),
        }),
    )?;
    println!("formula {:.5} ± {:.5}, sampler {freq:.5} ± {se:.5}, z = {z:.2}", formula.value, formula.se);
    Ok(())
}

pub fn counterexample(ctx: &Ctx, t1: f64, t2: f64, x1: f64, x2: f64) -> Result<()> {
    let p = *ctx.params();
    let c = c_ab(&p);
    let r = counterexample_check(t1, t2, x1, x2, &p, ctx.cfg.reps.counterexample, 256, ctx.seed("counterexample"))?;
    let (s, j) = scalar_convexity(c, t1, t2, t2);
    let a = ctx.artifacts("counterexample")?;
    a.csv(
        "rows.csv",
        &["quantity", "value", "se"],
        &[
            vec!["split".into(), num(r.split.value), num(r.split.se)],
            vec!["joint".into(), num(r.joint.value), num(r.joint.se)],
            vec!["gap".into(), num(r.gap.value), num(r.gap.se)],
            vec!["scalar_split".into(), num(s), "0".into()],
            vec!["scalar_joint".into(), num(j), "0".into()],
        ],
    )?;
    a.json(
        "summary.json",
        &json!({
            "t": [t1, t2],
            "x": [x1, x2],
            "c": c,
            "gap_in_se": r.gap.value / r.gap.se,
            "split": est_json(&r.split),
            "joint": est_json(&r.joint),
            "gap": est_json(&r.gap),
            "seeds": ctx.seeds_json(),
        }),
    )?;
    println!("gap {:.4e} ± {:.1e} ({:.1} SE)", r.gap.value, r.gap.se, r.gap.value / r.gap.se);
    Ok(())
}

fn suite_config(ctx: &Ctx) -> SuiteConfig {
    SuiteConfig {
        params: ctx.cfg.params,
        seed: ctx.cfg.seeds.root,
        retry_seed: ctx.cfg.seeds.retry,
        scale: ctx.cfg.accept.scale,
        path_dt: ctx.cfg.accept.path_dt,
        truncation: (ctx.cfg.truncation.k, ctx.cfg.truncation.i),
        c_inf: cache::lookup(&ctx.cfg).ok().map(|e| e.combined),
    }
}

fn verdict_rows(verdicts: &[Verdict]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for v in verdicts {
        for a in &v.attempts {
            for c in &a.checks {
                rows.push(vec![
                    v.id.to_string(),
                    v.title.clone(),
                    v.passed.to_string(),
                    a.seed.to_string(),
                    c.name.clone(),
                    num(c.value),
                    num(c.threshold),
                    c.passed.to_string(),
                    KNOWN_FAILURES.contains(&(v.id, c.name.as_str())).to_string(),
                    c.detail.clone(),
                ]);
            }
        }
    }
    rows
}

const VERDICT_HEADER: [&str; 10] = [
    "criterion",
    "title",
    "criterion_passed",
    "seed",
    "check",
    "value",
    "threshold",
    "check_passed",
    "known_failure",
    "detail",
];

/// Verdicts without wall-clock times, which would break byte-identical reruns.
fn verdicts_json(verdicts: &[Verdict]) -> Result<Value> {
    let mut v = serde_json::to_value(verdicts)?;
    if let Value::Array(items) = &mut v {
        for item in items {
            if let Value::Object(m) = item {
                m.remove("seconds");
            }
        }
    }
    Ok(v)
}

pub fn lemma_suite(ctx: &Ctx) -> Result<bool> {
    let v = acceptance::run_criterion(1, &suite_config(ctx))?;
    let a = ctx.artifacts("lemma-suite")?;
    a.csv("rows.csv", &VERDICT_HEADER, &verdict_rows(std::slice::from_ref(&v)))?;
    a.json("summary.json", &json!({ "verdict": verdicts_json(std::slice::from_ref(&v))?, "seeds": ctx.seeds_json() }))?;
    println!("{}", v.line());
    Ok(v.passed)
}

/// Runs the selected criteria; returns whether the run counts as a pass.
pub fn accept(ctx: &Ctx, criteria: &[u8], allow_known: bool) -> Result<bool> {
    let sc = suite_config(ctx);
    let mut verdicts = Vec::new();
    for &id in criteria {
        let v = acceptance::run_criterion(id, &sc)?;
        println!("{}", v.line());
        verdicts.push(v);
    }
    let a = ctx.artifacts("accept")?;
    a.csv("verdicts.csv", &VERDICT_HEADER, &verdict_rows(&verdicts))?;
    let all_passed = verdicts.iter().all(|v| v.passed);
    let only_known = verdicts.iter().all(|v| v.passed || v.unexpected_failures().is_empty());
    a.json(
        "summary.json",
        &json!({
            "all_passed": all_passed,
            "only_known_failures": only_known,
            "scale": sc.scale,
            "c_inf_from_cache": sc.c_inf,
            "verdicts": verdicts_json(&verdicts)?,
            "seeds": ctx.seeds_json(),
        }),
    )?;
    Ok(all_passed || (allow_known && only_known))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erlang_cdf_matches_exponential_and_sum() {
        assert!((erlang_cdf(1, 1.0) - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert!((erlang_cdf(2, 2.0) - (1.0 - 3.0 * (-2.0f64).exp())).abs() < 1e-15);
        assert_eq!(erlang_cdf(3, 0.0), 0.0);
    }

}
