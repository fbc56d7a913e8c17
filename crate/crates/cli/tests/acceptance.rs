//! End-to-end acceptance checks. Runs as a plain binary and prints one
//! PASS/FAIL line per criterion; exits non-zero if any criterion fails.

// Negated comparisons are deliberate: a NaN must fail a check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::FRAC_PI_2;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use weibull_r::{
    discrimination_terms, expect, fit_mle, make_baseline, record_marginal_pdf_closed,
    record_marginal_pdf_series, reliability, reliability_between, reliability_quadrature,
    reliability_series, shannon_entropy, BaselineDistribution, Family, FitSpec, QuadratureSpec,
    RandomSource, RecordQuery, ReliabilityQuery, WeibullR,
};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const EULER: f64 = 0.577_215_664_901_532_860_6;

fn dist(c: f64, gamma: f64, family: Family, params: &[f64]) -> WeibullR {
    WeibullR::new(c, gamma, make_baseline(family, params).unwrap()).unwrap()
}

fn rel_err(got: f64, want: f64) -> f64 {
    if got == want {
        0.0
    } else {
        (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
    }
}

/// Double-exponential (tanh-sinh) quadrature on [a, b]; returns the finest
/// estimate and its change from the previous level.
fn tanh_sinh(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let level = |k: u32| -> f64 {
        let h = 0.5f64.powi(k as i32);
        let n = (4.0 / h) as i64;
        let mut sum = 0.0;
        for i in -n..=n {
            let t = i as f64 * h;
            let s = FRAC_PI_2 * t.sinh();
            let e = (-2.0 * s.abs()).exp();
            let dist = half * 2.0 * e / (1.0 + e);
            if dist == 0.0 {
                continue;
            }
            let x = if t < 0.0 { a + dist } else { b - dist };
            if x <= a || x >= b {
                continue;
            }
            let w = half * FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
            let fx = f(x);
            if fx != 0.0 {
                sum += w * fx;
            }
        }
        h * sum
    };
    let coarse = level(6);
    let fine = level(7);
    (fine, (fine - coarse).abs())
}

/// ∫ f over consecutive panels [edges[i], edges[i+1]].
fn panels(f: &dyn Fn(f64) -> f64, edges: &[f64]) -> f64 {
    edges
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| tanh_sinh(f, w[0], w[1]).0)
        .sum()
}

/// Regularized lower incomplete gamma for integer m, by its finite sum.
fn gamma_cdf_integer(m: u32, w: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..m {
        term *= w / k as f64;
        sum += term;
    }
    1.0 - (-w).exp() * sum
}

fn gamma_quantile_integer(m: u32, p: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    while gamma_cdf_integer(m, hi) < p {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gamma_cdf_integer(m, mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Chi-square upper-tail probability.
fn chi_square_sf(stat: f64, dof: u32) -> f64 {
    weibull_r::specfun::regularized_upper_gamma(dof as f64 / 2.0, stat / 2.0).unwrap()
}

fn settings() -> Vec<(Family, Vec<(f64, f64, Vec<f64>)>)> {
    vec![
        (
            Family::Pareto,
            vec![
                (0.8, 1.0, vec![1.0, 1.0]),
                (2.0, 0.5, vec![3.0, 2.0]),
                (5.0, 2.0, vec![0.5, 1.0]),
            ],
        ),
        (
            Family::Lomax,
            vec![
                (0.8, 1.0, vec![1.0, 1.0]),
                (2.0, 1.0, vec![1.0, 1.0]),
                (4.0, 3.0, vec![2.0, 0.5]),
            ],
        ),
        (
            Family::Cauchy,
            vec![
                (0.7, 1.0, vec![1.0]),
                (2.0, 1.0, vec![1.0]),
                (5.0, 0.5, vec![2.0]),
            ],
        ),
        (
            Family::Normal,
            vec![
                (0.6, 1.0, vec![0.0, 1.0]),
                (2.0, 1.0, vec![0.0, 1.0]),
                (4.0, 2.0, vec![-3.0, 0.5]),
            ],
        ),
        (
            Family::Weibull,
            vec![
                (0.8, 1.0, vec![2.0, 1.0]),
                (2.0, 1.0, vec![0.5, 2.0]),
                (3.0, 0.4, vec![1.5, 1.0]),
            ],
        ),
        (
            Family::Exponential,
            vec![
                (0.8, 1.0, vec![1.0]),
                (2.0, 1.0, vec![1.0]),
                (5.0, 2.0, vec![0.5]),
            ],
        ),
    ]
}

fn all_settings() -> Vec<WeibullR> {
    settings()
        .into_iter()
        .flat_map(|(family, cases)| {
            cases
                .into_iter()
                .map(move |(c, g, p)| dist(c, g, family, &p))
        })
        .collect()
}

fn normalization() -> Check {
    let start = Instant::now();
    let probs = [
        1e-12,
        1e-9,
        1e-6,
        1e-4,
        1e-2,
        0.1,
        0.25,
        0.5,
        0.75,
        0.9,
        0.99,
        1.0 - 1e-4,
        1.0 - 1e-6,
        1.0 - 1e-9,
        1.0 - 1e-12,
    ];
    let mut worst: f64 = 0.0;
    let cases = all_settings();
    for d in &cases {
        let mut edges: Vec<f64> = probs.iter().map(|&p| d.quantile(p).unwrap()).collect();
        let lower = d.support().lower;
        let missing_lower = if lower.is_finite() {
            edges[0] = lower;
            0.0
        } else {
            1e-12
        };
        let mass = panels(&|x| d.pdf(x), &edges) + missing_lower + 1e-12;
        worst = worst.max((mass - 1.0).abs());
        ensure!((mass - 1.0).abs() <= 1e-6, "{d:?}: total mass {mass}");
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(format!(
        "{} cases, max |mass-1| = {worst:.2e}, {elapsed:.2?}",
        cases.len()
    ))
}

fn reductions() -> Check {
    let xs: Vec<f64> = (0..1000)
        .map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / 999.0))
        .collect();
    let ps: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
    let mut worst: f64 = 0.0;
    let mut check = |label: &str, got: f64, want: f64| -> Result<(), String> {
        let e = rel_err(got, want);
        worst = worst.max(e);
        if e > 1e-10 {
            return Err(format!("{label}: {got} vs {want} (rel {e:.2e})"));
        }
        Ok(())
    };
    // c = 1 with a Lomax(β, θ) baseline is Lomax(β/γ, θ).
    for (beta, theta, gamma) in [(2.5, 1.5, 1.0), (0.7, 3.0, 1.0), (2.0, 1.0, 0.5)] {
        let d = dist(1.0, gamma, Family::Lomax, &[beta, theta]);
        let k = beta / gamma;
        for &x in &xs {
            let ln_s = -k * (x / theta).ln_1p();
            check("lomax cdf", d.cdf(x), -ln_s.exp_m1())?;
            check(
                "lomax pdf",
                d.pdf(x),
                k / theta * (ln_s - (x / theta).ln_1p()).exp(),
            )?;
            check("lomax hazard", d.hazard(x).unwrap(), k / (theta + x))?;
        }
        for &p in &ps {
            let want = theta * (-(-p).ln_1p() / k).exp_m1();
            check("lomax quantile", d.quantile(p).unwrap(), want)?;
        }
    }
    // Exponential(λ) baseline is Weibull(c, γ/λ).
    for (c, gamma, lambda) in [(2.5, 1.3, 0.7), (0.6, 1.0, 2.0), (1.0, 2.0, 1.0)] {
        let d = dist(c, gamma, Family::Exponential, &[lambda]);
        let s = gamma / lambda;
        for &x in &xs {
            let z = (x / s).powf(c);
            check("weibull cdf", d.cdf(x), -(-z).exp_m1())?;
            check(
                "weibull pdf",
                d.pdf(x),
                c / s * (x / s).powf(c - 1.0) * (-z).exp(),
            )?;
            check(
                "weibull hazard",
                d.hazard(x).unwrap(),
                c / s * (x / s).powf(c - 1.0),
            )?;
        }
        for &p in &ps {
            check(
                "weibull quantile",
                d.quantile(p).unwrap(),
                s * (-(-p).ln_1p()).powf(1.0 / c),
            )?;
        }
    }
    Ok(format!(
        "6 settings x 4 functions x 1000 points, max rel err {worst:.2e}"
    ))
}

fn roundtrip() -> Check {
    let mut ps: Vec<f64> = (0..=80)
        .map(|i| 10f64.powf(-9.0 + 8.7 * i as f64 / 80.0))
        .collect();
    ps.extend(ps.clone().into_iter().map(|p| 1.0 - p));
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for d in all_settings() {
        for &p in &ps {
            if !(p > 1e-9 && p < 1.0 - 1e-9) {
                continue;
            }
            let x = d.quantile(p).unwrap();
            ensure!(x.is_finite(), "{d:?}: Q({p}) = {x}");
            let back = d.cdf(x);
            let err = (back - p).abs();
            worst = worst.max(err);
            ensure!(err <= 1e-9, "{d:?}: cdf(Q({p})) = {back}");
            cases += 1;
        }
    }
    for (mu, sigma) in [(0.0, 1.0), (3.0, 0.5)] {
        for c in [0.5, 2.0] {
            let d = dist(c, 1.0, Family::Normal, &[mu, sigma]);
            for x in [mu - 12.0 * sigma, mu + 12.0 * sigma] {
                let vals = [
                    d.pdf(x),
                    d.cdf(x),
                    d.survival(x),
                    d.hazard(x).unwrap(),
                    d.cumulative_hazard(x).unwrap(),
                ];
                ensure!(
                    vals.iter().all(|v| v.is_finite()),
                    "Normal({mu},{sigma}) c={c} at {x}: {vals:?}"
                );
            }
            let upper = d.cumulative_hazard(mu + 12.0 * sigma).unwrap();
            ensure!(
                upper > 0.0,
                "cumulative hazard at +12 sigma collapsed to {upper}"
            );
            ensure!(
                d.hazard(mu + 12.0 * sigma).unwrap() > 0.0,
                "hazard at +12 sigma collapsed"
            );
        }
    }
    Ok(format!(
        "{cases} round trips, max |cdf(Q(p)) - p| = {worst:.2e}; Normal +/-12 sigma finite"
    ))
}

fn stress_strength() -> Check {
    let start = Instant::now();
    let mut worst_series: f64 = 0.0;
    for ratio in [0.1, 0.25, 0.5, 0.75, 0.9] {
        let q = ReliabilityQuery::new(1.0, ratio).unwrap();
        let s = reliability_series(&q).map_err(|e| e.to_string())?;
        let i = reliability_quadrature(&q).map_err(|e| e.to_string())?;
        worst_series = worst_series.max((s - i).abs());
        ensure!(
            (s - i).abs() <= 1e-9,
            "ratio {ratio}: series {s} vs quadrature {i}"
        );
    }
    for (c1, c2) in [(1.0, 2.0), (0.5, 3.0), (2.0, 5.0), (1.5, 1.6)] {
        let a = reliability(&ReliabilityQuery::new(c1, c2).unwrap()).unwrap();
        let b = reliability(&ReliabilityQuery::new(c2, c1).unwrap()).unwrap();
        ensure!(
            (a + b - 1.0).abs() <= 1e-10,
            "reflection ({c1},{c2}): {a} + {b}"
        );
    }
    for c in [0.3, 1.0, 7.3] {
        let r = reliability(&ReliabilityQuery::new(c, c).unwrap()).unwrap();
        ensure!((r - 0.5).abs() <= 1e-12, "R({c},{c}) = {r}");
    }
    let lomax = make_baseline(Family::Lomax, &[1.0, 1.0]).unwrap();
    let x = WeibullR::new(2.0, 1.0, lomax).unwrap();
    let y = WeibullR::new(1.0, 1.0, lomax).unwrap();
    let r = reliability_between(&x, &y).unwrap();
    let n = 1_000_000;
    let base = RandomSource::new(2024);
    let xs = x.sample(n, &mut base.substream(0));
    let ys = y.sample(n, &mut base.substream(1));
    let wins = xs.iter().zip(&ys).filter(|(a, b)| a > b).count();
    let empirical = wins as f64 / n as f64;
    let band = 3.0 * (0.25 / n as f64).sqrt();
    ensure!(
        (empirical - r).abs() <= band,
        "Monte Carlo {empirical} vs {r} (band {band})"
    );
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    Ok(format!(
        "series-quadrature max diff {worst_series:.2e}; MC {empirical:.5} vs {r:.5}; {elapsed:.2?}"
    ))
}

fn records() -> Check {
    let models = [
        ("WLD(1,1,2)", dist(2.0, 1.0, Family::Lomax, &[1.0, 1.0])),
        (
            "Weibull-exponential",
            dist(1.5, 1.0, Family::Exponential, &[1.0]),
        ),
    ];
    let mut worst: f64 = 0.0;
    for (name, d) in &models {
        for (m, n) in [(1, 2), (2, 4), (3, 7), (5, 12)] {
            let q = RecordQuery::new(m, n).unwrap();
            for i in 0..20 {
                let w = gamma_quantile_integer(m, (i as f64 + 0.5) / 20.0);
                let x = d.inverse_cumulative_hazard(w);
                let series = record_marginal_pdf_series(d, &q, x)
                    .map_err(|e| format!("{name} ({m},{n}) x={x}: {e}"))?;
                let closed = record_marginal_pdf_closed(d, m, x).unwrap();
                let e = rel_err(series, closed);
                worst = worst.max(e);
                ensure!(
                    e <= 1e-9,
                    "{name} ({m},{n}) x={x}: series {series} vs closed {closed}"
                );
            }
        }
        let w_edges = [
            0.0, 1e-4, 1e-2, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0,
        ];
        let x_edges: Vec<f64> = w_edges
            .iter()
            .map(|&w| d.inverse_cumulative_hazard(w))
            .collect();
        for m in [1, 2, 3, 5] {
            let mass = panels(&|x| record_marginal_pdf_closed(d, m, x).unwrap(), &x_edges);
            ensure!(
                (mass - 1.0).abs() <= 1e-8,
                "{name} m={m}: marginal mass {mass}"
            );
        }
    }

    // Second records from simulated i.i.d. streams.
    let d = &models[0].1;
    let mut rng = RandomSource::new(77);
    let realizations = 10_000;
    let mut draws = Vec::with_capacity(realizations);
    for _ in 0..realizations {
        let first = rng.uniform();
        let mut next = None;
        for _ in 0..10_000_000u64 {
            let u = rng.uniform();
            if u > first {
                next = Some(u);
                break;
            }
        }
        // A stream that has not produced a record yet continues with the
        // law of its next record: uniform above the current one.
        let u = next.unwrap_or_else(|| first + (1.0 - first) * rng.uniform());
        draws.push(d.quantile(u).unwrap());
    }
    let bins = 20;
    let edges: Vec<f64> = (0..=bins)
        .map(|i| match i {
            0 => d.support().lower,
            i if i == bins => f64::INFINITY,
            i => d.inverse_cumulative_hazard(gamma_quantile_integer(2, i as f64 / bins as f64)),
        })
        .collect();
    let mut observed = vec![0usize; bins];
    for &x in &draws {
        let k = edges[1..bins].partition_point(|&e| e <= x);
        observed[k] += 1;
    }
    let far = d.inverse_cumulative_hazard(200.0);
    let mut chi2 = 0.0;
    for k in 0..bins {
        let hi = edges[k + 1].min(far);
        let mass = panels(
            &|x| record_marginal_pdf_closed(d, 2, x).unwrap(),
            &[edges[k], hi],
        );
        let expected = mass * realizations as f64;
        chi2 += (observed[k] as f64 - expected).powi(2) / expected;
    }
    let p_value = chi_square_sf(chi2, (bins - 1) as u32);
    ensure!(
        p_value > 0.01,
        "stream histogram chi2 = {chi2:.2}, p = {p_value:.4}"
    );
    Ok(format!(
        "series/closed max rel {worst:.2e}; chi2 = {chi2:.2}, p = {p_value:.3}"
    ))
}

fn mc_entropy(d: &WeibullR, n: usize, seed: u64) -> (f64, f64) {
    let xs = d.sample(n, &mut RandomSource::new(seed));
    let vals: Vec<f64> = xs.iter().map(|&x| -d.ln_pdf(x)).collect();
    let mean = vals.iter().sum::<f64>() / n as f64;
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

fn entropy() -> Check {
    let q = QuadratureSpec::default();
    let mut worst: f64 = 0.0;
    for (c, gamma, lambda) in [
        (1.0, 1.0, 1.0),
        (2.0, 1.0, 1.0),
        (0.7, 2.0, 0.5),
        (3.5, 0.7, 2.0),
    ] {
        let d = dist(c, gamma, Family::Exponential, &[lambda]);
        let scale = gamma / lambda;
        let want = EULER * (1.0 - 1.0 / c) + (scale / c).ln() + 1.0;
        let got = shannon_entropy(&d, &q).map_err(|e| e.to_string())?.value;
        worst = worst.max((got - want).abs());
        ensure!(
            (got - want).abs() <= 1e-8,
            "Weibull(c={c}) entropy {got} vs {want}"
        );
    }
    let mut notes = Vec::new();
    for (name, d, seed) in [
        ("WLD", dist(2.0, 1.0, Family::Lomax, &[1.0, 1.0]), 5),
        (
            "Weibull-normal",
            dist(2.0, 1.0, Family::Normal, &[0.0, 1.0]),
            6,
        ),
    ] {
        let eta = shannon_entropy(&d, &q).map_err(|e| e.to_string())?.value;
        let (mean, se) = mc_entropy(&d, 1_000_000, seed);
        ensure!(
            (eta - mean).abs() <= 3.0 * se,
            "{name}: {eta} vs MC {mean} +/- {se}"
        );
        notes.push(format!("{name} {:.2} se", (eta - mean).abs() / se));
    }
    Ok(format!(
        "closed-form max diff {worst:.2e}; MC: {}",
        notes.join(", ")
    ))
}

fn u_space_identities() -> Check {
    let q = QuadratureSpec::default();
    let mut worst: f64 = 0.0;
    for d in all_settings() {
        let (c, gamma) = (d.c(), d.gamma());
        let one = expect(&d, |x| d.cumulative_hazard(x).unwrap_or(f64::NAN), &q)
            .map_err(|e| e.to_string())?;
        let log_mean = expect(&d, |x| (-d.baseline().log_survival(x) / gamma).ln(), &q)
            .map_err(|e| format!("{d:?}: {e}"))?;
        let e1 = (one.value - 1.0).abs();
        let e2 = (log_mean.value + EULER / c).abs();
        worst = worst.max(e1).max(e2);
        ensure!(e1 <= 1e-8, "{d:?}: E[(H/gamma)^c] = {}", one.value);
        ensure!(
            e2 <= 1e-8,
            "{d:?}: E[ln(H/gamma)] = {} vs {}",
            log_mean.value,
            -EULER / c
        );
    }
    Ok(format!("18 settings, max deviation {worst:.2e}"))
}

fn discrimination_signs() -> Check {
    let (k, theta, c, gamma) = (1.5, 1.0, 2.0, 1.0);
    let d1 = dist(c, gamma, Family::Lomax, &[k, 2.0 * theta]);
    let d2 = dist(c, gamma, Family::Lomax, &[k, theta]);
    let sample = d1.sample(10_000, &mut RandomSource::new(404));
    let mut holds = 0;
    let mut total = 0.0;
    for &x in &sample {
        let t = discrimination_terms(x, &d1, &d2).map_err(|e| e.to_string())?;
        if t.scaled_cumhaz_1 <= t.scaled_cumhaz_2 && t.log_survival_ratio <= 0.0 {
            holds += 1;
        }
        total += t.statistic(c);
    }
    ensure!(
        holds == sample.len(),
        "both inequalities hold at {holds} of {} points",
        sample.len()
    );
    Ok(format!(
        "{holds}/{} points satisfy both inequalities; mean D = {:.4}",
        sample.len(),
        total / sample.len() as f64
    ))
}

fn grid_argmax(d: &WeibullR) -> f64 {
    let lo = d.quantile(1e-6).unwrap();
    let hi = d.quantile(1.0 - 1e-6).unwrap();
    let scan = |a: f64, b: f64| -> (f64, f64) {
        let n = 10_000;
        let step = (b - a) / (n - 1) as f64;
        (0..n)
            .map(|i| a + step * i as f64)
            .map(|x| (x, d.ln_pdf(x)))
            .fold((a, f64::NEG_INFINITY), |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            })
            .pipe(|(x, _)| (x - step, x + step))
    };
    let (a, b) = scan(lo, hi);
    let (a, b) = scan(a.max(lo), b.min(hi));
    0.5 * (a + b)
}

trait Pipe: Sized {
    fn pipe<T>(self, f: impl FnOnce(Self) -> T) -> T {
        f(self)
    }
}
impl<T> Pipe for T {}

fn modes() -> Check {
    let unimodal = [
        dist(2.0, 1.0, Family::Lomax, &[1.0, 1.0]),
        dist(2.0, 1.0, Family::Exponential, &[1.0]),
        dist(1.5, 1.0, Family::Normal, &[5.0, 1.0]),
        dist(1.5, 1.0, Family::Weibull, &[2.0, 1.0]),
        dist(3.0, 1.0, Family::Pareto, &[2.0, 1.0]),
        dist(4.0, 1.0, Family::Lomax, &[3.0, 2.0]),
    ];
    let mut worst: f64 = 0.0;
    for d in &unimodal {
        let m = d.mode().ok_or_else(|| format!("{d:?}: no mode found"))?;
        let oracle = grid_argmax(d);
        let e = rel_err(m, oracle);
        worst = worst.max(e);
        ensure!(e <= 1e-4, "{d:?}: mode {m} vs grid {oracle}");
    }
    let monotone = [
        dist(1.0, 1.0, Family::Exponential, &[1.0]),
        dist(0.5, 1.0, Family::Exponential, &[2.0]),
        dist(1.0, 1.0, Family::Lomax, &[1.0, 1.0]),
        dist(1.0, 1.0, Family::Pareto, &[2.0, 1.0]),
    ];
    for d in &monotone {
        ensure!(
            d.mode().is_none(),
            "{d:?}: expected no interior mode, got {:?}",
            d.mode()
        );
    }
    Ok(format!("6 unimodal (max rel {worst:.2e}), 4 monotone"))
}

fn tail_asymptotics() -> Check {
    let mut worst: f64 = 0.0;
    for c in [0.5, 2.0, 3.0] {
        for gamma in [1.0, 2.0] {
            for (d, x) in [
                (dist(c, gamma, Family::Normal, &[1.0, 2.0]), 1.0 - 8.0 * 2.0),
                (dist(c, gamma, Family::Cauchy, &[1.5]), -1e3 * 1.5),
            ] {
                let a = d.tail_asymptote(x).map_err(|e| e.to_string())?;
                let r1 = d.pdf(x) / a.pdf_asymptote;
                let r2 = d.hazard(x).unwrap() / a.hazard_asymptote;
                worst = worst.max((r1 - 1.0).abs()).max((r2 - 1.0).abs());
                ensure!((r1 - 1.0).abs() <= 1e-3, "{d:?} at {x}: pdf ratio {r1}");
                ensure!((r2 - 1.0).abs() <= 1e-3, "{d:?} at {x}: hazard ratio {r2}");
            }
        }
    }
    Ok(format!("12 cases, max |ratio-1| = {worst:.2e}"))
}

fn fit_recovery() -> Check {
    let start = Instant::now();
    let truth = dist(2.0, 1.0, Family::Lomax, &[1.0, 1.0]);
    // The pair (c, beta) is estimated with theta at its known value.
    let mut spec = FitSpec::new(Family::Lomax);
    spec.set_free(&["c", "k"]).map_err(|e| e.to_string())?;
    spec.set_init("theta", 1.0).map_err(|e| e.to_string())?;
    let within = |c: f64, beta: f64| (c - 2.0).abs() <= 0.2 && (beta - 1.0).abs() <= 0.1;
    let mut hits = 0;
    let mut hits_theta_free = 0;
    let mut lines = Vec::new();
    for seed in 0..20u64 {
        let data = truth.sample(5000, &mut RandomSource::new(1000 + seed));
        let fit = fit_mle(&data, &spec, &RandomSource::new(seed)).map_err(|e| e.to_string())?;
        let (c, beta) = (fit.params.c, fit.baseline.params()[0]);
        hits += within(c, beta) as usize;
        lines.push(format!("({c:.3},{beta:.3})"));
        let wide = fit_mle(
            &data,
            &FitSpec::new(Family::Lomax),
            &RandomSource::new(seed),
        )
        .map_err(|e| e.to_string())?;
        hits_theta_free += within(wide.params.c, wide.baseline.params()[0]) as usize;
    }
    let elapsed = start.elapsed();
    ensure!(hits >= 18, "{hits}/20 within 10%: {}", lines.join(" "));
    ensure!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    Ok(format!(
        "{hits}/20 within 10% (theta also free: {hits_theta_free}/20), {elapsed:.2?}"
    ))
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_weibull-r"))
        .args(args)
        .output()
        .expect("spawn cli");
    (
        out.status.code().unwrap_or(-1),
        out.stdout,
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn cli_contract() -> Check {
    let golden_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let dist_args = ["--c", "2", "--gamma", "1", "--baseline", "lomax", "1", "1"];
    let with = |extra: &[&'static str]| extra.to_vec();
    let cases: Vec<(&str, Vec<&str>)> = vec![
        (
            "sample_lomax_seed7.csv",
            [&["sample"][..], &dist_args, &["--n", "25", "--seed", "7"]].concat(),
        ),
        (
            "eval_lomax_cdf.csv",
            with(&[
                "eval",
                "--c",
                "1",
                "--gamma",
                "1",
                "--baseline",
                "lomax",
                "1",
                "1",
                "--what",
                "cdf",
                "--points",
                "1",
            ]),
        ),
        (
            "plotdata_wld.csv",
            [&["plotdata"][..], &dist_args, &["--grid", "0:5:11"]].concat(),
        ),
        (
            "records_sample_seed3.json",
            [
                &["records"][..],
                &dist_args,
                &[
                    "--m", "3", "--sample", "10", "--seed", "3", "--format", "json",
                ],
            ]
            .concat(),
        ),
        (
            "reliability_equal.csv",
            with(&["reliability", "--c1", "2", "--c2", "2"]),
        ),
    ];
    for (file, args) in &cases {
        let (code1, out1, err1) = run_cli(args);
        let (code2, out2, _) = run_cli(args);
        ensure!(
            code1 == 0 && code2 == 0,
            "{file}: exit {code1}/{code2}: {err1}"
        );
        ensure!(out1 == out2, "{file}: two runs differ");
        let golden = std::fs::read(golden_dir.join(file)).map_err(|e| format!("{file}: {e}"))?;
        ensure!(
            out1 == golden,
            "{file}: output differs from golden file:\n{}",
            String::from_utf8_lossy(&out1)
        );
    }
    let usage: Vec<Vec<&str>> = vec![
        [
            &["eval"][..],
            &dist_args,
            &["--what", "pdf", "--grid", "5:1:10"],
        ]
        .concat(),
        [
            &["eval"][..],
            &dist_args,
            &["--what", "pdf", "--grid", "0:1:1"],
        ]
        .concat(),
        with(&[
            "eval",
            "--c",
            "1",
            "--gamma",
            "1",
            "--baseline",
            "gumbel",
            "1",
            "--what",
            "pdf",
            "--points",
            "1",
        ]),
        with(&[
            "eval",
            "--c",
            "-1",
            "--gamma",
            "1",
            "--baseline",
            "lomax",
            "1",
            "1",
            "--what",
            "pdf",
            "--points",
            "1",
        ]),
        with(&[
            "eval",
            "--c",
            "1",
            "--gamma",
            "1",
            "--baseline",
            "lomax",
            "1",
            "--what",
            "pdf",
            "--points",
            "1",
        ]),
        [
            &["eval"][..],
            &dist_args,
            &["--what", "quantile", "--points", "1.5"],
        ]
        .concat(),
        [&["sample"][..], &dist_args, &["--n", "10"]].concat(),
        [&["sample"][..], &dist_args, &["--n", "-3", "--seed", "1"]].concat(),
        with(&["reliability", "--c1", "0", "--c2", "1"]),
        with(&[
            "fit",
            "--input",
            "/nonexistent/data.csv",
            "--family",
            "lomax",
            "--seed",
            "1",
        ]),
        with(&["frobnicate"]),
    ];
    for args in &usage {
        let (code, _, err) = run_cli(args);
        ensure!(code == 2, "{args:?}: expected exit 2, got {code} ({err})");
        ensure!(!err.is_empty(), "{args:?}: no message on stderr");
    }
    let numerical: Vec<Vec<&str>> = vec![
        with(&[
            "moments",
            "--c",
            "1",
            "--gamma",
            "1",
            "--baseline",
            "cauchy",
            "1",
            "--order",
            "1",
        ]),
        with(&[
            "reliability",
            "--c1",
            "1",
            "--c2",
            "1.5",
            "--method",
            "series",
        ]),
        with(&[
            "records",
            "--c",
            "1",
            "--gamma",
            "1",
            "--baseline",
            "exponential",
            "1",
            "--m",
            "5",
            "--n",
            "12",
            "--form",
            "series",
            "--pdf-at",
            "80",
        ]),
    ];
    for args in &numerical {
        let (code, _, err) = run_cli(args);
        ensure!(code == 3, "{args:?}: expected exit 3, got {code} ({err})");
    }
    Ok(format!(
        "{} golden files stable; {} usage and {} numerical error cases",
        cases.len(),
        usage.len(),
        numerical.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 12] = [
        ("normalization", normalization),
        ("reduction oracles", reductions),
        ("quantile/cdf round trip", roundtrip),
        ("stress-strength reliability", stress_strength),
        ("record values", records),
        ("entropy", entropy),
        ("exponential-scale identities", u_space_identities),
        ("discrimination sign structure", discrimination_signs),
        ("mode", modes),
        ("lower-tail asymptotics", tail_asymptotics),
        ("fit recovery", fit_recovery),
        ("cli golden files and exit codes", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match std::panic::catch_unwind(check) {
            Ok(Ok(detail)) => println!("PASS [{:>2}] {name}: {detail}", i + 1),
            Ok(Err(detail)) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {detail}", i + 1);
            }
            Err(_) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: panicked", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
