mod common;

use proptest::prelude::*;
use weibull_r::reliability::reliability_quadrature;
use weibull_r::specfun::std_normal_cdf;
use weibull_r::{
    fit_mle, make_baseline, record_marginal_pdf_closed, Baseline, BaselineDistribution, Family,
    FitSpec, RandomSource, ReliabilityQuery,
};

use common::{dist, panels};

fn baselines() -> Vec<Baseline> {
    [
        (Family::Pareto, vec![0.7, 2.0]),
        (Family::Pareto, vec![3.0, 0.5]),
        (Family::Lomax, vec![1.0, 1.0]),
        (Family::Lomax, vec![4.0, 0.3]),
        (Family::Cauchy, vec![1.0]),
        (Family::Cauchy, vec![0.05]),
        (Family::Normal, vec![0.0, 1.0]),
        (Family::Normal, vec![-3.0, 7.0]),
        (Family::Weibull, vec![0.5, 1.0]),
        (Family::Weibull, vec![3.0, 2.5]),
        (Family::Exponential, vec![1.0]),
        (Family::Exponential, vec![12.0]),
    ]
    .into_iter()
    .map(|(f, p)| make_baseline(f, &p).unwrap())
    .collect()
}

#[test]
fn normal_cdf_grid_is_symmetric_and_monotone() {
    let grid: Vec<f64> = (0..=1600).map(|i| -8.0 + i as f64 * 0.01).collect();
    let values: Vec<f64> = grid.iter().map(|&z| std_normal_cdf(z).unwrap()).collect();
    assert!(values.windows(2).all(|w| w[1] >= w[0]));
    for &z in &grid {
        let sum = std_normal_cdf(z).unwrap() + std_normal_cdf(-z).unwrap();
        assert!((sum - 1.0).abs() <= 1e-15, "z={z}: {sum}");
    }
}

#[test]
fn baseline_log_survival_matches_survival() {
    for b in baselines() {
        for i in 0..1000 {
            let x = b.quantile((i as f64 + 0.5) / 1000.0);
            let (ls, s) = (b.log_survival(x), b.survival(x));
            assert!((ls.exp() - s).abs() <= 1e-12 * s.max(1.0), "{b:?} x={x}");
        }
    }
}

#[test]
fn baseline_quantile_round_trip() {
    for b in baselines() {
        for i in 0..=90 {
            // Log-spaced from 1e-9 up to 0.5, then mirrored toward 1.
            let t = 1e-9f64 * (0.5e9f64).powf(i as f64 / 90.0);
            for p in [t, 1.0 - t] {
                let back = b.cdf(b.quantile(p));
                assert!((back - p).abs() <= 1e-9, "{b:?} p={p}: {back}");
            }
        }
    }
}

#[test]
fn lomax_is_a_shifted_pareto() {
    for (k, theta) in [(0.5, 1.0), (2.0, 0.3), (5.0, 4.0)] {
        let lomax = make_baseline(Family::Lomax, &[k, theta]).unwrap();
        let pareto = make_baseline(Family::Pareto, &[k, theta]).unwrap();
        for c in [0.5, 1.0, 2.5] {
            let wld = dist(c, 1.3, Family::Lomax, &[k, theta]);
            let wpd = dist(c, 1.3, Family::Pareto, &[k, theta]);
            for i in 1..200 {
                let x = 0.05 * i as f64;
                let (a, b) = (lomax.cdf(x), pareto.cdf(x + theta));
                assert!((a - b).abs() <= 1e-14, "k={k} x={x}");
                let (a, b) = (wld.pdf(x), wpd.pdf(x + theta));
                assert!((a - b).abs() <= 1e-12 * b, "k={k} c={c} x={x}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn record_marginals_have_unit_mass() {
    let laws = [
        dist(2.0, 1.0, Family::Lomax, &[1.0, 1.0]),
        dist(1.5, 1.0, Family::Normal, &[0.0, 1.0]),
        dist(1.0, 1.0, Family::Exponential, &[1.0]),
    ];
    for d in &laws {
        for m in [1u32, 2, 3, 5] {
            // The record's cumulative hazard is Gamma(m, 1), so panel edges are
            // placed by mapping u-space points back; below u = 1e-12 the mass
            // is negligible.
            let edges: Vec<f64> = [1e-12, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 60.0]
                .iter()
                .map(|&u| d.inverse_cumulative_hazard(u))
                .collect();
            let f = |x: f64| record_marginal_pdf_closed(d, m, x).unwrap();
            let mass = panels(&f, &edges);
            assert!((mass - 1.0).abs() <= 1e-8, "{d:?} m={m}: {mass}");
        }
    }
}

#[test]
fn reliability_quadrature_is_monotone_on_a_grid() {
    let shapes = [0.2, 0.5, 0.9, 1.0, 1.1, 2.0, 5.0, 12.0];
    for &c1 in &shapes {
        let mut last = f64::INFINITY;
        for &c2 in &shapes {
            let r = reliability_quadrature(&ReliabilityQuery::new(c1, c2).unwrap()).unwrap();
            assert!((0.0..=1.0).contains(&r));
            assert!(r < last, "c1={c1} c2={c2}");
            last = r;
        }
        let same = reliability_quadrature(&ReliabilityQuery::new(c1, c1).unwrap()).unwrap();
        assert!((same - 0.5).abs() < 1e-12);
    }
}

#[test]
fn multi_start_history_never_decreases() {
    let data = dist(1.2, 1.0, Family::Normal, &[0.5, 2.0]).sample(300, &mut RandomSource::new(3));
    let mut spec = FitSpec::new(Family::Normal);
    spec.starts = 8;
    let fit = fit_mle(&data, &spec, &RandomSource::new(21)).unwrap();
    assert_eq!(fit.history.len(), 8);
    assert!(
        fit.history.windows(2).all(|w| w[1] >= w[0]),
        "{:?}",
        fit.history
    );
    assert_eq!(*fit.history.last().unwrap(), fit.log_likelihood);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn survival_times_exp_cumulative_hazard_is_one(
        family in prop::sample::select(Family::ALL.to_vec()),
        c in 0.3..5.0f64,
        gamma in 0.2..5.0f64,
        p in 0.001..0.999f64,
    ) {
        let d = dist(c, gamma, family, &family_params(family));
        let x = d.quantile(p).unwrap();
        prop_assume!(d.support().contains_interior(x));
        let product = d.survival(x) * d.cumulative_hazard(x).unwrap().exp();
        prop_assert!((product - 1.0).abs() <= 1e-12, "{product}");
    }

    #[test]
    fn hazard_is_the_derivative_of_cumulative_hazard(
        family in prop::sample::select(Family::ALL.to_vec()),
        c in 0.3..5.0f64,
        gamma in 0.2..5.0f64,
        p in 0.02..0.98f64,
    ) {
        let d = dist(c, gamma, family, &family_params(family));
        let x = d.quantile(p).unwrap();
        let room = x - d.support().lower;
        let h = (1e-5 * x.abs().max(1.0)).min(1e-4 * room);
        let fd = (d.cumulative_hazard(x + h).unwrap() - d.cumulative_hazard(x - h).unwrap()) / (2.0 * h);
        let hazard = d.hazard(x).unwrap();
        prop_assert!((hazard - fd).abs() <= 1e-6 * hazard.max(1.0), "x={x}: {hazard} vs {fd}");
    }
}

fn family_params(family: Family) -> Vec<f64> {
    match family {
        Family::Pareto => vec![2.0, 1.0],
        Family::Lomax => vec![1.5, 0.7],
        Family::Cauchy => vec![1.2],
        Family::Normal => vec![0.5, 2.0],
        Family::Weibull => vec![1.7, 0.8],
        Family::Exponential => vec![2.5],
    }
}
