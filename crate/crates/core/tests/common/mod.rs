#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

use weibull_r::{make_baseline, Family, WeibullR};

#[allow(clippy::excessive_precision)]
pub const EULER: f64 = 0.577_215_664_901_532_860_6;

pub fn dist(c: f64, gamma: f64, family: Family, params: &[f64]) -> WeibullR {
    WeibullR::new(c, gamma, make_baseline(family, params).unwrap()).unwrap()
}

/// Tanh-sinh quadrature on [a, b] with step 2^-7 over t in [-4, 4].
pub fn tanh_sinh(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let h = 1.0 / 128.0;
    let mut sum = 0.0;
    for i in -512..=512 {
        let t = i as f64 * h;
        let s = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * s.abs()).exp();
        let dist = half * 2.0 * e / (1.0 + e);
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
}

pub fn panels(f: &dyn Fn(f64) -> f64, edges: &[f64]) -> f64 {
    edges
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| tanh_sinh(f, w[0], w[1]))
        .sum()
}

/// A representative setting per baseline family.
pub fn one_per_family() -> Vec<WeibullR> {
    vec![
        dist(1.5, 1.0, Family::Pareto, &[2.0, 1.0]),
        dist(2.0, 1.0, Family::Lomax, &[1.0, 1.0]),
        dist(2.0, 1.0, Family::Cauchy, &[1.0]),
        dist(2.0, 1.0, Family::Normal, &[0.0, 1.0]),
        dist(1.5, 0.8, Family::Weibull, &[2.0, 1.0]),
        dist(0.7, 1.2, Family::Exponential, &[1.0]),
    ]
}
