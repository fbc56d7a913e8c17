//! Fixed distributions shared by the benchmarks.

use weibull_r::{make_baseline, Family, WeibullR};

/// One labelled setting per baseline family.
pub fn fixtures() -> Vec<(&'static str, WeibullR)> {
    [
        ("pareto", 1.5, 1.0, Family::Pareto, vec![2.0, 1.0]),
        ("lomax", 2.0, 1.0, Family::Lomax, vec![1.0, 1.0]),
        ("cauchy", 2.0, 1.0, Family::Cauchy, vec![1.0]),
        ("normal", 2.0, 1.0, Family::Normal, vec![0.0, 1.0]),
        ("weibull", 1.5, 0.8, Family::Weibull, vec![2.0, 1.0]),
        ("exponential", 0.7, 1.2, Family::Exponential, vec![1.0]),
    ]
    .into_iter()
    .map(|(label, c, gamma, family, params)| {
        let baseline = make_baseline(family, &params).expect("valid fixture");
        (
            label,
            WeibullR::new(c, gamma, baseline).expect("valid fixture"),
        )
    })
    .collect()
}
