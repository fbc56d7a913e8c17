//! Expectations under a Weibull-R law, computed on the standard-exponential
//! scale: with u = [H_R(x)/γ]^c,
//!
//! E[g(X)] = ∫₀^∞ e^{−u} g(Q_R(1 − e^{−γ u^{1/c}})) du.
//!
//! Gauss–Laguerre handles the e^{−u} weight exactly. When the N- and 2N-node
//! rules disagree, the integral is recomputed adaptively on [0, 40] and then
//! on successively doubled tail segments up to u = 640; a tail that refuses
//! to shrink is reported as divergence.

use crate::baseline::BaselineDistribution;
use crate::dist::WeibullR;
use crate::error::{Error, Result};
use crate::quadrature::{gauss_laguerre, integrate_adaptive};
use crate::specfun::EULER_GAMMA;

/// Quadrature controls for [`expect`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub laguerre_nodes: usize,
    pub adaptive_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            laguerre_nodes: 64,
            adaptive_tol: 1e-8,
            max_subdivisions: 200,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.laguerre_nodes < 2 {
            return Err(Error::Parameter {
                field: "laguerre_nodes",
                value: self.laguerre_nodes as f64,
                reason: "need at least 2 nodes",
            });
        }
        if !(self.adaptive_tol.is_finite() && self.adaptive_tol > 0.0) {
            return Err(Error::Parameter {
                field: "adaptive_tol",
                value: self.adaptive_tol,
                reason: "must be positive",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    GaussLaguerre,
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectationResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub method: Method,
}

/// Truncation points of the adaptive fallback.
const FIRST_CUT: f64 = 40.0;
const LAST_CUT: f64 = 640.0;

/// E[g(X)] for X ~ `d`.
pub fn expect<B, G>(d: &WeibullR<B>, g: G, q: &QuadratureSpec) -> Result<ExpectationResult>
where
    B: BaselineDistribution,
    G: Fn(f64) -> f64,
{
    q.validate()?;
    // Far out on the exponential scale the sample-space point can overflow;
    // g is then evaluated at the largest finite value instead.
    let integrand = |u: f64| g(d.inverse_cumulative_hazard(u).clamp(-f64::MAX, f64::MAX));

    let coarse = gauss_laguerre(q.laguerre_nodes).integrate(integrand);
    let fine = gauss_laguerre(2 * q.laguerre_nodes).integrate(integrand);
    if coarse.is_finite() && fine.is_finite() {
        let diff = (fine - coarse).abs();
        if diff <= q.adaptive_tol * fine.abs().max(1.0) {
            return Ok(ExpectationResult {
                value: fine,
                abs_error_estimate: diff,
                method: Method::GaussLaguerre,
            });
        }
    }

    let weighted = |u: f64| {
        let w = (-u).exp();
        if w == 0.0 {
            0.0
        } else {
            w * integrand(u)
        }
    };
    let tol = q.adaptive_tol;
    let as_divergence = |e: Error, last: f64, previous: f64| match e {
        Error::Divergence { .. } | Error::Domain(_) => Error::Divergence { last, previous },
        other => other,
    };

    let head = integrate_adaptive(
        weighted,
        0.0,
        FIRST_CUT,
        0.1 * tol,
        0.1 * tol,
        q.max_subdivisions,
    )
    .map_err(|e| as_divergence(e, fine, coarse))?;
    let mut total = head.value;
    let mut error = head.abs_error;
    let mut lo = FIRST_CUT;
    while lo < LAST_CUT {
        let hi = 2.0 * lo;
        let abs_tol = 0.1 * tol * total.abs().max(1.0);
        let piece = integrate_adaptive(weighted, lo, hi, abs_tol, 0.1 * tol, q.max_subdivisions)
            .map_err(|e| as_divergence(e, total, total))?;
        let previous = total;
        total += piece.value;
        error += piece.abs_error;
        if !total.is_finite() {
            return Err(Error::Divergence {
                last: total,
                previous,
            });
        }
        if piece.value.abs() <= tol * total.abs().max(1.0) {
            return Ok(ExpectationResult {
                value: total,
                abs_error_estimate: error + piece.value.abs(),
                method: Method::Adaptive,
            });
        }
        lo = hi;
    }
    Err(Error::Divergence {
        last: total,
        previous: total - 0.0,
    })
}

/// r-th raw moment E[X^r].
pub fn moment<B: BaselineDistribution>(
    d: &WeibullR<B>,
    r: u32,
    q: &QuadratureSpec,
) -> Result<ExpectationResult> {
    if r == 0 {
        return Err(Error::Precondition(
            "moment order r must be at least 1".into(),
        ));
    }
    let r = i32::try_from(r).map_err(|_| Error::Precondition("moment order too large".into()))?;
    expect(d, |x| x.powi(r), q)
}

/// Shannon (differential) entropy E[−ln f(X)].
///
/// The outer-Weibull terms are exact on the exponential scale:
/// E[ln(H_R(X)/γ)] = −γ_E/c and E[(H_R(X)/γ)^c] = 1, so only E[ln h_R(X)]
/// needs quadrature.
pub fn shannon_entropy<B: BaselineDistribution>(
    d: &WeibullR<B>,
    q: &QuadratureSpec,
) -> Result<ExpectationResult> {
    let (c, gamma) = (d.c(), d.gamma());
    let log_hazard = expect(d, |x| d.baseline().ln_hazard(x), q)?;
    let mean_log_scaled_hazard = -EULER_GAMMA / c;
    let mean_cumulative_hazard = 1.0;
    let value = -c.ln() + gamma.ln() - (c - 1.0) * mean_log_scaled_hazard - log_hazard.value
        + mean_cumulative_hazard;
    Ok(ExpectationResult {
        value,
        ..log_hazard
    })
}

/// Per-observation pieces of the entropy-difference statistic between two
/// Weibull-R models sharing (c, γ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscriminationTerms {
    /// ln(H_{R₂}(x) / H_{R₁}(x)) = ln(ln S_{R₂}(x) / ln S_{R₁}(x)).
    pub log_cumhaz_ratio: f64,
    /// ln(h_{R₂}(x) / h_{R₁}(x)).
    pub log_hazard_ratio: f64,
    /// [H_{R₁}(x)/γ]^c.
    pub scaled_cumhaz_1: f64,
    /// [H_{R₂}(x)/γ]^c.
    pub scaled_cumhaz_2: f64,
    /// ln(S_{R₂}(x) / S_{R₁}(x)).
    pub log_survival_ratio: f64,
}

impl DiscriminationTerms {
    /// Contribution of this observation to the statistic.
    pub fn statistic(&self, c: f64) -> f64 {
        (c - 1.0) * self.log_cumhaz_ratio + self.log_hazard_ratio + self.scaled_cumhaz_1
            - self.scaled_cumhaz_2
    }
}

fn check_shared_shape<B: BaselineDistribution>(d1: &WeibullR<B>, d2: &WeibullR<B>) -> Result<()> {
    if d1.params() != d2.params() {
        return Err(Error::Precondition(format!(
            "discrimination needs shared (c, gamma); got {:?} and {:?}",
            d1.params(),
            d2.params()
        )));
    }
    Ok(())
}

/// The statistic's ingredients at a single point `x`.
pub fn discrimination_terms<B: BaselineDistribution>(
    x: f64,
    d1: &WeibullR<B>,
    d2: &WeibullR<B>,
) -> Result<DiscriminationTerms> {
    check_shared_shape(d1, d2)?;
    if !(x.is_finite() && d1.support().contains_interior(x) && d2.support().contains_interior(x)) {
        return Err(Error::domain(format!(
            "sample point {x} lies outside a model support"
        )));
    }
    let (c, gamma) = (d1.c(), d1.gamma());
    let (b1, b2) = (d1.baseline(), d2.baseline());
    let (ls1, ls2) = (b1.log_survival(x), b2.log_survival(x));
    let (h1, h2) = (-ls1, -ls2);
    Ok(DiscriminationTerms {
        log_cumhaz_ratio: h2.ln() - h1.ln(),
        log_hazard_ratio: b2.ln_hazard(x) - b1.ln_hazard(x),
        scaled_cumhaz_1: (h1 / gamma).powf(c),
        scaled_cumhaz_2: (h2 / gamma).powf(c),
        log_survival_ratio: ls2 - ls1,
    })
}

/// Plug-in estimate of the entropy difference 𝒟₁,₂ over a sample.
///
/// Algebraically this equals the mean of ln f₂(xᵢ) − ln f₁(xᵢ).
pub fn discrimination_d<B: BaselineDistribution>(
    sample: &[f64],
    d1: &WeibullR<B>,
    d2: &WeibullR<B>,
) -> Result<f64> {
    check_shared_shape(d1, d2)?;
    if sample.is_empty() {
        return Err(Error::domain("sample is empty"));
    }
    let c = d1.c();
    let mut sum = 0.0;
    for &x in sample {
        sum += discrimination_terms(x, d1, d2)?.statistic(c);
    }
    Ok(sum / sample.len() as f64)
}
