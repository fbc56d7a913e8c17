//! The Weibull-R distribution: a Weibull(c, γ) law applied to the cumulative
//! hazard of a baseline R, with cdf F(x) = 1 − exp{−[H_R(x)/γ]^c}.
//!
//! Everything is expressed through the baseline log-survival function, so
//! H_R(x) = −ln(1 − F_R(x)) is never formed by subtracting the cdf from one.

use crate::baseline::{Baseline, BaselineDistribution, Support};
use crate::error::{Error, Result};
use crate::random::RandomSource;

/// Outer Weibull shape `c` and scale `gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeibullRParams {
    pub c: f64,
    pub gamma: f64,
}

impl WeibullRParams {
    pub fn new(c: f64, gamma: f64) -> Result<Self> {
        for (field, value) in [("c", c), ("gamma", gamma)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Parameter {
                    field,
                    value,
                    reason: "must be positive and finite",
                });
            }
        }
        Ok(WeibullRParams { c, gamma })
    }
}

/// Limiting forms of the pdf and hazard as x → −∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailAsymptote {
    pub pdf_asymptote: f64,
    pub hazard_asymptote: f64,
}

/// Weibull-R distribution over a baseline `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeibullR<B = Baseline> {
    params: WeibullRParams,
    baseline: B,
}

impl<B: BaselineDistribution> WeibullR<B> {
    pub fn new(c: f64, gamma: f64, baseline: B) -> Result<Self> {
        Ok(WeibullR {
            params: WeibullRParams::new(c, gamma)?,
            baseline,
        })
    }

    pub fn from_params(params: WeibullRParams, baseline: B) -> Self {
        WeibullR { params, baseline }
    }

    pub fn params(&self) -> WeibullRParams {
        self.params
    }

    pub fn c(&self) -> f64 {
        self.params.c
    }

    pub fn gamma(&self) -> f64 {
        self.params.gamma
    }

    pub fn baseline(&self) -> &B {
        &self.baseline
    }

    pub fn support(&self) -> Support {
        self.baseline.support()
    }

    /// ln(H_R(x)/γ).
    fn ln_scaled_baseline_hazard(&self, x: f64) -> f64 {
        self.baseline.ln_cumulative_hazard(x) - self.params.gamma.ln()
    }

    /// [H_R(x)/γ]^c without support checks.
    pub(crate) fn cumulative_hazard_raw(&self, x: f64) -> f64 {
        (self.params.c * self.ln_scaled_baseline_hazard(x)).exp()
    }

    /// ln of the hazard without support checks.
    pub(crate) fn ln_hazard_raw(&self, x: f64) -> f64 {
        let WeibullRParams { c, gamma } = self.params;
        let mut out = c.ln() - gamma.ln() + self.baseline.ln_hazard(x);
        if c != 1.0 {
            out += (c - 1.0) * self.ln_scaled_baseline_hazard(x);
        }
        out
    }

    fn check_in_support(&self, x: f64) -> Result<()> {
        if !self.support().contains(x) || x.is_nan() {
            return Err(Error::domain(format!("x = {x} outside the support")));
        }
        Ok(())
    }

    /// Log density. Outside the support, and at infinite x, returns −∞.
    pub fn ln_pdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if !x.is_finite() || !self.support().contains(x) {
            return f64::NEG_INFINITY;
        }
        self.ln_hazard_raw(x) - self.cumulative_hazard_raw(x)
    }

    /// Density; 0 outside the support. At a finite lower endpoint this is the
    /// one-sided limit (possibly +∞ when c < 1).
    pub fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        let s = self.support();
        if x <= s.lower {
            return 0.0;
        }
        if x >= s.upper {
            return 1.0;
        }
        -(-self.cumulative_hazard_raw(x)).exp_m1()
    }

    pub fn survival(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        let s = self.support();
        if x <= s.lower {
            return 1.0;
        }
        if x >= s.upper {
            return 0.0;
        }
        (-self.cumulative_hazard_raw(x)).exp()
    }

    /// Hazard rate (c/γ) h_R(x) [H_R(x)/γ]^{c−1}.
    pub fn hazard(&self, x: f64) -> Result<f64> {
        self.check_in_support(x)?;
        Ok(self.ln_hazard_raw(x).exp())
    }

    /// Cumulative hazard [H_R(x)/γ]^c = −ln(1 − F(x)).
    pub fn cumulative_hazard(&self, x: f64) -> Result<f64> {
        self.check_in_support(x)?;
        Ok(self.cumulative_hazard_raw(x))
    }

    /// The x at which the cumulative hazard equals `u`; this is the map from
    /// the standard-exponential scale back to the sample space.
    pub fn inverse_cumulative_hazard(&self, u: f64) -> f64 {
        let WeibullRParams { c, gamma } = self.params;
        self.baseline
            .inverse_cumulative_hazard(gamma * u.powf(1.0 / c))
    }

    /// Q(p) = Q_R(1 − exp{−γ[−ln(1 − p)]^{1/c}}).
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!(
                "probability must lie in [0,1], got {p}"
            )));
        }
        Ok(self.inverse_cumulative_hazard(-(-p).ln_1p()))
    }

    /// `n` draws by inverse transform of standard exponentials.
    pub fn sample(&self, n: usize, rng: &mut RandomSource) -> Vec<f64> {
        (0..n)
            .map(|_| self.inverse_cumulative_hazard(rng.standard_exponential()))
            .collect()
    }

    /// d/dx ln f(x): the left side of the mode equation.
    pub fn mode_equation(&self, x: f64) -> f64 {
        let WeibullRParams { c, gamma } = self.params;
        let h_r = self.baseline.hazard(x);
        let big_h = -self.baseline.log_survival(x);
        let mut out = self.baseline.d_ln_pdf(x) + h_r;
        if c != 1.0 {
            out += (c - 1.0) * h_r / big_h;
        }
        out - c * gamma.powf(-c) * big_h.powf(c - 1.0) * h_r
    }

    /// Interior mode of the density, or `None` when the density is monotone.
    ///
    /// The sign of the mode equation is scanned over a quantile grid (1000
    /// logit-spaced probabilities, extended toward the lower tail when no
    /// crossing is found) and every + → − crossing is refined by bisection to
    /// |Δx| ≤ 1e-10·scale. The crossing with the highest density wins.
    pub fn mode(&self) -> Option<f64> {
        const GRID: usize = 1000;
        let scan = |t_lo: f64, t_hi: f64| -> Vec<(f64, f64)> {
            (0..GRID)
                .filter_map(|i| {
                    let t = t_lo + (t_hi - t_lo) * i as f64 / (GRID - 1) as f64;
                    let p = 1.0 / (1.0 + (-t).exp());
                    let x = self.quantile(p).ok()?;
                    let g = self.mode_equation(x);
                    (x.is_finite() && g.is_finite()).then_some((x, g))
                })
                .collect()
        };
        let mut points = scan(-23.0, 23.0);
        let mut best = self.best_crossing(&points);
        if best.is_none() {
            points = scan(-69.0, -23.0);
            best = self.best_crossing(&points);
        }
        best
    }

    fn best_crossing(&self, points: &[(f64, f64)]) -> Option<f64> {
        points
            .windows(2)
            .filter(|w| w[0].1 > 0.0 && w[1].1 <= 0.0 && w[0].0 < w[1].0)
            .map(|w| self.refine_mode(w[0].0, w[1].0))
            .max_by(|a, b| self.ln_pdf(*a).total_cmp(&self.ln_pdf(*b)))
    }

    fn refine_mode(&self, mut lo: f64, mut hi: f64) -> f64 {
        let scale = lo.abs().max(hi.abs()).max(hi - lo);
        while hi - lo > 1e-10 * scale {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.mode_equation(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Lower-tail approximations of the pdf and hazard,
    /// (c/γ^c) f_R F_R^{c−1} exp(−γ^{−c} F_R^c) and (c/γ^c) f_R F_R^{c−1}.
    /// Only defined for baselines supported on an interval unbounded below.
    pub fn tail_asymptote(&self, x: f64) -> Result<TailAsymptote> {
        if self.support().is_bounded_below() {
            return Err(Error::domain(
                "tail asymptote requires a support unbounded below",
            ));
        }
        if !x.is_finite() {
            return Err(Error::domain(format!("x must be finite, got {x}")));
        }
        let WeibullRParams { c, gamma } = self.params;
        let cdf_r = self.baseline.cdf(x);
        let ln_hazard = c.ln() - c * gamma.ln() + self.baseline.ln_pdf(x) + (c - 1.0) * cdf_r.ln();
        let ln_pdf = ln_hazard - (cdf_r / gamma).powf(c);
        Ok(TailAsymptote {
            pdf_asymptote: ln_pdf.exp(),
            hazard_asymptote: ln_hazard.exp(),
        })
    }
}
