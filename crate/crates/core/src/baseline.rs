//! Baseline distributions R: the inner law whose cumulative hazard is fed
//! through the outer Weibull.
//!
//! Every family supplies its log-survival function in closed form so that
//! H_R(x) = −ln(1 − F_R(x)) never has to be formed from the cdf.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::specfun;

/// Interval (lower, upper) on the extended real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub lower: f64,
    pub upper: f64,
}

impl Support {
    pub const REAL_LINE: Support = Support {
        lower: f64::NEG_INFINITY,
        upper: f64::INFINITY,
    };
    pub const POSITIVE: Support = Support {
        lower: 0.0,
        upper: f64::INFINITY,
    };

    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() || lower >= upper {
            return Err(Error::domain(format!("empty support ({lower}, {upper})")));
        }
        Ok(Support { lower, upper })
    }

    /// Closure of the support (endpoints evaluate to one-sided limits).
    pub fn contains(&self, x: f64) -> bool {
        x >= self.lower && x <= self.upper
    }

    pub fn contains_interior(&self, x: f64) -> bool {
        x > self.lower && x < self.upper
    }

    pub fn is_bounded_below(&self) -> bool {
        self.lower.is_finite()
    }
}

/// ln(x/s) without overflowing the quotient.
fn ln_ratio(x: f64, s: f64) -> f64 {
    let r = x / s;
    if r.is_finite() {
        r.ln()
    } else {
        x.ln() - s.ln()
    }
}

/// ln(1 + x/s) without overflowing the quotient.
fn ln_1p_ratio(x: f64, s: f64) -> f64 {
    let r = x / s;
    if r.is_finite() {
        r.ln_1p()
    } else {
        x.ln() - s.ln()
    }
}

/// Capability bundle of a continuous baseline distribution R.
///
/// Evaluation methods are total: below the support pdf/cdf are 0 and the
/// survival is 1, above it the cdf is 1. Callers that need a domain error
/// use [`baseline_log_survival`].
pub trait BaselineDistribution: fmt::Debug + Send + Sync {
    fn support(&self) -> Support;
    fn pdf(&self, x: f64) -> f64;
    fn ln_pdf(&self, x: f64) -> f64 {
        self.pdf(x).ln()
    }
    fn cdf(&self, x: f64) -> f64;
    fn survival(&self, x: f64) -> f64;
    /// ln(1 − F_R(x)) in closed form.
    fn log_survival(&self, x: f64) -> f64;
    fn hazard(&self, x: f64) -> f64;
    fn ln_hazard(&self, x: f64) -> f64 {
        self.hazard(x).ln()
    }
    /// ln H_R(x). The default takes the log of −ln(1 − F_R(x)), which fails
    /// once H_R(x) underflows.
    fn ln_cumulative_hazard(&self, x: f64) -> f64 {
        (-self.log_survival(x)).ln()
    }
    /// Q_R(p) for p in [0, 1]; the endpoints map to the support endpoints.
    fn quantile(&self, p: f64) -> f64;
    /// The x with −ln(1 − F_R(x)) = h, for h in [0, ∞]. Equivalent to
    /// Q_R(1 − e^{−h}) but computed without rounding 1 − e^{−h}.
    fn inverse_cumulative_hazard(&self, h: f64) -> f64;
    /// d/dx ln f_R(x). Defaults to a central difference.
    fn d_ln_pdf(&self, x: f64) -> f64 {
        let step = 1e-5 * x.abs().max(1.0);
        (self.ln_pdf(x + step) - self.ln_pdf(x - step)) / (2.0 * step)
    }
}

/// H_R(x) = −ln(1 − F_R(x)).
pub fn cumulative_hazard<B: BaselineDistribution + ?Sized>(b: &B, x: f64) -> f64 {
    -b.log_survival(x)
}

/// ln(1 − F_R(x)), rejecting points outside the support.
pub fn baseline_log_survival<B: BaselineDistribution + ?Sized>(b: &B, x: f64) -> Result<f64> {
    if !b.support().contains(x) {
        return Err(Error::domain(format!(
            "x = {x} outside the baseline support"
        )));
    }
    Ok(b.log_survival(x))
}

fn positive(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Parameter {
            field,
            value,
            reason: "must be positive and finite",
        })
    }
}

fn finite(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Parameter {
            field,
            value,
            reason: "must be finite",
        })
    }
}

/// −ln(1 − p), accurate for small p.
fn neg_log1m(p: f64) -> f64 {
    -(-p).ln_1p()
}

/// Pareto(k, θ): f(x) = kθ^k / x^{k+1} on x > θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pareto {
    k: f64,
    theta: f64,
}

impl Pareto {
    pub fn new(k: f64, theta: f64) -> Result<Self> {
        Ok(Pareto {
            k: positive("k", k)?,
            theta: positive("theta", theta)?,
        })
    }
    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn theta(&self) -> f64 {
        self.theta
    }
}

impl BaselineDistribution for Pareto {
    fn support(&self) -> Support {
        Support {
            lower: self.theta,
            upper: f64::INFINITY,
        }
    }
    fn pdf(&self, x: f64) -> f64 {
        if x < self.theta {
            0.0
        } else {
            self.ln_pdf(x).exp()
        }
    }
    fn ln_pdf(&self, x: f64) -> f64 {
        if x < self.theta {
            return f64::NEG_INFINITY;
        }
        self.k.ln() + self.k * self.theta.ln() - (self.k + 1.0) * x.ln()
    }
    fn cdf(&self, x: f64) -> f64 {
        -self.log_survival(x).exp_m1()
    }
    fn survival(&self, x: f64) -> f64 {
        self.log_survival(x).exp()
    }
    fn log_survival(&self, x: f64) -> f64 {
        if x <= self.theta {
            0.0
        } else {
            -self.k * ln_ratio(x, self.theta)
        }
    }
    fn hazard(&self, x: f64) -> f64 {
        if x < self.theta {
            0.0
        } else {
            self.k / x
        }
    }
    fn quantile(&self, p: f64) -> f64 {
        self.inverse_cumulative_hazard(neg_log1m(p))
    }
    fn inverse_cumulative_hazard(&self, h: f64) -> f64 {
        self.theta * (h / self.k).exp()
    }
    fn d_ln_pdf(&self, x: f64) -> f64 {
        -(self.k + 1.0) / x
    }
}

/// Lomax(k, θ): f(x) = (k/θ)(1 + x/θ)^{−k−1} on x > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lomax {
    k: f64,
    theta: f64,
}

impl Lomax {
    pub fn new(k: f64, theta: f64) -> Result<Self> {
        Ok(Lomax {
            k: positive("k", k)?,
            theta: positive("theta", theta)?,
        })
    }
    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn theta(&self) -> f64 {
        self.theta
    }
}

impl BaselineDistribution for Lomax {
    fn support(&self) -> Support {
        Support::POSITIVE
    }
    fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            self.ln_pdf(x).exp()
        }
    }
    fn ln_pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return f64::NEG_INFINITY;
        }
        (self.k / self.theta).ln() - (self.k + 1.0) * ln_1p_ratio(x, self.theta)
    }
    fn cdf(&self, x: f64) -> f64 {
        -self.log_survival(x).exp_m1()
    }
    fn survival(&self, x: f64) -> f64 {
        self.log_survival(x).exp()
    }
    fn log_survival(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -self.k * ln_1p_ratio(x, self.theta)
        }
    }
    fn hazard(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            self.k / (self.theta + x)
        }
    }
    fn quantile(&self, p: f64) -> f64 {
        self.inverse_cumulative_hazard(neg_log1m(p))
    }
    fn inverse_cumulative_hazard(&self, h: f64) -> f64 {
        self.theta * (h / self.k).exp_m1()
    }
    fn d_ln_pdf(&self, x: f64) -> f64 {
        -(self.k + 1.0) / (self.theta + x)
    }
}

/// Cauchy(δ) centred at zero: f(x) = 1 / (πδ[1 + (x/δ)²]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cauchy {
    delta: f64,
}

impl Cauchy {
    pub fn new(delta: f64) -> Result<Self> {
        Ok(Cauchy {
            delta: positive("delta", delta)?,
        })
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// min(F(x), 1 − F(x)) = arctan(δ/|x|)/π, exact in both tails.
    fn tail(&self, x: f64) -> f64 {
        if x == 0.0 {
            0.5
        } else {
            (self.delta / x.abs()).atan() / PI
        }
    }
}

impl BaselineDistribution for Cauchy {
    fn support(&self) -> Support {
        Support::REAL_LINE
    }
    fn pdf(&self, x: f64) -> f64 {
        let t = x / self.delta;
        1.0 / (PI * self.delta * (1.0 + t * t))
    }
    fn ln_pdf(&self, x: f64) -> f64 {
        let t = x / self.delta;
        -(PI * self.delta).ln() - (t * t).ln_1p()
    }
    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            self.tail(x)
        } else {
            1.0 - self.tail(x)
        }
    }
    fn survival(&self, x: f64) -> f64 {
        if x >= 0.0 {
            self.tail(x)
        } else {
            1.0 - self.tail(x)
        }
    }
    fn log_survival(&self, x: f64) -> f64 {
        if x >= 0.0 {
            self.tail(x).ln()
        } else {
            (-self.tail(x)).ln_1p()
        }
    }
    fn hazard(&self, x: f64) -> f64 {
        self.pdf(x) / self.survival(x)
    }
    fn ln_hazard(&self, x: f64) -> f64 {
        self.ln_pdf(x) - self.log_survival(x)
    }
    fn quantile(&self, p: f64) -> f64 {
        if p < 0.5 {
            -self.delta / (PI * p).tan()
        } else if p > 0.5 {
            self.delta / (PI * (1.0 - p)).tan()
        } else {
            0.0
        }
    }
    fn inverse_cumulative_hazard(&self, h: f64) -> f64 {
        let surv = (-h).exp();
        if surv < 0.5 {
            self.delta / (PI * surv).tan()
        } else {
            let cdf = -(-h).exp_m1();
            if cdf == 0.0 {
                f64::NEG_INFINITY
            } else {
                -self.delta / (PI * cdf).tan()
            }
        }
    }
    fn d_ln_pdf(&self, x: f64) -> f64 {
        -2.0 * x / (self.delta * self.delta + x * x)
    }
}

/// Normal(μ, σ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normal {
    mu: f64,
    sigma: f64,
}

impl Normal {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        Ok(Normal {
            mu: finite("mu", mu)?,
            sigma: positive("sigma", sigma)?,
        })
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    fn z(&self, x: f64) -> f64 {
        (x - self.mu) / self.sigma
    }
}

impl BaselineDistribution for Normal {
    fn support(&self) -> Support {
        Support::REAL_LINE
    }
    fn pdf(&self, x: f64) -> f64 {
        specfun::std_normal_pdf(self.z(x)) / self.sigma
    }
    fn ln_pdf(&self, x: f64) -> f64 {
        let z = self.z(x);
        -0.5 * z * z - 0.5 * (2.0 * PI).ln() - self.sigma.ln()
    }
    fn cdf(&self, x: f64) -> f64 {
        specfun::std_normal_sf(-self.z(x))
    }
    fn survival(&self, x: f64) -> f64 {
        specfun::std_normal_sf(self.z(x))
    }
    fn log_survival(&self, x: f64) -> f64 {
        let z = self.z(x);
        if z.is_nan() {
            return f64::NAN;
        }
        if z == f64::INFINITY {
            return f64::NEG_INFINITY;
        }
        if z == f64::NEG_INFINITY {
            return 0.0;
        }
        specfun::ln_std_normal_sf(z)
    }
    fn hazard(&self, x: f64) -> f64 {
        1.0 / (self.sigma * specfun::std_normal_mills(self.z(x)))
    }
    fn ln_hazard(&self, x: f64) -> f64 {
        let z = self.z(x);
        if z < 0.0 {
            // The Mills ratio overflows in the lower tail; use ln φ − ln S.
            return self.ln_pdf(x) - self.log_survival(x);
        }
        -self.sigma.ln() - specfun::std_normal_mills(z).ln()
    }
    fn ln_cumulative_hazard(&self, x: f64) -> f64 {
        let z = self.z(x);
        if z < -8.0 {
            // H = −ln(1 − Φ) = Φ (1 + Φ/2 + ...), with Φ < 1e-15 here.
            let ln_cdf = specfun::ln_std_normal_sf(-z);
            return ln_cdf + 0.5 * ln_cdf.exp();
        }
        (-self.log_survival(x)).ln()
    }
    fn quantile(&self, p: f64) -> f64 {
        let z = if p <= 0.5 {
            -specfun::std_normal_isf_ln(p.ln())
        } else {
            specfun::std_normal_isf_ln((-p).ln_1p())
        };
        self.mu + self.sigma * z
    }
    fn inverse_cumulative_hazard(&self, h: f64) -> f64 {
        self.mu + self.sigma * specfun::std_normal_isf_ln(-h)
    }
    fn d_ln_pdf(&self, x: f64) -> f64 {
        -self.z(x) / self.sigma
    }
}

/// Weibull(k, λ): F(x) = 1 − exp(−(x/λ)^k) on x > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weibull {
    k: f64,
    lambda: f64,
}

impl Weibull {
    pub fn new(k: f64, lambda: f64) -> Result<Self> {
        Ok(Weibull {
            k: positive("k", k)?,
            lambda: positive("lambda", lambda)?,
        })
    }
    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

impl BaselineDistribution for Weibull {
    fn support(&self) -> Support {
        Support::POSITIVE
    }
    fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            self.ln_pdf(x).exp()
        }
    }
    fn ln_pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return f64::NEG_INFINITY;
        }
        self.ln_hazard(x) + self.log_survival(x)
    }
    fn cdf(&self, x: f64) -> f64 {
        -self.log_survival(x).exp_m1()
    }
    fn survival(&self, x: f64) -> f64 {
        self.log_survival(x).exp()
    }
    fn log_survival(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -(self.k * ln_ratio(x, self.lambda)).exp()
        }
    }
    fn hazard(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            self.ln_hazard(x).exp()
        }
    }
    fn ln_hazard(&self, x: f64) -> f64 {
        if x < 0.0 {
            return f64::NEG_INFINITY;
        }
        if self.k == 1.0 {
            return -self.lambda.ln();
        }
        (self.k / self.lambda).ln() + (self.k - 1.0) * ln_ratio(x, self.lambda)
    }
    fn quantile(&self, p: f64) -> f64 {
        self.inverse_cumulative_hazard(neg_log1m(p))
    }
    fn inverse_cumulative_hazard(&self, h: f64) -> f64 {
        self.lambda * h.powf(1.0 / self.k)
    }
    fn d_ln_pdf(&self, x: f64) -> f64 {
        (self.k - 1.0) / x - self.k / self.lambda * (x / self.lambda).powf(self.k - 1.0)
    }
}

/// Exponential(λ) with rate λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponential {
    lambda: f64,
}

impl Exponential {
    pub fn new(lambda: f64) -> Result<Self> {
        Ok(Exponential {
            lambda: positive("lambda", lambda)?,
        })
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

impl BaselineDistribution for Exponential {
    fn support(&self) -> Support {
        Support::POSITIVE
    }
    fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            self.lambda * (-self.lambda * x).exp()
        }
    }
    fn ln_pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            f64::NEG_INFINITY
        } else {
            self.lambda.ln() - self.lambda * x
        }
    }
    fn cdf(&self, x: f64) -> f64 {
        -self.log_survival(x).exp_m1()
    }
    fn survival(&self, x: f64) -> f64 {
        self.log_survival(x).exp()
    }
    fn log_survival(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -self.lambda * x
        }
    }
    fn hazard(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            self.lambda
        }
    }
    fn quantile(&self, p: f64) -> f64 {
        self.inverse_cumulative_hazard(neg_log1m(p))
    }
    fn inverse_cumulative_hazard(&self, h: f64) -> f64 {
        h / self.lambda
    }
    fn d_ln_pdf(&self, _x: f64) -> f64 {
        -self.lambda
    }
}

/// Baseline family names as used on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Pareto,
    Lomax,
    Cauchy,
    Normal,
    Weibull,
    Exponential,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Pareto,
        Family::Lomax,
        Family::Cauchy,
        Family::Normal,
        Family::Weibull,
        Family::Exponential,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Pareto => "pareto",
            Family::Lomax => "lomax",
            Family::Cauchy => "cauchy",
            Family::Normal => "normal",
            Family::Weibull => "weibull",
            Family::Exponential => "exponential",
        }
    }

    /// Parameter names in command-line order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::Pareto | Family::Lomax => &["k", "theta"],
            Family::Cauchy => &["delta"],
            Family::Normal => &["mu", "sigma"],
            Family::Weibull => &["k", "lambda"],
            Family::Exponential => &["lambda"],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|fam| fam.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// Any of the built-in baselines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Baseline {
    Pareto(Pareto),
    Lomax(Lomax),
    Cauchy(Cauchy),
    Normal(Normal),
    Weibull(Weibull),
    Exponential(Exponential),
}

/// Build a baseline from its family and parameters in command-line order.
pub fn make_baseline(family: Family, params: &[f64]) -> Result<Baseline> {
    let names = family.param_names();
    if params.len() != names.len() {
        return Err(Error::domain(format!(
            "{family} takes {} parameter(s) ({}), got {}",
            names.len(),
            names.join(" "),
            params.len()
        )));
    }
    Ok(match family {
        Family::Pareto => Baseline::Pareto(Pareto::new(params[0], params[1])?),
        Family::Lomax => Baseline::Lomax(Lomax::new(params[0], params[1])?),
        Family::Cauchy => Baseline::Cauchy(Cauchy::new(params[0])?),
        Family::Normal => Baseline::Normal(Normal::new(params[0], params[1])?),
        Family::Weibull => Baseline::Weibull(Weibull::new(params[0], params[1])?),
        Family::Exponential => Baseline::Exponential(Exponential::new(params[0])?),
    })
}

macro_rules! dispatch {
    ($self:ident, $b:ident => $e:expr) => {
        match $self {
            Baseline::Pareto($b) => $e,
            Baseline::Lomax($b) => $e,
            Baseline::Cauchy($b) => $e,
            Baseline::Normal($b) => $e,
            Baseline::Weibull($b) => $e,
            Baseline::Exponential($b) => $e,
        }
    };
}

impl Baseline {
    pub fn family(&self) -> Family {
        match self {
            Baseline::Pareto(_) => Family::Pareto,
            Baseline::Lomax(_) => Family::Lomax,
            Baseline::Cauchy(_) => Family::Cauchy,
            Baseline::Normal(_) => Family::Normal,
            Baseline::Weibull(_) => Family::Weibull,
            Baseline::Exponential(_) => Family::Exponential,
        }
    }

    /// Parameters in command-line order.
    pub fn params(&self) -> Vec<f64> {
        match self {
            Baseline::Pareto(b) => vec![b.k, b.theta],
            Baseline::Lomax(b) => vec![b.k, b.theta],
            Baseline::Cauchy(b) => vec![b.delta],
            Baseline::Normal(b) => vec![b.mu, b.sigma],
            Baseline::Weibull(b) => vec![b.k, b.lambda],
            Baseline::Exponential(b) => vec![b.lambda],
        }
    }
}

impl BaselineDistribution for Baseline {
    fn support(&self) -> Support {
        dispatch!(self, b => b.support())
    }
    fn pdf(&self, x: f64) -> f64 {
        dispatch!(self, b => b.pdf(x))
    }
    fn ln_pdf(&self, x: f64) -> f64 {
        dispatch!(self, b => b.ln_pdf(x))
    }
    fn cdf(&self, x: f64) -> f64 {
        dispatch!(self, b => b.cdf(x))
    }
    fn survival(&self, x: f64) -> f64 {
        dispatch!(self, b => b.survival(x))
    }
    fn log_survival(&self, x: f64) -> f64 {
        dispatch!(self, b => b.log_survival(x))
    }
    fn hazard(&self, x: f64) -> f64 {
        dispatch!(self, b => b.hazard(x))
    }
    fn ln_hazard(&self, x: f64) -> f64 {
        dispatch!(self, b => b.ln_hazard(x))
    }
    fn ln_cumulative_hazard(&self, x: f64) -> f64 {
        dispatch!(self, b => b.ln_cumulative_hazard(x))
    }
    fn quantile(&self, p: f64) -> f64 {
        dispatch!(self, b => b.quantile(p))
    }
    fn inverse_cumulative_hazard(&self, h: f64) -> f64 {
        dispatch!(self, b => b.inverse_cumulative_hazard(h))
    }
    fn d_ln_pdf(&self, x: f64) -> f64 {
        dispatch!(self, b => b.d_ln_pdf(x))
    }
}
