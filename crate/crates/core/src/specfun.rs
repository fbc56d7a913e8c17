//! Special functions: log-gamma, the upper incomplete gamma function and the
//! standard normal distribution (cdf, survival, log-survival, quantile).

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant, 0.57721566490153286061 (20 significant digits).
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

const MAX_ITER: usize = 10_000;
const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;

/// |z| beyond which normal tail probabilities come from the Mills-ratio
/// continued fraction instead of the central series.
const TAIL_THRESHOLD: f64 = 2.5;

fn check_positive(name: &str, a: f64) -> Result<()> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::domain(format!(
            "{name} must be positive and finite, got {a}"
        )));
    }
    Ok(())
}

/// ζ(k) for k = 2..=MAX_ZETA via a truncated sum with an Euler–Maclaurin tail.
fn zeta_table() -> &'static [f64] {
    const MAX_ZETA: usize = 48;
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = 30.0_f64;
        let mut out = vec![0.0; MAX_ZETA + 1];
        for (k, slot) in out.iter_mut().enumerate().skip(2) {
            let s = k as f64;
            let head: f64 = (1..30).rev().map(|i| (i as f64).powf(-s)).sum();
            let tail = n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s) + s * n.powf(-s - 1.0) / 12.0
                - s * (s + 1.0) * (s + 2.0) * n.powf(-s - 3.0) / 720.0
                + s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * n.powf(-s - 5.0) / 30240.0;
            *slot = head + tail;
        }
        out
    })
}

/// ln Γ(1 + z) for |z| ≤ 0.25 from the Taylor series in ζ values.
fn ln_gamma_1p_small(z: f64) -> f64 {
    let zeta = zeta_table();
    let mut sum = -EULER_GAMMA * z;
    // (−z)^k
    let mut zk = -z;
    for (k, zeta_k) in zeta.iter().enumerate().skip(2) {
        zk *= -z;
        let term = zeta_k * zk / k as f64;
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Stirling series, accurate to full precision for a ≥ 10.
fn ln_gamma_stirling(a: f64) -> f64 {
    let inv = 1.0 / a;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            + inv2
                * (-1.0 / 360.0
                    + inv2
                        * (1.0 / 1260.0
                            + inv2
                                * (-1.0 / 1680.0
                                    + inv2
                                        * (1.0 / 1188.0
                                            + inv2 * (-691.0 / 360_360.0 + inv2 / 156.0))))));
    (a - 0.5) * a.ln() - a + LN_SQRT_2PI + series
}

/// Natural logarithm of the gamma function for positive arguments.
pub fn ln_gamma(a: f64) -> Result<f64> {
    check_positive("a", a)?;
    Ok(ln_gamma_unchecked(a))
}

pub(crate) fn ln_gamma_unchecked(a: f64) -> f64 {
    // Integers: ln((a-1)!) with the factorial formed exactly while it fits.
    if a == a.floor() && a <= 23.0 {
        let fact: f64 = (1..a as u64).map(|i| i as f64).product();
        return fact.ln();
    }
    if (a - 1.0).abs() <= 0.25 {
        return ln_gamma_1p_small(a - 1.0);
    }
    if (a - 2.0).abs() <= 0.25 {
        return (a - 1.0).ln() + ln_gamma_1p_small(a - 2.0);
    }
    if a >= 10.0 {
        return ln_gamma_stirling(a);
    }
    // Shift up past 10: Γ(a) = Γ(a + k) / (a (a+1) ... (a+k-1)).
    let mut shifted = a;
    let mut prod = 1.0;
    while shifted < 10.0 {
        prod *= shifted;
        shifted += 1.0;
    }
    ln_gamma_stirling(shifted) - prod.ln()
}

/// Lower incomplete gamma by its power series; returns (ln γ(a,x)).
fn ln_lower_series(a: f64, x: f64) -> Result<f64> {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * EPS {
            return Ok(sum.ln() - x + a * x.ln());
        }
    }
    Err(Error::NonConvergence {
        iterations: MAX_ITER,
    })
}

/// ln Γ(a,x) by the Legendre continued fraction (modified Lentz), x ≥ a + 1.
fn ln_upper_cf(a: f64, x: f64) -> Result<f64> {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            return Ok(h.ln() - x + a * x.ln());
        }
    }
    Err(Error::NonConvergence {
        iterations: MAX_ITER,
    })
}

fn check_incgamma_args(a: f64, x: f64) -> Result<()> {
    check_positive("a", a)?;
    if x.is_nan() || x < 0.0 {
        return Err(Error::domain(format!("x must be non-negative, got {x}")));
    }
    Ok(())
}

/// Natural logarithm of the upper incomplete gamma function ln Γ(a, x).
///
/// Stays finite where Γ(a, x) itself underflows; `x = +∞` gives `-∞`.
pub fn ln_upper_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    check_incgamma_args(a, x)?;
    let lg = ln_gamma_unchecked(a);
    if x == 0.0 {
        return Ok(lg);
    }
    if x.is_infinite() {
        return Ok(f64::NEG_INFINITY);
    }
    if x < a + 1.0 {
        let p = (ln_lower_series(a, x)? - lg).exp();
        Ok(lg + (-p).ln_1p())
    } else {
        ln_upper_cf(a, x)
    }
}

/// Upper incomplete gamma function Γ(a, x) = ∫ₓ^∞ t^{a−1} e^{−t} dt.
///
/// Series for x < a + 1, continued fraction otherwise. Returns 0 once the
/// value underflows.
pub fn upper_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    ln_upper_incomplete_gamma(a, x).map(f64::exp)
}

/// Regularized upper incomplete gamma Q(a, x) = Γ(a, x) / Γ(a).
pub fn regularized_upper_gamma(a: f64, x: f64) -> Result<f64> {
    check_incgamma_args(a, x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let lg = ln_gamma_unchecked(a);
    if x < a + 1.0 {
        let p = (ln_lower_series(a, x)? - lg).exp();
        Ok((1.0 - p).max(0.0))
    } else {
        Ok((ln_upper_cf(a, x)? - lg).exp())
    }
}

/// Standard normal density φ(z).
pub fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z - LN_SQRT_2PI).exp()
}

fn check_finite(z: f64) -> Result<()> {
    if !z.is_finite() {
        return Err(Error::domain(format!("argument must be finite, got {z}")));
    }
    Ok(())
}

/// Standard normal cdf Φ(z).
pub fn std_normal_cdf(z: f64) -> Result<f64> {
    check_finite(z)?;
    Ok(phi(z))
}

/// Σ z^{2n+1} / (1·3·…·(2n+1)); all terms share the sign of z.
fn central_series(z: f64) -> f64 {
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    let mut denom = 1.0;
    for _ in 0..200 {
        denom += 2.0;
        term *= z2 / denom;
        sum += term;
        if term.abs() <= sum.abs() * 1e-17 {
            break;
        }
    }
    sum
}

/// Mills ratio (1 − Φ(z)) / φ(z) for z > 0 from the continued fraction
/// R(z) = 1/(z + 1/(z + 2/(z + 3/(z + …)))), evaluated by modified Lentz.
fn mills_ratio(z: f64) -> f64 {
    let mut f = z;
    let mut c = z;
    let mut d = 0.0;
    for i in 1..MAX_ITER {
        let a = i as f64;
        d = z + a * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = z + a / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    1.0 / f
}

fn phi(z: f64) -> f64 {
    if z < -TAIL_THRESHOLD {
        mills_ratio(-z) * std_normal_pdf(z)
    } else if z > TAIL_THRESHOLD {
        1.0 - mills_ratio(z) * std_normal_pdf(z)
    } else {
        0.5 + std_normal_pdf(z) * central_series(z)
    }
}

/// Standard normal survival 1 − Φ(z), without forming the difference.
pub(crate) fn std_normal_sf(z: f64) -> f64 {
    phi(-z)
}

/// ln(1 − Φ(z)) for all finite z, accurate deep into both tails.
pub(crate) fn ln_std_normal_sf(z: f64) -> f64 {
    if z > TAIL_THRESHOLD {
        -0.5 * z * z - LN_SQRT_2PI + mills_ratio(z).ln()
    } else if z > 0.0 {
        std_normal_sf(z).ln()
    } else {
        (-phi(z)).ln_1p()
    }
}

/// Mills ratio (1 − Φ(z)) / φ(z) for any finite z.
pub(crate) fn std_normal_mills(z: f64) -> f64 {
    if z > TAIL_THRESHOLD {
        mills_ratio(z)
    } else {
        std_normal_sf(z) / std_normal_pdf(z)
    }
}

/// z with ln(1 − Φ(z)) = `ln_sf`, by Newton iteration on the log survival.
fn newton_ln_sf(mut z: f64, target: f64) -> f64 {
    for _ in 0..100 {
        // d/dz ln S(z) = −1 / Mills(z)
        let step = (ln_std_normal_sf(z) - target) * std_normal_mills(z);
        z += step;
        if step.abs() <= 1e-15 * z.abs().max(1e-300) {
            break;
        }
    }
    z
}

/// Rational start for the upper-tail quantile (absolute error < 4.5e-4).
fn upper_quantile_start(ln_sf: f64) -> f64 {
    let t = (-2.0 * ln_sf).sqrt();
    t - (2.515_517 + 0.802_853 * t + 0.010_328 * t * t)
        / (1.0 + 1.432_788 * t + 0.189_269 * t * t + 0.001_308 * t * t * t)
}

/// z such that ln(1 − Φ(z)) = `ln_sf`, for `ln_sf` ≤ 0.
///
/// Handles survival probabilities far below the smallest positive double.
pub(crate) fn std_normal_isf_ln(ln_sf: f64) -> f64 {
    if ln_sf == 0.0 {
        return f64::NEG_INFINITY;
    }
    if ln_sf == f64::NEG_INFINITY {
        return f64::INFINITY;
    }
    if ln_sf > -std::f64::consts::LN_2 {
        // Survival above one half: mirror onto the upper tail of the cdf.
        let cdf = -ln_sf.exp_m1();
        return -std_normal_isf_ln(cdf.ln());
    }
    newton_ln_sf(upper_quantile_start(ln_sf), ln_sf)
}

/// Standard normal quantile Φ⁻¹(p); p = 0 and p = 1 map to ∓∞.
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!(
            "probability must lie in [0,1], got {p}"
        )));
    }
    Ok(if p <= 0.5 {
        -std_normal_isf_ln(p.ln())
    } else {
        std_normal_isf_ln((1.0 - p).ln())
    })
}
