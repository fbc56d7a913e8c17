//! Upper record values of a Weibull-R stream.
//!
//! Writing w = H_X(x) = [H_R(x)/γ]^c for the cumulative hazard of the
//! composed law, the m-th upper record has density f_X(x) w^{m−1}/Γ(m), and
//! the cumulative hazard of X_{U(m)} is a Gamma(m, 1) variate. The series form
//! integrates the joint density of (X_{U(m)}, X_{U(n)}) over y term by term
//! and must collapse to the closed form.

use crate::baseline::BaselineDistribution;
use crate::dist::WeibullR;
use crate::error::{Error, Result};
use crate::random::RandomSource;
use crate::specfun::{ln_gamma_unchecked, ln_upper_incomplete_gamma};

/// Ratio of summed term magnitudes to the result beyond which the
/// alternating record series is refused.
pub const CANCELLATION_LIMIT: f64 = 1e6;

/// Pair of record indices 1 ≤ m < n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecordQuery {
    m: u32,
    n: u32,
}

impl RecordQuery {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        if m < 1 {
            return Err(Error::Parameter {
                field: "m",
                value: m as f64,
                reason: "record index starts at 1",
            });
        }
        if n <= m {
            return Err(Error::Parameter {
                field: "n",
                value: n as f64,
                reason: "must exceed m",
            });
        }
        Ok(RecordQuery { m, n })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }
}

/// k·ln(v) with the convention 0·ln 0 = 0.
fn ln_pow(ln_v: f64, k: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else {
        k * ln_v
    }
}

fn check_index(m: u32) -> Result<()> {
    if m < 1 {
        return Err(Error::Parameter {
            field: "m",
            value: 0.0,
            reason: "record index starts at 1",
        });
    }
    Ok(())
}

fn check_point<B: BaselineDistribution>(d: &WeibullR<B>, x: f64) -> Result<()> {
    if !(x.is_finite() && d.support().contains(x)) {
        return Err(Error::domain(format!("x = {x} outside the support")));
    }
    Ok(())
}

/// Joint density of (X_{U(m)}, X_{U(n)}) at (x, y); zero unless x < y.
pub fn joint_record_pdf<B: BaselineDistribution>(
    d: &WeibullR<B>,
    q: &RecordQuery,
    x: f64,
    y: f64,
) -> Result<f64> {
    check_point(d, x)?;
    check_point(d, y)?;
    if x >= y {
        return Ok(0.0);
    }
    let (m, n) = (q.m as f64, q.n as f64);
    let hx = d.cumulative_hazard_raw(x);
    let hy = d.cumulative_hazard_raw(y);
    let ln =
        ln_pow((hy - hx).ln(), n - m - 1.0) + ln_pow(hx.ln(), m - 1.0) + d.ln_pdf(x) + d.ln_pdf(y)
            - ln_gamma_unchecked(m)
            - ln_gamma_unchecked(n - m)
            + hx;
    Ok(ln.exp())
}

/// Marginal density of X_{U(m)}: f_X(x) H_X(x)^{m−1}/Γ(m).
pub fn record_marginal_pdf_closed<B: BaselineDistribution>(
    d: &WeibullR<B>,
    m: u32,
    x: f64,
) -> Result<f64> {
    check_index(m)?;
    check_point(d, x)?;
    if m == 1 {
        return Ok(d.pdf(x));
    }
    let mf = m as f64;
    let w = d.cumulative_hazard_raw(x);
    Ok((d.ln_pdf(x) + ln_pow(w.ln(), mf - 1.0) - ln_gamma_unchecked(mf)).exp())
}

/// Marginal density of X_{U(m)} from the term-by-term integral over the
/// n-th record:
///
/// h_X(x) w^{m−1}/(Γ(m)Γ(n−m)) · Σ_{j=0}^{N} (−1)^{N−j} C(N, j) w^{N−j} Γ(j+1, w),
///
/// with N = n − m − 1. Terms are combined in log space; when they cancel by
/// more than [`CANCELLATION_LIMIT`] a cancellation error is returned instead
/// of a degraded value.
pub fn record_marginal_pdf_series<B: BaselineDistribution>(
    d: &WeibullR<B>,
    q: &RecordQuery,
    x: f64,
) -> Result<f64> {
    check_point(d, x)?;
    if x <= d.support().lower {
        return Ok(d.pdf(x) * if q.m == 1 { 1.0 } else { 0.0 });
    }
    let (m, n) = (q.m as f64, q.n as f64);
    let big_n = q.n - q.m - 1;
    let w = d.cumulative_hazard_raw(x);
    let ln_w = w.ln();

    let ln_binom_base = ln_gamma_unchecked(big_n as f64 + 1.0);
    let mut ln_terms = Vec::with_capacity(big_n as usize + 1);
    for j in 0..=big_n {
        let jf = j as f64;
        let ln_binom = ln_binom_base
            - ln_gamma_unchecked(jf + 1.0)
            - ln_gamma_unchecked((big_n - j) as f64 + 1.0);
        let ln_term =
            ln_binom + ln_pow(ln_w, (big_n - j) as f64) + ln_upper_incomplete_gamma(jf + 1.0, w)?;
        let positive = (big_n - j).is_multiple_of(2);
        ln_terms.push((ln_term, positive));
    }
    let ln_max = ln_terms
        .iter()
        .map(|t| t.0)
        .fold(f64::NEG_INFINITY, f64::max);
    if ln_max == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let (mut sum, mut mass) = (0.0, 0.0);
    for &(ln_term, positive) in &ln_terms {
        let scaled = (ln_term - ln_max).exp();
        mass += scaled;
        sum += if positive { scaled } else { -scaled };
    }
    if !(sum > 0.0) || mass / sum > CANCELLATION_LIMIT {
        return Err(Error::Cancellation {
            term_mass: mass,
            result: sum,
        });
    }
    let ln_value = d.ln_hazard_raw(x) + ln_pow(ln_w, m - 1.0)
        - ln_gamma_unchecked(m)
        - ln_gamma_unchecked(n - m)
        + ln_max
        + sum.ln();
    Ok(ln_value.exp())
}

/// `n_paths` independent draws of X_{U(m)}: a Gamma(m, 1) cumulative hazard
/// mapped back through the inverse cumulative hazard.
pub fn sample_records<B: BaselineDistribution>(
    d: &WeibullR<B>,
    m: u32,
    n_paths: usize,
    rng: &mut RandomSource,
) -> Result<Vec<f64>> {
    check_index(m)?;
    Ok((0..n_paths)
        .map(|_| d.inverse_cumulative_hazard(rng.gamma_integer(m)))
        .collect())
}
