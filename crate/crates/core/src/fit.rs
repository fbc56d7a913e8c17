//! Maximum-likelihood fitting by multi-start Nelder–Mead.
//!
//! The parameter vector is laid out as `[c, gamma, baseline params...]` with
//! baseline parameters in command-line order. Positive parameters are
//! searched on the log scale; the Normal location is searched as is. The
//! Pareto lower endpoint is never searched: it is pinned just below the
//! sample minimum.

use std::fmt;
use std::str::FromStr;

use crate::baseline::{make_baseline, Baseline, BaselineDistribution, Family};
use crate::dist::{WeibullR, WeibullRParams};
use crate::error::{Error, Result};
use crate::random::RandomSource;

/// Σ ln f(xᵢ); −∞ as soon as a point falls outside the support.
pub fn log_likelihood<B: BaselineDistribution>(d: &WeibullR<B>, data: &[f64]) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::domain("data is empty"));
    }
    let mut sum = 0.0;
    for &x in data {
        let lp = d.ln_pdf(x);
        if lp == f64::NEG_INFINITY {
            return Ok(f64::NEG_INFINITY);
        }
        sum += lp;
    }
    Ok(sum)
}

/// Search scale of the optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parameterization {
    /// Positive parameters enter as their logarithms.
    Log,
    /// Parameters enter untransformed; infeasible points score −∞.
    Raw,
}

/// Fitting options; see [`FitSpec::parse`] for the text form.
#[derive(Debug, Clone, PartialEq)]
pub struct FitSpec {
    pub family: Family,
    /// One flag per entry of [`FitSpec::param_names`].
    pub free: Vec<bool>,
    /// Starting values; `None` falls back to a data-driven guess.
    pub init: Vec<Option<f64>>,
    pub max_iters: usize,
    pub tol: f64,
    pub starts: usize,
    pub parameterization: Parameterization,
}

const PROFILE_SHRINK: f64 = 1.0 - 1e-6;
const JITTER: f64 = 0.5;

impl FitSpec {
    pub const DEFAULT_MAX_ITERS: usize = 2000;
    pub const DEFAULT_TOL: f64 = 1e-9;
    pub const DEFAULT_STARTS: usize = 5;

    /// Default spec for a family. γ is held at 1 where it is confounded with
    /// a baseline scale, as is the Weibull baseline shape (confounded with c).
    pub fn new(family: Family) -> Self {
        let names = Self::names_for(family);
        let free = names
            .iter()
            .map(|&name| match (family, name) {
                (_, "c") => true,
                (Family::Normal | Family::Cauchy, "gamma") => true,
                (_, "gamma") => false,
                (Family::Pareto, "theta") => false,
                (Family::Weibull, "k") => false,
                _ => true,
            })
            .collect();
        FitSpec {
            family,
            free,
            init: vec![None; names.len()],
            max_iters: Self::DEFAULT_MAX_ITERS,
            tol: Self::DEFAULT_TOL,
            starts: Self::DEFAULT_STARTS,
            parameterization: Parameterization::Log,
        }
    }

    fn names_for(family: Family) -> Vec<&'static str> {
        let mut names = vec!["c", "gamma"];
        names.extend_from_slice(family.param_names());
        names
    }

    pub fn param_names(&self) -> Vec<&'static str> {
        Self::names_for(self.family)
    }

    fn index_of(&self, name: &str) -> Result<usize> {
        self.param_names()
            .iter()
            .position(|&n| n == name)
            .ok_or_else(|| {
                Error::Precondition(format!("family {} has no parameter '{name}'", self.family))
            })
    }

    /// Marks exactly the named parameters as free.
    pub fn set_free(&mut self, names: &[&str]) -> Result<()> {
        let mut free = vec![false; self.free.len()];
        for name in names {
            free[self.index_of(name)?] = true;
        }
        self.free = free;
        Ok(())
    }

    pub fn set_init(&mut self, name: &str, value: f64) -> Result<()> {
        let i = self.index_of(name)?;
        self.init[i] = Some(value);
        Ok(())
    }

    fn is_location(&self, i: usize) -> bool {
        self.family == Family::Normal && self.param_names()[i] == "mu"
    }

    fn is_profiled(&self, i: usize) -> bool {
        self.family == Family::Pareto && self.param_names()[i] == "theta"
    }

    pub fn validate(&self) -> Result<()> {
        let names = self.param_names();
        if self.free.len() != names.len() || self.init.len() != names.len() {
            return Err(Error::Precondition(
                "free/init do not match the family's parameters".into(),
            ));
        }
        if self.max_iters == 0 || self.starts == 0 {
            return Err(Error::Precondition(
                "max_iters and starts must be positive".into(),
            ));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Parameter {
                field: "tol",
                value: self.tol,
                reason: "must be positive",
            });
        }
        for (i, name) in names.iter().enumerate() {
            if self.free[i] && self.is_profiled(i) {
                return Err(Error::Precondition(format!(
                    "{name} is profiled from the data and cannot be free"
                )));
            }
            if let Some(v) = self.init[i] {
                let ok = if self.is_location(i) {
                    v.is_finite()
                } else {
                    v.is_finite() && v > 0.0
                };
                if !ok {
                    return Err(Error::Parameter {
                        field: name,
                        value: v,
                        reason: "invalid initial value",
                    });
                }
            }
        }
        if !self.free.iter().any(|&f| f) {
            return Err(Error::Precondition("no free parameters".into()));
        }
        Ok(())
    }

    /// Parses the flat `key=value` form. Keys: `family`, `free` (comma list),
    /// `init.<name>`, `max_iters`, `tol`, `starts`, `parameterization`
    /// (`log` or `raw`). Blank lines and `#` comments are ignored; `family`
    /// may appear anywhere but only once.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut family = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Precondition(format!("line {}: expected key=value", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            if key == "family" {
                if family.is_some() {
                    return Err(Error::Precondition("family given twice".into()));
                }
                family = Some(value.parse::<Family>()?);
            } else {
                entries.push((lineno + 1, key.to_string(), value.to_string()));
            }
        }
        let family = family.ok_or_else(|| Error::Precondition("missing family".into()))?;
        let mut spec = FitSpec::new(family);
        for (lineno, key, value) in entries {
            let bad = |what: &str| {
                Error::Precondition(format!("line {lineno}: invalid {what} '{value}'"))
            };
            match key.as_str() {
                "free" => {
                    let names: Vec<&str> = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .collect();
                    spec.set_free(&names)?;
                }
                "max_iters" => spec.max_iters = value.parse().map_err(|_| bad("max_iters"))?,
                "tol" => spec.tol = value.parse().map_err(|_| bad("tol"))?,
                "starts" => spec.starts = value.parse().map_err(|_| bad("starts"))?,
                "parameterization" => {
                    spec.parameterization = match value.as_str() {
                        "log" => Parameterization::Log,
                        "raw" => Parameterization::Raw,
                        _ => return Err(bad("parameterization")),
                    }
                }
                k if k.starts_with("init.") => {
                    let v: f64 = value.parse().map_err(|_| bad("initial value"))?;
                    spec.set_init(&k["init.".len()..], v)?;
                }
                other => {
                    return Err(Error::Precondition(format!(
                        "line {lineno}: unknown key '{other}'"
                    )))
                }
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}

impl FromStr for FitSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FitSpec::parse(s)
    }
}

impl fmt::Display for FitSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.param_names();
        writeln!(f, "family={}", self.family)?;
        let free: Vec<&str> = names
            .iter()
            .zip(&self.free)
            .filter(|(_, &fr)| fr)
            .map(|(n, _)| *n)
            .collect();
        writeln!(f, "free={}", free.join(","))?;
        for (name, v) in names.iter().zip(&self.init) {
            if let Some(v) = v {
                writeln!(f, "init.{name}={v}")?;
            }
        }
        writeln!(f, "max_iters={}", self.max_iters)?;
        writeln!(f, "tol={}", self.tol)?;
        writeln!(f, "starts={}", self.starts)?;
        let p = match self.parameterization {
            Parameterization::Log => "log",
            Parameterization::Raw => "raw",
        };
        writeln!(f, "parameterization={p}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub params: WeibullRParams,
    pub baseline: Baseline,
    pub log_likelihood: f64,
    pub converged: bool,
    /// Simplex iterations summed over all starts.
    pub iterations: usize,
    /// Best log-likelihood after each start, in start order.
    pub history: Vec<f64>,
}

impl FitResult {
    pub fn distribution(&self) -> WeibullR {
        WeibullR::from_params(self.params, self.baseline)
    }
}

fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Data-driven starting values for the full parameter vector.
fn heuristic_init(family: Family, data: &[f64]) -> Vec<f64> {
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = quantile_sorted(&sorted, 0.5);
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);
    let spread = if iqr > 0.0 {
        iqr
    } else {
        median.abs().max(1.0)
    };
    let positive_median = if median > 0.0 { median } else { spread };
    let baseline = match family {
        Family::Lomax => vec![1.0, positive_median],
        Family::Pareto => vec![1.0, sorted[0]],
        Family::Exponential => vec![std::f64::consts::LN_2 / positive_median],
        Family::Weibull => vec![1.0, positive_median / std::f64::consts::LN_2],
        Family::Normal => vec![median, spread / 1.349],
        Family::Cauchy => vec![spread / 2.0],
    };
    let mut out = vec![1.0, 1.0];
    out.extend(baseline);
    out
}

struct Problem<'a> {
    spec: &'a FitSpec,
    data: &'a [f64],
    base: Vec<f64>,
    free_idx: Vec<usize>,
}

impl Problem<'_> {
    fn transformed(&self, i: usize) -> bool {
        self.spec.parameterization == Parameterization::Log && !self.spec.is_location(i)
    }

    fn encode(&self, full: &[f64]) -> Vec<f64> {
        self.free_idx
            .iter()
            .map(|&i| {
                if self.transformed(i) {
                    full[i].ln()
                } else {
                    full[i]
                }
            })
            .collect()
    }

    fn decode(&self, z: &[f64]) -> Vec<f64> {
        let mut full = self.base.clone();
        for (&i, &v) in self.free_idx.iter().zip(z) {
            full[i] = if self.transformed(i) { v.exp() } else { v };
        }
        full
    }

    fn model(&self, full: &[f64]) -> Result<WeibullR> {
        let baseline = make_baseline(self.spec.family, &full[2..])?;
        WeibullR::new(full[0], full[1], baseline)
    }

    /// Negative log-likelihood; +∞ for infeasible or non-finite points.
    fn objective(&self, z: &[f64]) -> f64 {
        let full = self.decode(z);
        match self
            .model(&full)
            .and_then(|d| log_likelihood(&d, self.data))
        {
            Ok(ll) if ll.is_finite() => -ll,
            _ => f64::INFINITY,
        }
    }
}

struct Simplex {
    point: Vec<f64>,
    value: f64,
    iterations: usize,
    converged: bool,
}

/// Nelder–Mead minimization from `start` with initial edge lengths `steps`.
fn nelder_mead(
    f: &dyn Fn(&[f64]) -> f64,
    start: &[f64],
    steps: &[f64],
    max_iters: usize,
    tol: f64,
) -> Simplex {
    let dim = start.len();
    let mut pts: Vec<Vec<f64>> = vec![start.to_vec()];
    for i in 0..dim {
        let mut p = start.to_vec();
        p[i] += steps[i];
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iters {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();
        let (best, worst) = (vals[0], vals[dim]);
        if best.is_finite() && (worst - best).abs() <= tol * best.abs().max(1.0) {
            converged = true;
            break;
        }
        iterations += 1;
        let centroid: Vec<f64> = (0..dim)
            .map(|j| pts[..dim].iter().map(|p| p[j]).sum::<f64>() / dim as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            (0..dim)
                .map(|j| centroid[j] + t * (pts[dim][j] - centroid[j]))
                .collect()
        };
        let reflected = along(-1.0);
        let fr = f(&reflected);
        if fr < vals[0] {
            let expanded = along(-2.0);
            let fe = f(&expanded);
            if fe < fr {
                pts[dim] = expanded;
                vals[dim] = fe;
            } else {
                pts[dim] = reflected;
                vals[dim] = fr;
            }
            continue;
        }
        if fr < vals[dim - 1] {
            pts[dim] = reflected;
            vals[dim] = fr;
            continue;
        }
        let (contracted, fc) = if fr < vals[dim] {
            let p = along(-0.5);
            let v = f(&p);
            (p, v)
        } else {
            let p = along(0.5);
            let v = f(&p);
            (p, v)
        };
        if fc < vals[dim].min(fr) {
            pts[dim] = contracted;
            vals[dim] = fc;
            continue;
        }
        let anchor = pts[0].clone();
        for i in 1..=dim {
            for (p, a) in pts[i].iter_mut().zip(&anchor) {
                *p = a + 0.5 * (*p - a);
            }
            vals[i] = f(&pts[i]);
        }
    }
    let best = (0..=dim)
        .min_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)))
        .unwrap_or(0);
    Simplex {
        point: pts[best].clone(),
        value: vals[best],
        iterations,
        converged,
    }
}

/// One start: a simplex run followed by a restart from its optimum, which
/// guards against premature collapse.
fn run_start(problem: &Problem<'_>, start: &[f64]) -> Simplex {
    let f = |z: &[f64]| problem.objective(z);
    let steps: Vec<f64> = problem
        .free_idx
        .iter()
        .zip(start)
        .map(|(&i, &z)| {
            if problem.transformed(i) {
                0.25
            } else {
                0.25 * z.abs().max(problem.base[i].abs()).max(1e-3)
            }
        })
        .collect();
    let spec = problem.spec;
    let first = nelder_mead(&f, start, &steps, spec.max_iters, spec.tol);
    let second = nelder_mead(&f, &first.point, &steps, spec.max_iters, spec.tol);
    let iterations = first.iterations + second.iterations;
    if second.value <= first.value {
        Simplex {
            iterations,
            ..second
        }
    } else {
        Simplex {
            iterations,
            ..first
        }
    }
}

/// Maximum-likelihood fit of the free parameters in `spec` to `data`.
///
/// Start 0 uses the initial values; start s ≥ 1 jitters every free
/// coordinate by up to ±0.5 on the search scale using substream s of `rng`.
/// Starts run in parallel and the best is chosen by (objective, start index),
/// so the result does not depend on scheduling.
pub fn fit_mle(data: &[f64], spec: &FitSpec, rng: &RandomSource) -> Result<FitResult> {
    spec.validate()?;
    let free_idx: Vec<usize> = (0..spec.free.len()).filter(|&i| spec.free[i]).collect();
    if data.len() < free_idx.len() + 1 {
        return Err(Error::Precondition(format!(
            "{} observations cannot identify {} free parameters",
            data.len(),
            free_idx.len()
        )));
    }
    if let Some(bad) = data.iter().find(|x| !x.is_finite()) {
        return Err(Error::domain(format!("non-finite observation {bad}")));
    }
    let mut base = heuristic_init(spec.family, data);
    for (i, v) in spec.init.iter().enumerate() {
        if let Some(v) = v {
            base[i] = *v;
        }
    }
    if spec.family == Family::Pareto {
        let min = data.iter().copied().fold(f64::INFINITY, f64::min);
        if min <= 0.0 {
            return Err(Error::domain("Pareto data must be positive"));
        }
        base[3] = min * PROFILE_SHRINK;
    }
    let problem = Problem {
        spec,
        data,
        base,
        free_idx,
    };
    let center = problem.encode(&problem.base);
    let starts: Vec<Vec<f64>> = (0..spec.starts)
        .map(|s| {
            if s == 0 {
                return center.clone();
            }
            let mut r = rng.substream(s as u64);
            let scales: Vec<f64> = problem
                .free_idx
                .iter()
                .zip(&center)
                .map(|(&i, &z)| {
                    if problem.transformed(i) {
                        1.0
                    } else {
                        z.abs().max(1.0)
                    }
                })
                .collect();
            center
                .iter()
                .zip(scales)
                .map(|(&z, sc)| z + sc * JITTER * (2.0 * r.uniform() - 1.0))
                .collect()
        })
        .collect();

    let runs: Vec<Simplex> = std::thread::scope(|scope| {
        let handles: Vec<_> = starts
            .iter()
            .map(|s| scope.spawn(|| run_start(&problem, s)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("fit worker panicked"))
            .collect()
    });

    let mut history = Vec::with_capacity(runs.len());
    let mut best: Option<usize> = None;
    for (i, run) in runs.iter().enumerate() {
        if run.value.is_finite() && best.is_none_or(|b| run.value < runs[b].value) {
            best = Some(i);
        }
        history.push(best.map_or(f64::NEG_INFINITY, |b| -runs[b].value));
    }
    let best = best.ok_or_else(|| Error::Fit("no start produced a finite likelihood".into()))?;
    let winner = &runs[best];
    let full = problem.decode(&winner.point);
    let d = problem.model(&full)?;
    Ok(FitResult {
        params: d.params(),
        baseline: *d.baseline(),
        log_likelihood: -winner.value,
        converged: winner.converged,
        iterations: runs.iter().map(|r| r.iterations).sum(),
        history,
    })
}
