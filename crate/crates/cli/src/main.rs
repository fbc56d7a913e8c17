mod data;
mod output;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use weibull_r::{
    fit_mle, make_baseline, moment, record_marginal_pdf_closed, record_marginal_pdf_series,
    reliability, reliability_quadrature, reliability_series, sample_records, shannon_entropy,
    Family, FitSpec, QuadratureSpec, RandomSource, RecordQuery, ReliabilityQuery, WeibullR,
};

use output::{Format, Output};

#[derive(Parser, Debug)]
#[command(
    name = "weibull-r",
    version,
    about = "Weibull-R distributions from the command line"
)]
struct Cli {
    /// Output encoding.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate pdf, cdf, survival, hazard or quantile at points or on a grid.
    Eval {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long, value_enum)]
        what: What,
        #[command(flatten)]
        at: PointArgs,
    },
    /// Draw a seeded random sample.
    Sample {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Raw moments E[X^r].
    Moments {
        #[command(flatten)]
        dist: DistArgs,
        /// Moment orders.
        #[arg(long, num_args = 1.., value_delimiter = ',', default_value = "1")]
        order: Vec<u32>,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Shannon entropy.
    Entropy {
        #[command(flatten)]
        dist: DistArgs,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Stress-strength reliability P(X > Y) for shapes c1 (X) and c2 (Y).
    Reliability {
        #[arg(long)]
        c1: f64,
        #[arg(long)]
        c2: f64,
        #[arg(long, default_value_t = ReliabilityQuery::DEFAULT_KMAX)]
        kmax: usize,
        #[arg(long, value_enum, default_value = "auto")]
        method: ReliabilityMethod,
    },
    /// Density of the m-th upper record, or seeded draws of it.
    Records {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long)]
        m: u32,
        /// Second record index; required by the series form.
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, value_enum, default_value = "closed")]
        form: RecordForm,
        #[arg(long, num_args = 1.., value_delimiter = ',', allow_negative_numbers = true,
              conflicts_with_all = ["grid", "sample"])]
        pdf_at: Option<Vec<f64>>,
        #[arg(long, value_parser = parse_grid, conflicts_with = "sample")]
        grid: Option<Grid>,
        /// Number of record draws.
        #[arg(long, requires = "seed")]
        sample: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Maximum-likelihood fit to a data file.
    Fit {
        #[arg(long)]
        input: PathBuf,
        /// Flat key=value fit specification.
        #[arg(long, required_unless_present = "family")]
        spec: Option<PathBuf>,
        /// Baseline family with default fit settings.
        #[arg(long, conflicts_with = "spec")]
        family: Option<Family>,
        #[arg(long)]
        seed: u64,
    },
    /// pdf and hazard on a grid, for plotting.
    Plotdata {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long, value_parser = parse_grid)]
        grid: Grid,
    },
}

#[derive(Args, Debug)]
struct DistArgs {
    #[arg(long)]
    c: f64,
    #[arg(long)]
    gamma: f64,
    /// Baseline family followed by its parameters, e.g. `lomax 1 1`.
    #[arg(long, num_args = 1.., allow_negative_numbers = true, required = true, value_name = "FAMILY PARAMS")]
    baseline: Vec<String>,
}

impl DistArgs {
    fn build(&self) -> Result<WeibullR> {
        let (family, params) = self
            .baseline
            .split_first()
            .context("missing baseline family")?;
        let family: Family = family.parse()?;
        let params = params
            .iter()
            .map(|p| {
                p.parse::<f64>()
                    .with_context(|| format!("baseline parameter '{p}' is not a number"))
            })
            .collect::<Result<Vec<_>>>()?;
        let baseline = make_baseline(family, &params)?;
        Ok(WeibullR::new(self.c, self.gamma, baseline)?)
    }
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct PointArgs {
    /// Evenly spaced grid `lo:hi:n`.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<Grid>,
    #[arg(long, num_args = 1.., value_delimiter = ',', allow_negative_numbers = true)]
    points: Option<Vec<f64>>,
}

impl PointArgs {
    fn values(&self) -> Vec<f64> {
        match (&self.grid, &self.points) {
            (Some(g), _) => g.values(),
            (None, Some(p)) => p.clone(),
            (None, None) => Vec::new(),
        }
    }
}

#[derive(Args, Debug)]
struct QuadArgs {
    #[arg(long, default_value_t = QuadratureSpec::default().laguerre_nodes)]
    nodes: usize,
    #[arg(long, default_value_t = QuadratureSpec::default().adaptive_tol)]
    tol: f64,
    #[arg(long, default_value_t = QuadratureSpec::default().max_subdivisions)]
    max_subdivisions: usize,
}

impl QuadArgs {
    fn spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            laguerre_nodes: self.nodes,
            adaptive_tol: self.tol,
            max_subdivisions: self.max_subdivisions,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum What {
    Pdf,
    Cdf,
    Survival,
    Hazard,
    Quantile,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReliabilityMethod {
    Auto,
    Series,
    Quadrature,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RecordForm {
    Closed,
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Grid {
    lo: f64,
    hi: f64,
    n: usize,
}

impl Grid {
    fn values(&self) -> Vec<f64> {
        let step = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n)
            .map(|i| {
                if i + 1 == self.n {
                    self.hi
                } else {
                    self.lo + step * i as f64
                }
            })
            .collect()
    }
}

fn parse_grid(s: &str) -> std::result::Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err("grid must look like lo:hi:n".into());
    };
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad grid start '{lo}'"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad grid end '{hi}'"))?;
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| format!("bad grid size '{n}'"))?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(format!("grid needs finite lo < hi, got {lo}:{hi}"));
    }
    if n < 2 {
        return Err("grid needs at least 2 points".into());
    }
    Ok(Grid { lo, hi, n })
}

fn eval(d: &WeibullR, what: What, xs: &[f64]) -> Result<Output> {
    let name = match what {
        What::Pdf => "pdf",
        What::Cdf => "cdf",
        What::Survival => "survival",
        What::Hazard => "hazard",
        What::Quantile => "quantile",
    };
    let rows = xs
        .iter()
        .map(|&x| {
            let v = match what {
                What::Pdf => d.pdf(x),
                What::Cdf => d.cdf(x),
                What::Survival => d.survival(x),
                What::Hazard => d.hazard(x)?,
                What::Quantile => d.quantile(x)?,
            };
            Ok(vec![x, v])
        })
        .collect::<Result<Vec<_>>>()?;
    let first = if matches!(what, What::Quantile) {
        "p"
    } else {
        "x"
    };
    Ok(Output::table(&[first, name], rows))
}

fn run(cli: Cli) -> Result<Output> {
    Ok(match cli.command {
        Command::Eval { dist, what, at } => eval(&dist.build()?, what, &at.values())?,
        Command::Sample { dist, n, seed } => {
            let d = dist.build()?;
            let draws = d.sample(n, &mut RandomSource::new(seed));
            Output::table(&["x"], draws.into_iter().map(|x| vec![x]).collect())
        }
        Command::Moments { dist, order, quad } => {
            let d = dist.build()?;
            let q = quad.spec();
            let items = order
                .iter()
                .map(|&r| Ok((format!("moment_{r}"), moment(&d, r, &q)?.value)))
                .collect::<Result<Vec<_>>>()?;
            Output::Scalars(items)
        }
        Command::Entropy { dist, quad } => {
            let d = dist.build()?;
            Output::Scalars(vec![(
                "entropy".into(),
                shannon_entropy(&d, &quad.spec())?.value,
            )])
        }
        Command::Reliability {
            c1,
            c2,
            kmax,
            method,
        } => {
            let q = ReliabilityQuery::new(c1, c2)?.with_kmax(kmax);
            let r = match method {
                ReliabilityMethod::Auto => reliability(&q)?,
                ReliabilityMethod::Series => reliability_series(&q)?,
                ReliabilityMethod::Quadrature => reliability_quadrature(&q)?,
            };
            Output::Scalars(vec![("R".into(), r)])
        }
        Command::Records {
            dist,
            m,
            n,
            form,
            pdf_at,
            grid,
            sample,
            seed,
        } => {
            let d = dist.build()?;
            if let Some(count) = sample {
                let seed = seed.context("--sample needs --seed")?;
                let draws = sample_records(&d, m, count, &mut RandomSource::new(seed))?;
                return Ok(Output::table(
                    &["x"],
                    draws.into_iter().map(|x| vec![x]).collect(),
                ));
            }
            let xs = match (pdf_at, grid) {
                (Some(p), _) => p,
                (None, Some(g)) => g.values(),
                (None, None) => bail!(UsageError(
                    "records needs --pdf-at, --grid or --sample".into()
                )),
            };
            let query = match (form, n) {
                (RecordForm::Series, Some(n)) => Some(RecordQuery::new(m, n)?),
                (RecordForm::Series, None) => bail!(UsageError("the series form needs --n".into())),
                (RecordForm::Closed, _) => None,
            };
            let rows = xs
                .iter()
                .map(|&x| {
                    let v = match &query {
                        Some(q) => record_marginal_pdf_series(&d, q, x)?,
                        None => record_marginal_pdf_closed(&d, m, x)?,
                    };
                    Ok(vec![x, v])
                })
                .collect::<Result<Vec<_>>>()?;
            Output::table(&["x", "record_pdf"], rows)
        }
        Command::Fit {
            input,
            spec,
            family,
            seed,
        } => {
            let data = data::read_values(&input).map_err(|e| UsageError(format!("{e:#}")))?;
            let spec = match (spec, family) {
                (Some(path), _) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| UsageError(format!("reading {}: {e}", path.display())))?;
                    FitSpec::parse(&text)?
                }
                (None, Some(f)) => FitSpec::new(f),
                (None, None) => bail!(UsageError("fit needs --spec or --family".into())),
            };
            let fit = fit_mle(&data, &spec, &RandomSource::new(seed))?;
            let mut items = vec![
                ("c".to_string(), fit.params.c),
                ("gamma".to_string(), fit.params.gamma),
            ];
            for (name, v) in fit
                .baseline
                .family()
                .param_names()
                .iter()
                .zip(fit.baseline.params())
            {
                items.push((name.to_string(), v));
            }
            items.push(("log_likelihood".into(), fit.log_likelihood));
            items.push(("converged".into(), if fit.converged { 1.0 } else { 0.0 }));
            items.push(("iterations".into(), fit.iterations as f64));
            Output::Scalars(items)
        }
        Command::Plotdata { dist, grid } => {
            let d = dist.build()?;
            let rows = grid
                .values()
                .into_iter()
                .map(|x| {
                    let pdf = d.pdf(x);
                    let hazard = if d.support().contains_interior(x) {
                        d.hazard(x).unwrap_or(f64::NAN)
                    } else {
                        0.0
                    };
                    vec![x, pdf, hazard]
                })
                .collect();
            Output::table(&["x", "pdf", "hazard"], rows)
        }
    })
}

/// Input problems detected after argument parsing.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<weibull_r::Error>() {
        Some(e) if e.is_numerical() => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let format = cli.format;
    match run(cli) {
        Ok(out) => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            if let Err(e) = out.write(format, &mut lock).and_then(|_| lock.flush()) {
                if e.kind() != io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::FAILURE;
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
