pub mod baseline;
pub mod dist;
pub mod error;
pub mod expectation;
pub mod fit;
pub mod quadrature;
pub mod random;
pub mod records;
pub mod reliability;
pub mod specfun;

pub use baseline::{make_baseline, Baseline, BaselineDistribution, Family, Support};
pub use dist::{TailAsymptote, WeibullR, WeibullRParams};
pub use error::{Error, Result};
pub use expectation::{
    discrimination_d, discrimination_terms, expect, moment, shannon_entropy, DiscriminationTerms,
    ExpectationResult, Method, QuadratureSpec,
};
pub use fit::{fit_mle, log_likelihood, FitResult, FitSpec, Parameterization};
pub use random::RandomSource;
pub use records::{
    joint_record_pdf, record_marginal_pdf_closed, record_marginal_pdf_series, sample_records,
    RecordQuery,
};
pub use reliability::{
    reliability, reliability_between, reliability_quadrature, reliability_series, ReliabilityQuery,
};
