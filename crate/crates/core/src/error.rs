use thiserror::Error;

/// Errors raised by the weibull-r library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A distribution parameter violates its constraint.
    #[error("invalid parameter `{field}` = {value}: {reason}")]
    Parameter {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("unknown baseline family `{0}`")]
    UnknownFamily(String),

    /// The integral does not converge (or appears not to).
    #[error("integral diverges or failed to converge (last estimate {last}, previous {previous})")]
    Divergence { last: f64, previous: f64 },

    /// The reliability series is outside its region of convergence.
    #[error("series diverges for shape ratio c2/c1 = {ratio}; use the dispatching reliability()")]
    SeriesDomain { ratio: f64 },

    #[error("no convergence after {iterations} iterations")]
    NonConvergence { iterations: usize },

    /// Alternating sum lost too many digits to be trusted.
    #[error("cancellation in alternating series (term mass {term_mass:e} vs result {result:e}); use the closed form")]
    Cancellation { term_mass: f64, result: f64 },

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    /// `true` for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Divergence { .. }
                | Error::SeriesDomain { .. }
                | Error::NonConvergence { .. }
                | Error::Cancellation { .. }
                | Error::Fit(_)
        )
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
