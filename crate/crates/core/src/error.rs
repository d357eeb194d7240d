use thiserror::Error;

use crate::quadrature::QuadratureError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of a function.
    #[error("{function}: argument out of domain ({detail})")]
    Domain {
        function: &'static str,
        detail: String,
    },

    /// An iterative evaluation hit its iteration cap.
    #[error("{function}: no convergence after {iterations} iterations")]
    NoConvergence {
        function: &'static str,
        iterations: usize,
    },

    /// Numerical integration for exceedance probability `component` (0-based) failed.
    #[error("integration for component {component} failed: {source}")]
    Integration {
        component: usize,
        #[source]
        source: QuadratureError,
    },

    #[error("invalid concentration parameters: {0}")]
    InvalidAlpha(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("mode undefined: alpha[{index}] = {value} is not greater than 1")]
    ModeUndefined { index: usize, value: f64 },

    #[error("gamma draws underflowed to zero in {attempts} consecutive attempts")]
    SamplingUnderflow { attempts: usize },
}

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }

    /// True for failures caused by an iteration or subdivision budget rather than bad input.
    pub fn is_convergence_failure(&self) -> bool {
        matches!(self, Error::NoConvergence { .. } | Error::Integration { .. })
    }
}
