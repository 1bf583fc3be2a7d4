use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field order {0} is not an odd prime >= 3")]
    InvalidField(u64),

    #[error("polynomials live over different fields (q={left} vs q={right})")]
    FieldMismatch { left: u32, right: u32 },

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,

    #[error("modulus must have degree >= 1")]
    ConstantModulus,

    #[error("expected a monic polynomial of degree >= 1, got {0}")]
    NotMonic(String),

    #[error("{0} is not irreducible")]
    NotIrreducible(String),

    #[error("modulus {0} is not squarefree; split it with factor_shape first")]
    NotSquarefree(String),

    #[error("zero polynomial has no factor shape")]
    ZeroPolynomial,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("enumeration of {what} needs {needed} items, over the budget of {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("root finder did not converge after {iterations} iterations (max correction {max_step:e})")]
    RootFinding { iterations: usize, max_step: f64 },

    #[error("inconsistent L-series: {0}")]
    InconsistentLSeries(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
