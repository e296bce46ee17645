use thiserror::Error;

use crate::model::{CaseDescriptor, ModelError};
use crate::numeric::NumericError;
use crate::parser::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("pivot limit of {limit} exceeded")]
    PivotLimit { limit: usize },
    #[error("phase-1 objective is unbounded; tableau is corrupt")]
    Unbounded,
    #[error("no K = 2^t with t <= {max_exponent} makes the witness satisfy the system")]
    WitnessExhausted { max_exponent: u32 },
    #[error(
        "{} asymptotic LP(s) are feasible but none of their witnesses satisfies the input \
         system (first: {})", cases.len(), cases[0]
    )]
    UnverifiedReduction { cases: Vec<CaseDescriptor> },
    #[error("oracle needs 2^{r} sign cases, above the cap of 2^{cap}")]
    OracleCap { r: usize, cap: usize },
    #[error("the oracle needs constant coefficients; this system depends on K")]
    ParametricSystem,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` listed twice")]
    DuplicateVariable(String),
    #[error("{0}")]
    Misuse(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
