use thiserror::Error;

use crate::verdict::Witness;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        found: usize,
    },
    #[error("map is not surjective (rank {rank} < codomain dimension {codim})")]
    NotSurjective { rank: usize, codim: usize },
    #[error("subspace is not contained in the given total space")]
    NotContained,
    #[error("modules are defined over different algebras")]
    AlgebraMismatch,
    #[error("calculi have different truncation degrees ({0} vs {1})")]
    TruncationMismatch(usize, usize),
    #[error("degree {degree} exceeds truncation degree {truncation}")]
    DegreeOverflow { degree: usize, truncation: usize },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("axiom check `{check}` failed: {witness}")]
    AxiomFailure { check: String, witness: Witness },
    #[error("closure violation in `{check}`: {witness}")]
    ClosureViolation { check: String, witness: Witness },
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("unavailable: {0}")]
    Unavailable(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
