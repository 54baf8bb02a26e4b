use numthy::NumError;
use thiserror::Error;

use crate::system::DivConstraint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivError {
    #[error("the zero polynomial has no primitive part")]
    ZeroPolynomial,
    #[error("left-hand side of a divisibility must be non-zero")]
    ZeroLhs,
    #[error("variable {0} is outside the system's universe")]
    UnknownVariable(usize),
    #[error("invalid variable order or partition: {0}")]
    InvalidPartition(String),
    #[error("substitution falsifies {0}")]
    UnsatisfiableAfterSubstitution(DivConstraint),
    #[error(transparent)]
    Num(#[from] NumError),
}
