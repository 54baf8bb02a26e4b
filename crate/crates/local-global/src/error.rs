use divsys::DivError;
use num_bigint::BigInt;
use numthy::NumError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LgError {
    #[error("no solution modulo {0} could be constructed")]
    NoModPSolution(BigInt),
    #[error("missing or invalid solution modulo {0}")]
    MissingModSolution(BigInt),
    #[error("{0} divides a left-hand coefficient; it needs a caller-provided solution")]
    NotEasyPrime(BigInt),
    #[error("the system is not increasing for the given partition")]
    NotIncreasing,
    #[error("internal invariant violated: {0}")]
    InvariantViolated(String),
    #[error("search space of {0} residue tuples exceeds the cap")]
    SearchBudgetExceeded(BigInt),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Div(#[from] DivError),
}
