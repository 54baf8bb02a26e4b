use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("factorization of {n} exceeded the effort budget")]
    FactorizationBudgetExceeded { n: BigInt },
    #[error("moduli {a} and {b} are not coprime")]
    NotCoprime { a: BigInt, b: BigInt },
    #[error("the valuation of zero is infinite")]
    ZeroValuation,
    #[error("{0} is not a prime")]
    NotPrime(BigInt),
    #[error("invalid congruence system: {0}")]
    InvalidSystem(String),
    #[error("no solution within {steps} lattice steps from the anchor")]
    WindowExhausted { steps: BigInt },
}
