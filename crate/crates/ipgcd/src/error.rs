use divsys::DivError;
use local_global::LgError;
use num_bigint::BigInt;
use numthy::NumError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IpError {
    #[error("inequality system not supported by the decomposition: {0}")]
    DecompositionUnsupported(String),
    #[error("{stage}: search space of {size} exceeds the configured cap")]
    SearchBudgetExceeded { stage: &'static str, size: BigInt },
    #[error("sign splitting produced more than {0} members")]
    MemberCapExceeded(usize),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("optimization requested without an objective")]
    NoObjective,
    #[error("{stage}: {source}")]
    Solver { stage: &'static str, source: LgError },
    #[error("witness failed verification against the original instance")]
    VerificationFailed,
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Div(#[from] DivError),
}
