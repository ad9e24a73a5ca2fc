use thiserror::Error;

/// Errors raised by the library. The CLI maps these onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty pattern")]
    EmptyPattern,

    #[error("invalid symbol {0:?}: words are built from '0' and '1' only")]
    InvalidSymbol(char),

    #[error("block length must be at least 1")]
    ZeroBlockLength,

    #[error("invalid rational {0:?}: expected num/den with integer parts")]
    InvalidRational(String),

    #[error("probability {0} lies outside [0, 1]")]
    ProbabilityOutOfRange(String),

    #[error("Bernoulli parameter {0} is not positive: both symbols need nonzero probability")]
    NonPositiveParam(String),

    #[error("invalid DFA: {0}")]
    InvalidDfa(String),

    #[error("state {state} out of range for a DFA with {states} states")]
    InvalidState { state: usize, states: usize },

    #[error("source exhausted after {consumed} of {requested} symbols")]
    SourceExhausted { consumed: usize, requested: usize },

    #[error("matrix is not irreducible")]
    NotIrreducible,

    #[error("DFA is not strongly connected")]
    NotStronglyConnected,

    #[error("DFA has no accepting states")]
    NoAcceptingStates,

    #[error("epsilon {epsilon} exceeds stationary accepting mass c = {c}")]
    EpsilonExceedsMass { epsilon: String, c: String },

    #[error("word length {n} exceeds the enumeration cap of {cap}")]
    OverCap { n: u32, cap: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no symbols selected")]
    NothingSelected,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
