use thiserror::Error;

/// Errors raised while building, combining or evaluating machines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("incompatible alphabets: output base {left} does not match input base {right}")]
    IncompatibleAlphabets { left: u32, right: u32 },

    #[error("digit {digit} out of range for base {base}")]
    DigitOutOfRange { digit: u32, base: u32 },

    #[error("invalid base {0}: bases must be positive")]
    InvalidBase(u32),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("unknown state {0}")]
    UnknownState(String),

    #[error("duplicate state name {0}")]
    DuplicateState(String),

    #[error("not input-deterministic: state {state} has two different transitions on input {input}")]
    NotInputDeterministic { state: String, input: u32 },

    #[error("not letter-to-letter: transition from {state} on {input} outputs {len} letters")]
    NotLetterToLetter { state: String, input: u32, len: usize },

    #[error("initial epsilon-output violated: a letter-output transition into {0} is followed by an epsilon-output transition")]
    InitialEpsilonOutput(String),

    #[error("machine would have {states} states, above the limit of {limit}")]
    StateLimitExceeded { states: u128, limit: usize },

    #[error("construction invariant failed: {0}")]
    InvariantViolation(String),

    #[error("malformed digit word {0:?}")]
    MalformedWord(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
