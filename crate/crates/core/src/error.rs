use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 1")]
    ZeroModulus,

    #[error("insufficient elements: need at least {needed}, got {got}")]
    InsufficientElements { needed: usize, got: usize },

    #[error("budget exceeded: {what} needs {needed} steps, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u64,
    },

    #[error("coloring covers {colored} positions but there are {values} values")]
    ColoringLength { colored: usize, values: usize },

    #[error("color {color} at position {position} is outside 1..={r}")]
    ColorOutOfRange {
        position: usize,
        color: usize,
        r: usize,
    },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid surrogate: {0}")]
    InvalidSurrogate(String),

    #[error("shift {z} lies outside the star set")]
    ShiftOutsideStar { z: u64 },

    #[error("translation not found within bound {bound}")]
    TranslationNotFound { bound: u64 },

    #[error("insufficient sequence length: sequence {seq} needs {needed} terms, has {got}")]
    InsufficientSequenceLength { seq: usize, needed: usize, got: usize },

    #[error("EGZ pool too small at level {level}, sequence {seq}: largest class has {largest} terms, need {needed}")]
    PoolTooSmall {
        level: usize,
        seq: usize,
        largest: usize,
        needed: usize,
    },

    #[error("combinatorial blowup: {count} chain-sum elements exceed budget {budget}")]
    CombinatorialBlowup { count: u128, budget: u64 },

    #[error("arithmetic overflow while {0}")]
    Overflow(&'static str),

    #[error("sequence fingerprint mismatch for sequence {seq}: {detail}")]
    FingerprintMismatch { seq: usize, detail: String },

    #[error("malformed certificate: {0}")]
    Certificate(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }

    /// True for the variants that signal an exhausted search budget rather
    /// than a malformed input.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. }
                | Error::CombinatorialBlowup { .. }
                | Error::TranslationNotFound { .. }
        )
    }
}
