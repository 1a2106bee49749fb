use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not a permutation: value {value} appears more than once")]
    DuplicateValue { value: u64 },

    #[error("not a permutation: value {value} is missing")]
    MissingValue { value: u64 },

    #[error("not a permutation: value {value} is out of range 1..={len}")]
    ValueOutOfRange { value: i64, len: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("pattern of length {len} exceeds the limit of {limit} for {what}")]
    TooLarge {
        what: &'static str,
        len: usize,
        limit: usize,
    },

    #[error("incidence graph of the pattern is not planar; use the `m` strategy instead")]
    NonPlanar,

    #[error("jordan generation gave up after {attempts} rejected samples")]
    RejectionBudgetExhausted { attempts: u64 },

    #[error("integer overflow computing {0}")]
    Overflow(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
