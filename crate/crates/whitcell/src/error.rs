//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid rank {rank} for type {type_label}")]
    InvalidRank { type_label: String, rank: usize },

    #[error("unsupported type label: {0}")]
    UnsupportedType(String),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("operands belong to different groups")]
    MixedDatum,

    #[error("rank {rank} exceeds the enumeration bound {bound}")]
    RankTooLarge { rank: usize, bound: usize },

    #[error("operation not defined for type {0}")]
    WrongType(String),

    #[error("label is not special: {0}")]
    NotSpecial(String),

    #[error("class function is not a character: {0}")]
    NotACharacter(String),

    #[error("class functions attached to different groups")]
    DatumMismatch,

    #[error("the empty subset is rejected: {0}")]
    EmptySubset(String),

    #[error("oracle bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistency(String),

    #[error("cannot parse {what}: {input}")]
    Parse { what: &'static str, input: String },
}

pub type Result<T> = std::result::Result<T, Error>;
