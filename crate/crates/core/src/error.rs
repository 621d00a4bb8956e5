use thiserror::Error;

use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("word {0} has a letter with nonzero upper index; expected an element of H^1")]
    NotInH1(Word),
    #[error("invalid letter e({k},{d}): weight index must be at least 1")]
    InvalidLetter { k: i64, d: i64 },
    #[error("negative argument {0} passed to bernoulli")]
    NegativeBernoulli(i64),
    #[error("lambda coefficient index j={j} outside 1..={a}")]
    LambdaIndex { a: u32, j: u32 },
    #[error("index must be non-empty with all entries >= 1, got {0:?}")]
    InvalidIndex(Vec<u32>),
    #[error("no closed bi-bracket formula for depth {0} (only depth <= 3)")]
    DepthTooLarge(usize),
    #[error("series truncation orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("truncation order {order} is below the span rank {rank}")]
    OrderTooSmall { order: usize, rank: usize },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
