use thiserror::Error;

use crate::dyadic::DyadicInterval;

/// Errors raised by the exact engine, the oracle and the file formats.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero in Q[√2]")]
    DivisionByZero,

    #[error("{inner} is not strictly contained in {outer}")]
    NotStrictlyContained {
        inner: DyadicInterval,
        outer: DyadicInterval,
    },

    #[error("{inner} is not contained in a grandchild of {outer}")]
    NotInGrandchild {
        inner: DyadicInterval,
        outer: DyadicInterval,
    },

    #[error("{0} and {1} lie in opposite half-lines")]
    OppositeHalfLines(DyadicInterval, DyadicInterval),

    #[error("invalid ancestor base {base}: {reason}")]
    InvalidBase {
        base: DyadicInterval,
        reason: &'static str,
    },

    #[error("function has nonzero mean; the mean part must go through the indicator engine")]
    NonZeroMean,

    #[error("interval {interval} is not aligned with leaves of scale {leaf_scale} inside {root}")]
    Misaligned {
        interval: DyadicInterval,
        root: DyadicInterval,
        leaf_scale: i32,
    },

    #[error("depth {requested} is too shallow (need at least {required})")]
    InsufficientDepth { requested: u32, required: u32 },

    #[error("functions on {0} and {1} have no common dyadic embedding")]
    IncompatibleRoots(DyadicInterval, DyadicInterval),

    #[error("leaf vector has {got} values, expected {expected}")]
    LeafCount { expected: usize, got: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("matrix of {rows}x{cols} exceeds the size cap {cap}")]
    TooLarge { rows: usize, cols: usize, cap: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
