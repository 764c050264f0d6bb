//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse rational {input:?}: {reason}")]
    ParseRat { input: String, reason: String },

    #[error("time {t} outside [0,1]")]
    TimeOutOfRange { t: String },

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("path takes a negative value at {at}")]
    NotPositive { at: String },

    #[error("gadget tail unresolved: {0}")]
    UnresolvedGadget(String),

    #[error("no family member matches the queried prefix at t = {t}")]
    NoMatchingMember { t: String },

    #[error("prediction map has infinitely many change points (accumulating at {at})")]
    InfiniteChangePoints { at: String },

    #[error("event count exceeded cap {cap}")]
    EventCapExceeded { cap: usize },

    #[error("bet {bet} exceeds declared bound {bound} at event {k}")]
    BetBoundExceeded { bet: String, bound: String, k: usize },

    #[error("mixture component {index} goes negative at t = {t} (capital {capital})")]
    NegativeComponent {
        index: usize,
        t: String,
        capital: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("capital target unreachable: {0}")]
    Unreachable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
