//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// Search- and size-limited operations report [`Error::LimitExceeded`]
/// rather than truncating silently.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error: {0}")]
    Syntax(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("arity mismatch for `{symbol}`: expected {expected}, got {got}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        got: usize,
    },

    #[error("variable x{index} out of range 1..={max}")]
    VariableOutOfRange { index: usize, max: usize },

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("bad signature: {0}")]
    BadSignature(String),

    #[error("table entry {entry} for `{symbol}` out of range 0..{size}")]
    EntryOutOfRange {
        symbol: String,
        entry: usize,
        size: usize,
    },

    #[error("missing or malformed table for `{0}`")]
    MissingTable(String),

    #[error("empty carrier: algebras must have at least one element")]
    EmptyCarrier,

    #[error("empty subuniverse: no constants and an empty seed")]
    EmptySubuniverse,

    #[error("not a congruence: {0}")]
    NotACongruence(String),

    #[error("bad partition: {0}")]
    BadPartition(String),

    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),

    #[error("empty congruence family")]
    EmptyFamily,

    #[error("context mismatch: {0}")]
    ContextMismatch(String),

    #[error("hypothesis not established: {0}")]
    HypothesisNotEstablished(String),

    #[error("improper filter: {0}")]
    ImproperFilter(String),

    #[error("{what} {value} out of range 0..{max}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        max: usize,
    },

    #[error("index {index} out of range 0..{max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("incomparable free algebra: {0}")]
    IncomparableFreeAlgebra(String),

    #[error("limit exceeded: {what} needs {needed}, cap is {cap}")]
    LimitExceeded {
        what: &'static str,
        needed: usize,
        cap: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
