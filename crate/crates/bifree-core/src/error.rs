use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An enumeration or transform was asked for a ground set beyond the cap.
    #[error("size limit exceeded for {what}: {got} > {max}")]
    SizeLimit {
        what: &'static str,
        got: usize,
        max: usize,
    },

    /// Two arguments that must live over the same ground set or pattern do not.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A structurally invalid argument (crossing partition, foreign block, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Text-form parsing failed.
    #[error("parse error: {0}")]
    Parse(String),

    /// A multiplicative net is missing a required pattern value.
    #[error("incomplete net: missing value for pattern {0}")]
    IncompleteNet(String),

    /// An operation only defined for single-element faces got something else.
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    /// A Fock-space word would exceed the truncation cap.
    #[error("truncation overflow: word of length {len} exceeds cap {cap}")]
    Overflow { len: usize, cap: usize },

    /// A distribution or table is missing a required entry.
    #[error("missing entry: {0}")]
    MissingEntry(String),
}
