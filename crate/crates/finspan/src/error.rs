use thiserror::Error;

/// Errors produced by validation and space checks across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An index landed outside the set it must point into.
    #[error("{field}[{index}] = {value} is out of range for a set of size {bound}")]
    OutOfRange {
        field: &'static str,
        index: usize,
        value: usize,
        bound: usize,
    },

    /// A sequence does not have the length its container demands.
    #[error("{field} has length {actual}, expected {expected}")]
    LengthMismatch {
        field: &'static str,
        expected: usize,
        actual: usize,
    },

    /// Two maps were composed but the middle objects disagree.
    #[error("cannot compose: codomain of size {left} does not match domain of size {right}")]
    DomainMismatch { left: usize, right: usize },

    /// A function or measure lives on the wrong space for the requested
    /// operation; `context` names the offending leg or operation.
    #[error("space mismatch on {context}: expected size {expected}, got {actual}")]
    SpaceMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    /// A size parameter that must be positive was zero, or a product of
    /// sizes overflowed.
    #[error("invalid size for {field}")]
    InvalidSize { field: &'static str },

    /// A dilated filter does not fit inside the input extent.
    #[error("filter does not fit: output extent in dimension {dim} would be empty")]
    FilterTooLarge { dim: usize },

    /// Raw buffers passed to an oracle disagree in shape.
    #[error("shape mismatch in {context}: expected {expected} entries, got {actual}")]
    ShapeMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    /// A check suite was asked to run zero trials.
    #[error("trials must be at least 1")]
    InvalidTrials,
}

pub type Result<T> = std::result::Result<T, Error>;
