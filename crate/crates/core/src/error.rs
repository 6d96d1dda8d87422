//! Crate-wide error type.

use crate::semiring::SemiringKind;

/// Errors produced by parsing, construction, and decision procedures.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Query syntax error, with a byte offset into the query text.
    #[error("syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },

    /// Error in a line-oriented input file.
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    /// Unknown semiring tag in a file or on the command line.
    #[error("unknown semiring tag `{0}` (expected boolean, tropical, fuzzy, or multiplicity)")]
    UnknownSemiring(String),

    /// Two weights from different semirings met in one operation.
    #[error("mixed semiring operands: {left} and {right}")]
    MixedSemirings {
        left: SemiringKind,
        right: SemiringKind,
    },

    /// A weight or automaton did not belong to the expected semiring.
    #[error("expected a {expected} value, got {found}")]
    SemiringMismatch {
        expected: SemiringKind,
        found: SemiringKind,
    },

    /// A transition or edge carried the semiring zero, which is banned there.
    #[error("zero-weight {0} (the semiring zero is not allowed here)")]
    ZeroWeight(&'static str),

    /// Fixed-width arithmetic overflowed; never wraps silently.
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    /// A construction exceeded the configured state budget.
    #[error("state cap of {cap} states exceeded during {during}")]
    StateCapExceeded { cap: usize, during: &'static str },

    /// An object named in a request does not exist in the database.
    #[error("unknown object `{0}`")]
    UnknownObject(String),

    /// Tropical and multiplicity comparisons need an explicit weight bound.
    #[error("a weight bound is required for {0} comparisons")]
    MissingBound(SemiringKind),

    /// A sphere level needed by a stripe computation was not built.
    #[error("missing sphere level {0}")]
    MissingSphereLevel(u64),

    /// A combination of inputs the artifact deliberately refuses.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
