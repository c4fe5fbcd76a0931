use std::fmt;

use thiserror::Error;

/// Which precondition of a decomposition was not satisfied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Hypothesis {
    /// The supervisor is not relatively observable under the given projection.
    RelativeObservability,
    /// The named block has no controllable event that is unobservable.
    NoWitness { block: usize },
    /// The construction needs exactly this many blocks.
    BlockCount { expected: usize, found: usize },
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hypothesis::RelativeObservability => write!(f, "supervisor is not relatively observable"),
            Hypothesis::NoWitness { block } => {
                write!(f, "no unobservable controllable witness in block {block}")
            }
            Hypothesis::BlockCount { expected, found } => {
                write!(f, "expected {expected} blocks, found {found}")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("event `{label}` is declared both controllable and uncontrollable")]
    ControllabilityMismatch { label: String },

    #[error("alphabets differ: {0}")]
    AlphabetMismatch(String),

    #[error("event `{0}` is already in the alphabet")]
    LabelCollision(String),

    #[error("unknown event `{0}`")]
    UnknownLabel(String),

    #[error("duplicate event `{0}`")]
    DuplicateLabel(String),

    #[error("invalid event label `{0}`")]
    InvalidLabel(String),

    #[error("state {state} out of range (generator has {states} states)")]
    StateOutOfRange { state: usize, states: usize },

    #[error("nondeterministic transition on `{label}` from state {state}")]
    Nondeterministic { state: usize, label: String },

    #[error("language of `{inner}` is not contained in that of `{outer}`")]
    NotContained { inner: String, outer: String },

    #[error("`{0}` is not controllable with respect to the plant")]
    NotControllable(String),

    #[error("containment K <= C <= G violated: {0}")]
    ContainmentViolated(String),

    #[error("internal control cover violation: {0}")]
    CoverViolation(String),

    #[error("block index {index} out of range ({blocks} blocks)")]
    BadBlockIndex { index: usize, blocks: usize },

    #[error("expected {expected} items, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(Hypothesis),

    #[error("decomposition check failed: {0}")]
    DecompositionFailed(String),

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("{0}")]
    Semantic(String),
}

pub type Result<T> = std::result::Result<T, Error>;
