//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the library layers.
///
/// Construction-time validation is strict so that the numeric layers can
/// assume well-formed inputs: vectors are finite, dimensions agree, action
/// supports are nonempty and in range.
#[derive(Debug, Error)]
pub enum Error {
    /// Two vectors that must share a dimension do not.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A nonempty collection was required.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// A numeric argument fell outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An environment, policy, or experiment description is invalid.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Feedback delivered to a policy does not match the played action.
    #[error("feedback contract violation: {0}")]
    Feedback(String),

    /// An arm index exceeds the number of arms.
    #[error("arm index {arm} out of range for {n_arms} arms")]
    ArmOutOfRange { arm: usize, n_arms: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
