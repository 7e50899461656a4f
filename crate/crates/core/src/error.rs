//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used by every fallible operation in this crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a layout needs at least 2 sensors, got {0}")]
    TooFewSensors(usize),

    #[error("duplicate sensor position {0}")]
    DuplicatePosition(String),

    #[error("no common rational scale with denominator <= {limit}; distances are effectively incommensurable")]
    IncommensurableDistances { limit: u64 },

    #[error("direction {0} rad lies outside the open interval (-pi/2, pi/2)")]
    DomainError(f64),

    #[error("verdict is {0}; ambiguous direction pairs exist only for unidentifiable layouts")]
    NotAmbiguous(String),

    #[error("search lattice has {cells} cells, exceeding the limit of {limit}")]
    SearchSpaceTooLarge { cells: u64, limit: u64 },

    #[error("grid_size must be >= 2, got {0}")]
    GridTooSmall(usize),

    #[error("grid_size {got} exceeds the limit of {limit}")]
    GridTooLarge { got: usize, limit: usize },

    #[error("observed phase vector has {got} entries but the pattern has {expected} pairs")]
    LengthMismatch { got: usize, expected: usize },

    #[error("collision scan needs {comparisons} comparisons, exceeding the budget of {budget}")]
    BudgetExceeded { comparisons: u128, budget: u128 },

    #[error("sensor pair ({u}, {v}) has product magnitude below 1e-300; its phase is undefined")]
    ZeroMagnitude { u: usize, v: usize },

    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),

    #[error("invalid sensor pair: {0}")]
    InvalidPair(String),

    #[error("{0}")]
    InvalidParameter(String),

    #[error("layout document: {0}")]
    LayoutFile(String),

    #[error("integer value does not fit in a 64-bit document field")]
    NumericOverflow,
}
