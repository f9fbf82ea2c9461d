use thiserror::Error;

/// Errors raised by the combinatorial, exact and numerical routines.
///
/// The variants follow the failure categories of the operations rather than
/// the module that raised them, so callers (and the CLI exit codes) can react
/// uniformly.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input object: a tableau, matrix or diagram breaking its invariants.
    #[error("structural error: {0}")]
    Structural(String),
    /// Argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A quantity the formula divides by vanishes for these parameters.
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    /// Two routes to the same quantity disagree, or an exact identity failed.
    #[error("consistency check failed: {0}")]
    Consistency(String),
    /// A recursion broke down (zero pivot, zero diagonal of R, ...).
    #[error("breakdown: {0}")]
    Breakdown(String),
    /// Point outside the oscillatory (bulk) region required by an asymptotic formula.
    #[error("outside oscillatory region: {0}")]
    Region(String),
    /// A feasibility guard on problem size was exceeded.
    #[error("resource guard: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;
