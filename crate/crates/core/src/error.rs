use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the domain of an operation (unknown outcome, empty subset, space mismatch).
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid parameter value (e.g. `m` in {0, 1} for the power family).
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Data insufficient or inconsistent for the requested estimator.
    #[error("data error: {0}")]
    Data(String),

    /// Estimate exists but the derived quantity does not (e.g. population size from a zero rate).
    #[error("degenerate data: {0}")]
    Degenerate(String),

    /// Exhaustive routine asked to run beyond its size cap.
    #[error("capacity exceeded: {what} has size {size}, limit is {limit}")]
    Capacity {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    /// A documented precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An equation has no admissible root.
    #[error("no root: {0}")]
    NoRoot(String),
}

pub type Result<T> = std::result::Result<T, Error>;
