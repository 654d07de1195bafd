use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Operand shapes are incompatible.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A scalar argument lies outside its admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    /// A structural invariant of an input failed (unitarity, hermiticity, ordering, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// A caller-supplied object does not satisfy an operation's precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A sampled curve ends away from its starting subspace.
    #[error("curve not closed: residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    Closure { residual: f64, tolerance: f64 },

    /// Consecutive samples are too far apart for transport to be well defined.
    #[error("grid too coarse: {0}")]
    Resolution(String),

    /// The ambient space is too small to host the requested loop construction.
    #[error("dimension condition failed: need dim >= 2n - k, got dim {dim}, n {n}, k {k}")]
    DimensionCondition { dim: usize, n: usize, k: usize },

    /// An iterative kernel failed to converge or produced a non-finite value.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
