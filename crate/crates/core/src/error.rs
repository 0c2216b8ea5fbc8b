use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Bad parameters or preconditions on the caller's side.
    #[error("invalid input: {0}")]
    Invalid(&'static str),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("integer overflow computing {0}")]
    Overflow(&'static str),

    #[error("resource guard: dimension {dim} exceeds limit {limit}")]
    Resource { dim: u64, limit: u64 },

    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("operator is not {0}")]
    NotDensity(&'static str),

    #[error("value {value} outside the domain [0, 1]")]
    Domain { value: f64 },

    #[error("totals differ by {diff} (tolerance {tol})")]
    TotalMismatch { diff: f64, tol: f64 },

    #[error("eigensolver did not converge")]
    NoConvergence,

    #[error("quadrature did not converge (achieved error {achieved:e})")]
    Quadrature { achieved: f64 },

    #[error("ill-conditioned fit (condition number {cond:e}); use more trials")]
    IllConditioned { cond: f64 },

    #[error("decomposition fit residual {residual:e} too large")]
    FitResidual { residual: f64 },

    #[error("fitted constant {value} is negative")]
    NegativeConstant { value: f64 },

    #[error("function is not concave near x = {at}")]
    NotConcave { at: f64 },
}
