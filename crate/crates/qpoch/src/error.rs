use thiserror::Error;

/// Errors raised by the library. Each variant maps to a stable CLI exit code
/// through [`QsError::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QsError {
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),
    #[error("cannot invert a series that is zero up to its order")]
    ZeroSeries,
    #[error("division by zero")]
    DivisionByZero,
    #[error("series valuation {0} is below the required minimum {1}")]
    Valuation(i64, i64),
    #[error("coefficient of z^{0} is beyond the known order {1}")]
    Truncated(i64, i64),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("argument outside the supported domain: {0}")]
    Domain(String),
    #[error("iteration did not converge: {0}")]
    Convergence(String),
    #[error("branch validation failed: {0}")]
    Branch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type QsResult<T> = Result<T, QsError>;

impl QsError {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            QsError::Convergence(_) => 2,
            QsError::Branch(_) => 4,
            _ => 3,
        }
    }
}
