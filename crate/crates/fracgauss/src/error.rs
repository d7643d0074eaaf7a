use thiserror::Error;

/// Crate-wide error type. `exit_code` maps each variant onto the CLI
/// contract: 2 for argument/parse problems caught before any computation,
/// 3 for numerical failures discovered while computing.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("gamma pole at non-positive integer x = {0}")]
    GammaPole(f64),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("moment recurrence breakdown at index {index} (beta = {beta:e}); moments are not positive definite or too ill-conditioned")]
    MomentBreakdown { index: usize, beta: f64 },

    #[error("eigenvalue iteration failed to converge at index {0}")]
    EigenNoConverge(usize),

    #[error("degenerate quadrature rule: {0}")]
    Degenerate(String),

    #[error("contour abscissa c = {c} does not lie right of the convergence abscissa c0 = {c0}")]
    ContourViolation { c: f64, c0: f64 },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            // unsupported requests are fixed by changing the invocation,
            // so they sit with the argument errors rather than the
            // numerical failures
            Error::Parse { .. } | Error::InvalidArgument(_) | Error::Unsupported(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
