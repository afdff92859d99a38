use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum SpcaError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("|A[{i}][{j}] - A[{j}][{i}]| = {difference:e} exceeds symmetry tolerance {tolerance:e}")]
    AsymmetryExceedsTolerance {
        i: usize,
        j: usize,
        difference: f64,
        tolerance: f64,
    },

    #[error("matrix is empty")]
    EmptyMatrix,

    #[error("eigensolver failed to converge after {max_iters} iterations")]
    ConvergenceFailure { max_iters: usize },

    #[error("requested {l} eigenpairs from a {n}x{n} matrix")]
    InvalidRank { l: usize, n: usize },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:e} below {threshold:e}")]
    NotPsd { min_eigenvalue: f64, threshold: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("SDP solution is degenerate: top eigenvalue {top_eigenvalue:e}")]
    DegenerateSolution { top_eigenvalue: f64 },

    #[error("exhaustive search needs {required} supports, budget is {budget}")]
    EnumerationBudgetExceeded { required: u128, budget: u128 },

    #[error("invalid support: {0}")]
    InvalidSupport(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("column {column} has zero variance")]
    ZeroVarianceColumn { column: usize },

    #[error("invalid kernel parameters: {0}")]
    InvalidKernelParams(String),

    #[error("{0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("dimension {0} is not divisible by 4")]
    DimensionNotDivisibleBy4(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl SpcaError {
    /// Stable short code used in structured diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            SpcaError::NotSquare { .. } => "not_square",
            SpcaError::AsymmetryExceedsTolerance { .. } => "asymmetry_exceeds_tolerance",
            SpcaError::EmptyMatrix => "empty_matrix",
            SpcaError::ConvergenceFailure { .. } => "convergence_failure",
            SpcaError::InvalidRank { .. } => "invalid_rank",
            SpcaError::NotPsd { .. } => "not_psd",
            SpcaError::InvalidParameter(_) => "invalid_parameter",
            SpcaError::DegenerateSolution { .. } => "degenerate_solution",
            SpcaError::EnumerationBudgetExceeded { .. } => "enumeration_budget_exceeded",
            SpcaError::InvalidSupport(_) => "invalid_support",
            SpcaError::DimensionMismatch { .. } => "dimension_mismatch",
            SpcaError::Parse { .. } => "parse_error",
            SpcaError::ZeroVarianceColumn { .. } => "zero_variance_column",
            SpcaError::InvalidKernelParams(_) => "invalid_kernel_params",
            SpcaError::NotPowerOfTwo(_) => "not_power_of_two",
            SpcaError::DimensionNotDivisibleBy4(_) => "dimension_not_divisible_by_4",
            SpcaError::Io(_) => "io_error",
            SpcaError::Json(_) => "json_error",
            SpcaError::Csv(_) => "csv_error",
        }
    }
}

pub type Result<T> = std::result::Result<T, SpcaError>;
