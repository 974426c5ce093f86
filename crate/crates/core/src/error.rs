use thiserror::Error;

/// Errors raised by the spectral matching library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("resolvent shift {0} coincides with an eigenvalue")]
    SingularShift(f64),
    #[error("z = {re}{im:+}i lies on the branch cut [-2, 2]")]
    BranchCutViolation { re: f64, im: f64 },
    #[error("argument {0} outside the domain [-2, 2]")]
    DomainError(f64),
    #[error("model parameter out of range: {0}")]
    ModelParamError(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionError { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    ParamError(String),
    #[error("spectral norm {norm} exceeds the contour bound {bound}")]
    NormBoundViolated { norm: f64, bound: f64 },
    #[error("size {n} exceeds the limit {limit}")]
    SizeError { n: usize, limit: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
