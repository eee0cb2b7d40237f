use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("invalid half-dimension n = {0}; need 1 <= n <= 16")]
    InvalidDimension(usize),
    #[error("dimension mismatch: expected n = {expected}, found n = {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("degree mismatch: expected k = {expected}, found k = {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("degree {degree} exceeds the top degree {top}")]
    DegreeOverflow { degree: usize, top: usize },
    #[error("degree {degree} is below the required {required}")]
    DegreeUnderflow { degree: usize, required: usize },
    #[error("degree {degree} exceeds the middle degree n = {n}")]
    AboveMiddleDegree { degree: usize, n: usize },
    #[error("incompatible triple: {0}")]
    IncompatibleTriple(String),
    #[error("form is not primitive: |Λa| = {residual:e}")]
    NotPrimitive { residual: f64 },
    #[error("index out of range: {0}")]
    IndexRange(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}
