use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable count mismatch: {0} vs {1}")]
    NvarsMismatch(usize, usize),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("the zero polynomial has no {0}")]
    ZeroPolynomial(&'static str),
    #[error("degree {degree:?} exceeds bound {bound:?}")]
    DegreeExceeds { degree: Vec<u32>, bound: Vec<u32> },
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("polynomial is not multi-affine in {0}")]
    NotMultiAffine(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),
    #[error("polynomial is not symmetric (asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("input has non-real coefficients")]
    NotReal,
    #[error("input is not homogeneous")]
    NotHomogeneous,
    #[error("incomplete sequence: missing value at {0:?}")]
    IncompleteSequence(Vec<u32>),
    #[error("non-diagonal support at {0:?}")]
    NonDiagonal(Vec<u32>),
    #[error("polynomial is not real-rooted")]
    NotRealRooted,
    #[error("brute-force bound exceeded: {what} = {value} > {bound}")]
    BoundExceeded { what: &'static str, value: usize, bound: usize },
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
