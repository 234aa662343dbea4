use thiserror::Error;

/// Errors raised by the exact-arithmetic constructions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate lattice")]
    DegenerateLattice,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("zero form")]
    ZeroForm,
    #[error("form degree must be at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("leading coefficient vanishes; apply GL2 transport")]
    LeadingCoefficientVanishes,
    #[error("degenerate tensor: zero determinant form")]
    DegenerateTensor,
    #[error("degenerate form: zero discriminant")]
    DegenerateForm,
    #[error("non-integral value where an integer was required: {0}")]
    NonIntegral(String),
    #[error("index {index} out of range {range}")]
    OutOfRange { index: usize, range: String },
    #[error("element is a zero divisor")]
    ZeroDivisor,
    #[error("module is not characteristic")]
    NotCharacteristic,
    #[error("objects live over different rings")]
    ContextMismatch,
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("not unimodular: determinant {0}")]
    NotUnimodular(String),
    #[error("tensor is not symmetric")]
    NotSymmetric,
    #[error("bound too large: {0}")]
    BoundTooLarge(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
