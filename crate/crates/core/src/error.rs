use thiserror::Error;

/// Errors raised by the computational core.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GellError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("exterior degree {k} out of range for a {n}x{n} matrix")]
    DegreeOutOfRange { k: usize, n: usize },

    #[error("matrix is not skew-symmetric at ({row}, {col})")]
    NotSkewSymmetric { row: usize, col: usize },

    #[error("index subset must have even cardinality, got {0}")]
    OddSubset(usize),

    #[error("matrix is singular")]
    Singular,

    #[error("stage {stage} exceeds tower depth {depth} and no periodic tail is given")]
    StageOutOfRange { stage: usize, depth: usize },

    #[error("tower is not nested at stage {stage}: {reason}")]
    NotNested { stage: usize, reason: String },

    #[error("cannot push a class from stage {from} down to stage {to}")]
    PushBackwards { from: usize, to: usize },

    #[error("classes belong to different odometer specs")]
    SpecMismatch,

    #[error("dimension {dim} exceeds the configured bound {bound}")]
    DimensionTooLarge { dim: usize, bound: usize },

    #[error("certificate shape mismatch: {0}")]
    CertificateShape(String),

    #[error("invalid rotation data: {0}")]
    InvalidRotation(String),

    #[error("{0}")]
    Unsupported(String),

    #[error("numerical check failed: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, GellError>;
