use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("2x2 matrix is not the image of a quaternion (shape violation {violation:.3e})")]
    MalformedMatrix { violation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("basis mismatch: {left:?} vs {right:?}")]
    BasisMismatch {
        left: crate::fock::BasisTag,
        right: crate::fock::BasisTag,
    },

    #[error("embedded block ({row}, {col}) violates the quaternion shape by {violation:.3e}")]
    NotInImage {
        row: usize,
        col: usize,
        violation: f64,
    },

    #[error("truncation order {truncation} drops tail mass {tail:.3e}")]
    TruncationTooSmall { truncation: usize, tail: f64 },

    #[error("truncation {truncation} leaves a safe block of {safe_dim} levels, need {required}")]
    SafeBlockTooSmall {
        truncation: usize,
        safe_dim: usize,
        required: usize,
    },

    #[error("axis is not a unit imaginary quaternion (|axis^2 + 1| = {defect:.3e})")]
    BadAxis { defect: f64 },

    #[error("mean photon number is zero; Mandel Q is undefined")]
    MeanZero,

    #[error("commutator is not of the form axis * C with C self-adjoint (defect {defect:.3e})")]
    NotCanonicalPair { defect: f64 },

    #[error("parameters do not lie on the slice of the given axis (off-slice part {defect:.3e})")]
    SliceMismatch { defect: f64 },

    #[error("bad grid: {0}")]
    BadGrid(String),

    #[error("cannot parse {token:?} at column {column}: {reason}")]
    Parse {
        token: String,
        column: usize,
        reason: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
