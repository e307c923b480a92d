use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("characteristic is not closed; defect D_F - D_F* = {0}")]
    NotClosed(String),
    #[error("not in the image of K: residue {0}")]
    NotInImage(String),
    #[error("unsupported operator class: {0}")]
    Unsupported(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("invalid Lie algebra data: {0}")]
    InvalidLie(String),
    #[error("degenerate bilinear form")]
    DegenerateForm,
    #[error("Casimir operator is not scalar on the adjoint module")]
    CasimirNotScalar,
    #[error("ad s is not invertible on its image: {0}")]
    NotSemisimple(String),
    #[error("{0}")]
    Invalid(String),
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
