//! Error type shared across the library.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum MasseyError {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: String, right: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("element is not homogeneous")]
    NotHomogeneous,

    #[error("element is not closed")]
    NotClosed,

    #[error("element is not exact")]
    NotExact,

    #[error("algebra context mismatch: {0}")]
    ContextMismatch(String),

    #[error("invalid defining system: {0}")]
    InvalidDefiningSystem(String),

    #[error("massey product is not well-defined: {0}")]
    NotWellDefined(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown corpus id `{0}`")]
    UnknownCorpusId(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
