use thiserror::Error;

use crate::diffop::ConditionCheck;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A series reciprocal was requested for a series with zero constant term.
    #[error("series has zero constant term and no reciprocal")]
    SingularSeries,

    /// A parameter is outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The differential operator does not preserve degrees.
    #[error("operator does not preserve polynomial degree: {0}")]
    UnsolvableOperator(ConditionCheck),

    /// The contour radius reaches a singularity of the generating function.
    #[error("contour radius {radius} is not inside the analyticity disk of radius {limit}")]
    Contour { radius: f64, limit: f64 },

    #[error("quadrature rule of exactness {exactness} cannot integrate degree {required}")]
    InsufficientRule { exactness: usize, required: usize },

    /// The Sobolev form is not positive on polynomials of the given degree.
    #[error("Sobolev form is degenerate at degree {degree} (pivot {pivot:e})")]
    DegenerateForm { degree: usize, pivot: f64 },

    #[error("unsupported weight shape: {0}")]
    UnsupportedShape(String),

    #[error("sequence too short: need {needed}, got {got}")]
    TooShort { needed: usize, got: usize },

    /// The family has no recurrence pencil.
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),

    #[error("precondition not met: {0}")]
    Precondition(String),
}
