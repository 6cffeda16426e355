use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("ambient dimension {0} is outside the supported range 1..=12")]
    DimensionOutOfRange(usize),

    #[error("operand is not a grade-1 element")]
    NotAVector,

    #[error("cannot invert the zero vector")]
    ZeroVector,

    #[error("grade {grade} exceeds ambient dimension {n}")]
    GradeOutOfRange { grade: usize, n: usize },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("alpha = {0} is an integer; the kernel constant has a pole there")]
    IntegerAlpha(String),

    #[error("point is not on the unit sphere (|x| = {0})")]
    NotOnSphere(f64),

    #[error("evaluation at the kernel singularity (distance {0:e})")]
    Singular(f64),

    #[error("series failed to converge after {terms} terms (last term {last:e})")]
    Divergence { terms: usize, last: f64 },

    #[error("invalid domain: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("fixed-point iteration diverged at step {step} (ratio {ratio:.4})")]
    FixedPointDivergence { step: usize, ratio: f64 },

    #[error("derivatives are not available for this field")]
    NoDerivative,
}

pub type Result<T> = std::result::Result<T, Error>;
