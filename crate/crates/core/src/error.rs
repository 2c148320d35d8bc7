use thiserror::Error;

/// Errors raised by the exact engine.
///
/// Report-valued checks (symplectic action, Hilbert bases, axioms) never use
/// this type; they return a report instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableMismatch { left: usize, right: usize },

    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("truncation policy mismatch: {0}")]
    PolicyMismatch(String),

    #[error("singular matrix")]
    SingularMatrix,

    #[error("dimension {0} is not a positive even integer")]
    OddDimension(usize),

    #[error("lambda division by lambda^{power} failed at term {term}")]
    LambdaDivisibility { power: u32, term: String },

    #[error("group not finite within bound {bound}")]
    GroupNotFinite { bound: usize },

    #[error("group of order {order} exceeds subgroup enumeration budget {budget}")]
    SubgroupBudget { order: usize, budget: usize },

    #[error("christoffel symbols are not symmetric: {0}")]
    NotSymmetric(String),

    #[error("fixed point did not stabilize after {iterations} iterations")]
    NoStabilization { iterations: usize },

    #[error("weyl curvature differs from -omega; residual {residual}")]
    CurvatureResidual { residual: String },

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("chart file: {0}")]
    ChartFile(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
