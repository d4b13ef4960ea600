use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("complex dimension {0} exceeds the supported maximum {1}")]
    DimensionTooLarge(usize, usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("jet has zero constant term")]
    ZeroConstantTerm,
    #[error("syntax error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("weight precondition violated: {0}")]
    WeightPrecondition(String),
    #[error("leading term of a W+ element must be 1")]
    LeadingTerm,
    #[error("expected form degree 0, found {0}")]
    FormDegree(usize),
    #[error("metric is singular at the basepoint")]
    SingularMetric,
    #[error("metric is not positive definite at the basepoint")]
    NonPositiveMetric,
    #[error("basepoint normalization needs an irrational rescaling ({0})")]
    IrrationalNormalization(String),
    #[error("unknown geometry `{0}`")]
    UnknownGeometry(String),
    #[error("{what} did not converge within {passes} passes")]
    NotConverged { what: String, passes: usize },
    #[error("jet order exhausted: {0}")]
    JetExhausted(String),
    #[error("output is not a holomorphic flat section: {0}")]
    NotHolomorphic(String),
    #[error("interaction has a term of weight below 3")]
    InteractionWeight,
    #[error("twist form has an hbar-free part")]
    AlphaClassicalPart,
    #[error("line gauge does not match the twist")]
    GaugeMismatch,
    #[error("invalid configuration: {0}")]
    Config(String),
}
