use thiserror::Error;

/// Syntax error produced by the expression and polynomial parsers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: expected {expected}, found {found}")]
pub struct ParseError {
    /// Byte offset into the input where the unexpected token starts.
    pub offset: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid lattice base: {0}")]
    InvalidBase(String),

    #[error("cannot parse number `{0}`")]
    NumberParse(String),

    #[error("regularity violation: C_{n} = 0")]
    Regularity { n: usize },

    #[error("order {requested} exceeds available data (max order {available})")]
    OrderExceeded { requested: usize, available: usize },

    #[error("insufficient moments: degree {needed} requested, table holds moments up to degree {available}")]
    InsufficientMoments { needed: usize, available: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("admissibility violation at n = {n}: factor `{factor}` vanishes")]
    Admissibility { n: usize, factor: String },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error(transparent)]
    Syntax(#[from] ParseError),

    #[error("evaluation error: {0}")]
    Eval(String),

    #[error("predicted coefficients are singular: d_{index} vanishes")]
    Singular { index: i64 },

    #[error("predicted coefficient C_{n} vanishes")]
    PredictedZero { n: usize },

    #[error("table: {0}")]
    Table(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
