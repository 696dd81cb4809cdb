use thiserror::Error;

/// Source position (1-based line and column).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("unknown identifier `{name}` at {pos}")]
    UnknownIdentifier { name: String, pos: Pos },
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("invalid generator table: {0}")]
    InvalidTable(String),
    #[error("generator table mismatch")]
    TableMismatch,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("vector field is not homogeneous in parity")]
    InhomogeneousParity,
    #[error("zero gauge factor")]
    ZeroGauge,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("coefficients are not polynomial: {0}")]
    NonPolynomial(String),
    #[error("not a morphism: {0}")]
    NotAMorphism(String),
    #[error("symplectic space is not split")]
    NotSplit,
    #[error("Hamiltonian is not projectable")]
    NotProjectable,
    #[error("not quasi-Poisson: obstruction {0}")]
    NotQuasiPoisson(String),
    #[error("frame is not closed under the Dorfman bracket: [D{alpha}, D{beta}] has residual {residual}")]
    ClosureFailure {
        alpha: usize,
        beta: usize,
        residual: String,
    },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
