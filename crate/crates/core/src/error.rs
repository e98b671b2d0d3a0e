use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("undeclared identifier `{name}` at offset {pos}")]
    Undeclared { name: String, pos: usize },

    #[error("non-rational literal at offset {pos}")]
    NonRational { pos: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("expression is not linear in the unknowns; offending term `{term}`")]
    Nonlinear { term: String },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("reduction modulo the system did not terminate within {0} passes")]
    IterationCap(usize),

    #[error("generator `{0}` has coefficients depending on derivatives")]
    NotPointSymmetry(String),

    #[error("generator `{0}` has symbolic parameters in its coefficients")]
    SymbolicGenerator(String),

    #[error("differential order {0} exceeds the supported maximum of 3")]
    OrderTooHigh(usize),

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("ansatz class violation: {0}")]
    Ansatz(String),

    #[error("line {line}: {msg}")]
    Model { line: usize, msg: String },

    #[error("unknown model `{0}`")]
    UnknownModel(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn model(line: usize, msg: impl Into<String>) -> Self {
        Error::Model {
            line,
            msg: msg.into(),
        }
    }
}
