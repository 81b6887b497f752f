//! Error types for parsing, evaluation, and pattern operations.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: expected {expected}, found {found}")]
    Syntax {
        line: u32,
        col: u32,
        expected: String,
        found: String,
    },
    #[error("unbound variable `{name}` at {line}:{col}")]
    Unbound { name: String, line: u32, col: u32 },
    #[error("hole `?{name}` at {line}:{col} is not allowed in executable source")]
    HoleNotAllowed { name: String, line: u32, col: u32 },
    #[error("expression nesting exceeds depth limit {limit}")]
    TooDeep { limit: usize },
}

impl ParseError {
    /// Position of the error when known.
    pub fn position(&self) -> Option<(u32, u32)> {
        match self {
            ParseError::Syntax { line, col, .. }
            | ParseError::Unbound { line, col, .. }
            | ParseError::HoleNotAllowed { line, col, .. } => Some((*line, *col)),
            ParseError::TooDeep { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("type error: {0}")]
    Type(String),
    #[error("arithmetic error: {0}")]
    Arithmetic(&'static str),
    #[error("step budget of {budget} exhausted")]
    BudgetExceeded { budget: u64 },
    #[error("cannot evaluate hole `?{0}`")]
    Hole(String),
    #[error("unbound variable `{0}` during evaluation")]
    UnboundVar(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("bindings missing for holes: {}", .0.join(", "))]
    IncompleteBindings(Vec<String>),
    #[error("binding for `{0}` contains a hole")]
    HoleInBinding(String),
}
