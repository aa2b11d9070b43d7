use thiserror::Error;

use crate::formula::VarId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable {0} has no value in the assignment")]
    MissingVariable(VarId),

    #[error("table arity {arity} exceeds the cap of {cap}")]
    ArityOverflow { arity: usize, cap: usize },

    #[error("variable {0} occurs in the matrix but is not quantified")]
    OpenFormula(VarId),

    #[error("variable {0} is quantified more than once")]
    DuplicateQuantification(VarId),

    #[error("variable {0} is not the first variable of the prefix")]
    NotFirstInPrefix(VarId),

    #[error("display name {0:?} is used by two variables")]
    DuplicateName(String),

    #[error("invalid variable id 0 (ids start at 1)")]
    ZeroVarId,

    #[error("certificate does not match the formula: {0}")]
    CertificateMismatch(String),

    #[error("search space of 2^{log2_candidates} candidates exceeds the budget of {budget}")]
    BudgetExceeded { log2_candidates: u64, budget: u64 },

    #[error("{0}")]
    Parse(#[from] ParseError),

    #[error("invalid corpus parameters: {0}")]
    InvalidCorpus(String),

    #[error("formula is not in standard form: {0}")]
    NotStandardForm(String),

    #[error("formula cannot be written as QDIMACS: {0}")]
    NotCnf(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnboundVariable,
    DuplicateQuantification,
    /// Structurally invalid QDIMACS (header, ranges, terminators, counts).
    Malformed,
}

/// A positioned diagnostic from one of the text parsers. Lines and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}{}", expected_suffix(.expected))]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn new(kind: ParseErrorKind, line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            kind,
            line,
            column,
            message: message.into(),
            expected: Vec::new(),
        }
    }

    pub fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self::new(ParseErrorKind::Syntax, line, column, message)
    }

    pub fn expecting(mut self, expected: &[&str]) -> Self {
        self.expected = expected.iter().map(|s| s.to_string()).collect();
        self
    }
}

fn expected_suffix(expected: &[String]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!(" (expected {})", expected.join(", "))
    }
}
