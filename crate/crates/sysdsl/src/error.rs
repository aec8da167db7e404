use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DslError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: undeclared symbol `{name}`")]
    Undeclared { line: usize, col: usize, name: String },
    #[error("line {line}: {msg}")]
    Invalid { line: usize, msg: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("poisson matrix is not skew-symmetric at ({i}, {j})")]
    NonSkew { i: usize, j: usize },
    #[error("unknown invariant `{0}`")]
    UnknownInvariant(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("system `{0}` has no poisson matrix")]
    MissingPoisson(String),
}

impl DslError {
    pub(crate) fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Self {
        DslError::Syntax { line, col, msg: msg.into() }
    }
}
