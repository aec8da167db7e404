use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgError {
    #[error("no value assigned to symbol `{0}`")]
    MissingSymbol(String),
    #[error("branching index mismatch: {0} vs {1}")]
    BranchingMismatch(u32, u32),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix contains a non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid interval [{0}, {1}]")]
    BadInterval(f64, f64),
}
