use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JacobiError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("alpha = prod a_j vanishes")]
    AlphaZero,
    #[error("expected {expected} real branch points, found {found}")]
    BranchPoints { expected: usize, found: usize },
    #[error("auxiliary eigenvalue sigma_{j} = {sigma} lies outside the gap [{lo}, {hi}]")]
    Interlacing { j: usize, sigma: f64, lo: f64, hi: f64 },
    #[error("auxiliary spectrum is degenerate: {0}")]
    Degenerate(String),
    #[error("continued fraction hit a near-zero denominator at level {level}")]
    Division { level: usize },
    #[error("negative mass {mass} at sigma_{j}")]
    NegativeMass { j: usize, mass: f64 },
    #[error("negative density {value} at x = {x}")]
    NegativeDensity { x: f64, value: f64 },
    #[error("quadrature did not converge on [{lo}, {hi}]")]
    Quadrature { lo: f64, hi: f64 },
    #[error("off-diagonal entry a_{j} vanished at t = {time}")]
    Degeneration { j: usize, time: f64 },
    #[error(transparent)]
    Flow(#[from] laxflow::LaxError),
    #[error(transparent)]
    Alg(#[from] exactalg::AlgError),
}
