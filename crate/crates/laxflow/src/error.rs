use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LaxError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("empty pencil")]
    Empty,
    #[error("pencil evaluated at h = 0 but has negative powers of h")]
    PoleAtZero,
    #[error("interpolation nodes are not distinct ({0} repeated)")]
    SingularInterpolation(String),
    #[error("step size must be positive, got {0}")]
    StepSize(f64),
    #[error("end time must be non-negative, got {0}")]
    EndTime(f64),
    #[error("state norm exceeded {bound} at t = {time}")]
    BlowUp { time: f64, bound: f64 },
    #[error("commutator has a nonzero h^{degree} term outside the window [{low}, {high}]")]
    Window { degree: i32, low: i32, high: i32 },
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("unknown function `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Dsl(#[from] sysdsl::DslError),
    #[error(transparent)]
    Alg(#[from] exactalg::AlgError),
}
