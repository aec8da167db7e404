use exactalg::AlgError;
use sysdsl::DslError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PainleveError {
    #[error("no admissible weight vector")]
    NoWeights,
    #[error("no nonzero balance")]
    NoBalance,
    /// The resonance condition at `level` fails; `residuals` are the
    /// equations left unsatisfied and `certificate` a left null vector of
    /// `level*I - L` at a generic parameter point.
    #[error("Painleve obstruction at level {level}: {residuals:?}")]
    Obstruction { level: String, residuals: Vec<String>, certificate: Vec<String> },
    #[error("singular non-resonant step at level {level}: determinant {det}")]
    SingularStep { level: String, det: String },
    #[error("order {order} too low, need at least {needed}")]
    OrderTooLow { order: u32, needed: u32 },
    #[error("series for {var} is not a solution at exponent {exponent}: residual {residual}")]
    Residual { var: String, exponent: String, residual: String },
    #[error("invariant {name} has a nonzero polar coefficient at t^{exponent}: {coeff}")]
    PolarPart { name: String, exponent: String, coeff: String },
    #[error("series too short to determine the constant term of {0}")]
    SeriesTooShort(String),
    #[error("unknown invariant `{0}`")]
    UnknownInvariant(String),
    #[error("morphism has {got} components, target has {want} variables")]
    MorphismArity { got: usize, want: usize },
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error(transparent)]
    Alg(#[from] AlgError),
}
