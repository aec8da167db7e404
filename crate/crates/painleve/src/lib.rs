//! Laurent-series analysis of polynomial vector fields.
//!
//! The pipeline is [`detect_weights`] → [`indicial_solve`] → [`kowalewski`]
//! → [`propagate`] → [`constraint_curve`], all in exact rational arithmetic
//! with free parameters kept symbolic.

mod curve;
mod error;
mod indicial;
mod kowalewski;
mod linalg;
mod morphism;
mod propagate;
mod report;
mod weights;

pub use error::PainleveError;
pub use indicial::{indicial_solve, Balance};
pub use weights::{classify, detect_weights, LowerTerm, WeightVector};
pub use kowalewski::{kowalewski, kowalewski_matrix, weight_checks, KowalewskiData, WeightCheck};
pub use propagate::{check_residual, count_free_parameters, propagate, LaurentFamily, ParameterCount, ResonanceParam};
pub use curve::{constraint_curve, ConstraintVariety, InvariantRelation};
pub use morphism::{restoring_morphism_check, ComponentCheck, MorphismReport};
pub use report::{analyze, effective_order, BalanceReport, CurveReport, FamilyReport, MorphismSummary, PainleveReport, WeightReport};
