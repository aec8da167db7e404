//! Text format for polynomial vector fields.
//!
//! A `.ivf` file declares phase variables, symbolic constants, right-hand
//! sides, named invariants, an optional Poisson matrix and optional Lax
//! pencils. See [`parse_system`] for the grammar.

mod error;
pub mod expr;
mod morphism;
mod system;
pub mod builtin;

pub use error::DslError;
pub use expr::parse_expr;
pub use morphism::{morphism_header, parse_morphism, Morphism};
pub use system::{parse_system, PainleveHints, PencilSpec, Pin, VectorFieldSystem};
