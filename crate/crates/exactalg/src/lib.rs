//! Exact arithmetic kernel.
//!
//! Rationals are `num_rational::BigRational`. On top of them this crate
//! provides sparse multivariate polynomials ([`MultiPoly`]), dense univariate
//! polynomials with real-root isolation ([`UPoly`]), truncated Puiseux series
//! in `t^{1/l}` ([`PuiseuxSeries`]) and dense matrices over any [`Ring`].

mod error;
mod eigen;
mod matrix;
mod poly;
pub mod rational;
mod series;
mod upoly;

pub use error::AlgError;
pub use eigen::{
    classify_integer, eigenvalues, rational_eigenvalues, ClassifiedEigenvalue,
    DEFAULT_INTEGER_TOL,
};
pub use matrix::{Ring, RingMatrix};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use poly::MultiPoly;
pub use series::{series_mul, PuiseuxSeries};
pub use upoly::{RealRoot, UPoly};

/// Shorthand for the rational field.
pub type Rat = BigRational;
