//! Periodic Jacobi matrices: spectral curve, bands and auxiliary spectrum,
//! the continued fraction of the Weyl function, Pade approximants, and the
//! spectral measure with its Cauchy-Stieltjes check.
//!
//! Indices of `a` and `b` run from 1 to N; `a_0` always means `a_N`.

pub mod error;
pub mod fraction;
pub mod jacobi;
pub mod measure;
pub mod quad;
pub mod report;
pub mod toda;

pub use error::JacobiError;
pub use fraction::{carleman_partial_sum, gamma_fraction, moments, moments_exact, pade, pade_exact, pade_sequence, series_at_infinity};
pub use jacobi::{h_inner, spectral_data, Interval, PeriodicJacobi, SpectralData};
pub use measure::{measure_decompose, measure_from_spectral, orthogonality_check, Atom, Orthogonality, StieltjesMeasure};
pub use quad::{band_integral, band_integral_with_edges, gauss_legendre};
pub use report::{spectral_report, toda_csv, z_grid, InterlacingRow, SpectralReport, StieltjesCheck};
pub use toda::{toda_flow_jacobi, toda_invariants, TodaRun, TodaSample};
