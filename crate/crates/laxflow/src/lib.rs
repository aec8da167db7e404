//! Numerical Lax-pair machinery.
//!
//! Pencils `A(h) = sum A_k h^k` ([`MatrixPencil`]), their spectral curves
//! `det(A(h) - z I)` by interpolation, fixed-step RK4 integration of
//! `dA/dt = [A, B]` with isospectrality diagnostics, exact Poisson-bracket
//! checks on polynomial systems, and constructors for the classical flows.

pub mod builtins;
mod error;
mod integrate;
mod pencil;
mod poisson;
mod rigid;

pub use error::LaxError;
pub use integrate::{
    integrate_lax, integrate_pencil_field, invariant_drift, isospectral_drift, isospectral_drift_by_power, isospectral_relative_drift,
    halving_ratios, convergence_study, isospectral_rms_drift, rk4, CompiledPoly, CompiledSystem, FlowState, StepConfig, Trajectory,
};
pub use pencil::{
    default_nodes, pencil_charpoly, pencil_charpoly_at, pencil_charpoly_exact, MatrixPencil, RationalPencil,
    SpectralCurve, Symmetry,
};
pub use poisson::{
    bracket_polynomial, coordinate_triples, flip_poisson_entry, hamiltonian_field, jacobi_identity_check, jacobiator,
    poisson_bracket, random_points, resolve, JacobiCheck, JacobiWitness,
};
pub use rigid::{rigid_body_dims, RigidBodyDims};
