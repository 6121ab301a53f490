//! Numerical verification engine for almost contact metric 3-structures on
//! coordinate charts.
//!
//! The crate builds two families of explicit models -- the round sphere
//! `S^{4n+3}` carrying a 3-Sasakian structure and flat space `R^{4n+3}`
//! carrying a 3-cosymplectic structure -- and checks the defining axioms,
//! Levi-Civita and canonical-connection identities, curvature values, and
//! frame constructions at randomly sampled chart points.  All differentiation
//! is exact (truncated jets); finite differences appear only as a
//! cross-checking oracle.
//!
//! # Conventions
//!
//! Sign conventions are the single largest source of discrepancy between
//! sources in this subject, so the ones used here are pinned once and used
//! everywhere:
//!
//! * **Exterior derivative of a 1-form** (the "1/2 convention"):
//!   `dh(X, Y) = (X h(Y) - Y h(X) - h([X, Y])) / 2`.
//! * **Wedge product**: `(a ^ b)(X, Y) = (a(X) b(Y) - a(Y) b(X)) / 2`.
//! * **Fundamental 2-form**: `Phi(X, Y) = g(X, phi Y)`.
//! * **Curvature**: `R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z -
//!   nabla_{[X, Y]} Z`, so the round sphere has `R(X, Y)Z = g(Y, Z) X -
//!   g(X, Z) Y` and sectional curvature `+1`.
//! * **Structure endomorphism matrices act on column vectors**: the entry
//!   `M[i][j]` is the `i`-th component of the image of the `j`-th basis
//!   vector.
//! * **Quaternionic structure on the sphere** comes from *right*
//!   multiplication by `i, j, k` on `H^{n+1}`.
//!
//! Under these conventions the 3-Sasakian sphere satisfies
//! `nabla_X xi_a = -phi_a X`, `[xi_1, xi_2] = 2 xi_3`, and
//! `d eta_a = Phi_a`.

// Tensor-component code walks several parallel flat arrays by index; the
// iterator rewrites clippy suggests obscure which index is contracted.
#![allow(clippy::needless_range_loop)]

pub mod canonical;
pub mod checks;
pub mod contact3;
pub mod darboux;
pub mod fields;
pub mod jets;
pub mod models;
pub mod report;
pub mod riemann;
pub mod sampling;

pub use canonical::CanonicalConnection;
pub use checks::{registry, run_checks, CheckContext, CheckDef, CheckOutcome, Suite};
pub use contact3::{AcmStructure, Acm3Structure, StructureClass};
pub use darboux::{build_darboux_frame, DarbouxError, DarbouxFrame};
pub use fields::{
    lie_bracket, lie_derivative_endomorphism, lie_derivative_metric, wedge, EndomorphismField,
    MetricField, OneForm, ScalarField, ThreeForm, TwoForm, VectorField,
};
pub use jets::{ChartPoint, Jet, JetError, MAX_ORDER};
pub use models::{Model, ModelKind};
pub use report::{Conventions, VerificationCheck, VerificationReport};
pub use riemann::{Connection, LeviCivita};
pub use sampling::SplitMix64;
