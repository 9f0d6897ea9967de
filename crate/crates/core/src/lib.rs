//! Decision procedures for quantum and probabilistic liftings.
//!
//! A *lifting* of two marginals is a coupling (a joint state or joint
//! sub-distribution reproducing both marginals) whose support lies inside a
//! prescribed subspace or relation. This crate decides lifting existence and
//! always returns a checkable proof object:
//!
//! * [`sdp::check_quantum_lifting`] solves the coupling semidefinite program
//!   with a dense primal-dual interior-point method and returns either a
//!   witness density operator or a dual certificate `(Y1, Y2)` with
//!   `P_X^perp >= Y1 (x) I - I (x) Y2` and `tr(rho1 Y1) > tr(rho2 Y2)`.
//! * [`classical::check_lifting_maxflow`] decides the classical case by
//!   max-flow/min-cut and returns a witness joint sub-distribution or a set
//!   `S` with `mu1(S) > mu2(R(S))`.
//! * [`reduction`] embeds classical instances diagonally and cross-checks the
//!   two deciders against each other.
//!
//! The crate is `no_std` and only needs `alloc`.
//!
//! Composite indices on `H1 (x) H2` are row-major everywhere: the basis
//! vector `|i>|k>` has index `i * d2 + k`.

#![cfg_attr(not(test), no_std)]
// `!(x <= tol)` is deliberate: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod classical;
pub mod error;
pub mod linalg;
pub mod quantum;
pub mod reduction;
pub mod sdp;

pub use error::{Error, Result};
pub use linalg::{Complex, ComplexMatrix, HermitianOperator, Spectrum, Subspace};
pub use quantum::{CouplingProblem, DensityOperator};
pub use sdp::{LiftingVerdict, SdpSolution};

/// Default tolerance for the boolean verification predicates.
pub const DEFAULT_TOL: f64 = 1e-7;
/// Default solver accuracy target (gap and residuals).
pub const DEFAULT_EPS_SOLVE: f64 = 1e-8;
/// Default threshold on `tr(rho1) - optimum` below which a lifting is declared.
pub const DEFAULT_EPS_DECIDE: f64 = 1e-6;
/// Default relative eigenvalue cutoff used to compute supports.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;
