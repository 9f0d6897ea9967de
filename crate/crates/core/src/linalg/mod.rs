//! Dense complex linear algebra sized for desk-scale quantum problems.
//!
//! Composite index convention: on `H1 (x) H2` with `dim H2 = d2`, the basis
//! vector `|i>|k>` sits at index `i * d2 + k`. [`tensor`] and
//! [`partial_trace`] both follow it.

mod hermitian;
mod matrix;
pub(crate) mod real;
mod subspace;

pub use hermitian::{
    hermitian_eig, inner_product, is_psd, psd_project, HermitianOperator, Spectrum, HERMITIAN_TOL,
};
pub use matrix::{cholesky, vdot, ComplexMatrix};
pub(crate) use matrix::{inverse_from_cholesky, solve_lower};
pub(crate) use hermitian::raw_inner;
pub use subspace::{orthonormalize, Subspace, GRAM_SCHMIDT_DROP_TOL, PROJECTOR_TOL};

use crate::error::{dim_err, Result};
use crate::quantum::DensityOperator;

pub type Complex = num_complex::Complex64;

/// Which tensor factor a partial trace removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceOut {
    /// `tr_1`: trace over `H1`, leaving an operator on `H2`.
    First,
    /// `tr_2`: trace over `H2`, leaving an operator on `H1`.
    Second,
}

/// Kronecker product `A (x) B`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// Partial trace of an operator on `C^{d1} (x) C^{d2}`.
///
/// `tr_1(M)[k, l] = sum_i M[(i,k), (i,l)]` and
/// `tr_2(M)[i, j] = sum_k M[(i,k), (j,k)]`.
pub fn partial_trace(m: &ComplexMatrix, d1: usize, d2: usize, side: TraceOut) -> Result<ComplexMatrix> {
    let n = d1 * d2;
    if d1 == 0 || d2 == 0 || m.rows() != n || m.cols() != n {
        return Err(dim_err!(
            "partial trace of {}x{} matrix over {d1} x {d2} factors",
            m.rows(),
            m.cols()
        ));
    }
    Ok(partial_trace_unchecked(m, d1, d2, side))
}

pub(crate) fn partial_trace_unchecked(m: &ComplexMatrix, d1: usize, d2: usize, side: TraceOut) -> ComplexMatrix {
    match side {
        TraceOut::First => ComplexMatrix::from_fn(d2, d2, |k, l| {
            (0..d1).map(|i| m.get(i * d2 + k, i * d2 + l)).sum()
        }),
        TraceOut::Second => ComplexMatrix::from_fn(d1, d1, |i, j| {
            (0..d2).map(|k| m.get(i * d2 + k, j * d2 + k)).sum()
        }),
    }
}

/// Hermitian-typed partial trace.
pub fn partial_trace_hermitian(
    h: &HermitianOperator,
    d1: usize,
    d2: usize,
    side: TraceOut,
) -> Result<HermitianOperator> {
    Ok(HermitianOperator::from_matrix_unchecked(&partial_trace(
        h.matrix(),
        d1,
        d2,
        side,
    )?))
}

/// Support of a state: span of eigenvectors with eigenvalue above
/// `rank_tol * lambda_max`. The zero state has the zero subspace as support.
pub fn support(rho: &DensityOperator, rank_tol: f64) -> Result<Subspace> {
    support_of(rho.operator(), rank_tol)
}

pub(crate) fn support_of(h: &HermitianOperator, rank_tol: f64) -> Result<Subspace> {
    let s = h.eig()?;
    let dim = h.dim();
    let lmax = s.eigenvalues.first().copied().unwrap_or(0.0);
    if lmax <= 0.0 {
        return Ok(Subspace::zero(dim));
    }
    let cutoff = rank_tol * lmax;
    let basis: alloc::vec::Vec<_> = s
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > cutoff)
        .map(|(k, _)| s.vector(k))
        .collect();
    Ok(Subspace::from_orthonormal(dim, &basis))
}
