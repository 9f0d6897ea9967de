use alloc::vec::Vec;

use super::{vdot, Complex, ComplexMatrix, HermitianOperator};
use crate::error::{dim_err, input_err, Result};

/// Tolerance on `||P^2 - P||_F` and on the distance of each eigenvalue of `P`
/// from `{0, 1}`.
pub const PROJECTOR_TOL: f64 = 1e-8;
/// Residual norm below which Gram-Schmidt drops a spanning vector.
pub const GRAM_SCHMIDT_DROP_TOL: f64 = 1e-9;

/// A subspace, stored as its orthogonal projector.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    projector: HermitianOperator,
    rank: usize,
}

impl Subspace {
    /// Validates that `p` is an orthogonal projector.
    pub fn from_projector(p: HermitianOperator) -> Result<Self> {
        let idem = (p.matrix() * p.matrix()).try_sub(p.matrix())?.frobenius_norm();
        if idem > PROJECTOR_TOL {
            return Err(input_err!("operator is not idempotent: ||P^2 - P||_F = {idem:e}"));
        }
        let spectrum = p.eig()?;
        let mut rank = 0;
        for &l in &spectrum.eigenvalues {
            if (l - 1.0).abs() <= PROJECTOR_TOL {
                rank += 1;
            } else if l.abs() > PROJECTOR_TOL {
                return Err(input_err!("projector has eigenvalue {l} outside {{0, 1}}"));
            }
        }
        Ok(Self { projector: p, rank })
    }

    /// Span of arbitrary (possibly dependent) vectors, orthonormalized by
    /// modified Gram-Schmidt.
    pub fn from_span(ambient_dim: usize, vectors: &[Vec<Complex>]) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(input_err!("ambient dimension must be positive"));
        }
        let basis = orthonormalize(ambient_dim, vectors)?;
        Ok(Self::from_orthonormal(ambient_dim, &basis))
    }

    /// Projector `sum |b><b|` for vectors already known to be orthonormal.
    pub(crate) fn from_orthonormal(ambient_dim: usize, basis: &[Vec<Complex>]) -> Self {
        let mut m = ComplexMatrix::zeros(ambient_dim, ambient_dim);
        for b in basis {
            m = &m + &ComplexMatrix::outer(b, b);
        }
        Self {
            projector: HermitianOperator::from_matrix_unchecked(&m),
            rank: basis.len(),
        }
    }

    /// Coordinate subspace spanned by the listed standard basis vectors.
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Result<Self> {
        let mut diag = alloc::vec![0.0; ambient_dim];
        for &i in indices {
            if i >= ambient_dim {
                return Err(input_err!("basis index {i} out of range for dimension {ambient_dim}"));
            }
            diag[i] = 1.0;
        }
        let rank = diag.iter().filter(|&&d| d == 1.0).count();
        Ok(Self {
            projector: HermitianOperator::from_real_diagonal(&diag),
            rank,
        })
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            projector: HermitianOperator::identity(ambient_dim),
            rank: ambient_dim,
        }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            projector: HermitianOperator::zeros(ambient_dim),
            rank: 0,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.projector.dim()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn projector(&self) -> &HermitianOperator {
        &self.projector
    }

    /// `I - P`.
    pub fn complement_projector(&self) -> HermitianOperator {
        self.projector.scale(-1.0).shift(1.0)
    }

    pub fn complement(&self) -> Self {
        Self {
            projector: self.complement_projector(),
            rank: self.ambient_dim() - self.rank,
        }
    }
}

/// Modified Gram-Schmidt with drop tolerance [`GRAM_SCHMIDT_DROP_TOL`].
pub fn orthonormalize(dim: usize, vectors: &[Vec<Complex>]) -> Result<Vec<Vec<Complex>>> {
    let mut basis: Vec<Vec<Complex>> = Vec::new();
    for (idx, v) in vectors.iter().enumerate() {
        if v.len() != dim {
            return Err(dim_err!(
                "spanning vector {idx} has length {}, expected {dim}",
                v.len()
            ));
        }
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(input_err!("spanning vector {idx} has a non-finite entry"));
        }
        let mut w = v.clone();
        for b in &basis {
            let proj = vdot(b, &w);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= bi * proj;
            }
        }
        let norm = libm::sqrt(w.iter().map(|z| z.norm_sqr()).sum());
        if norm > GRAM_SCHMIDT_DROP_TOL {
            for wi in &mut w {
                *wi /= norm;
            }
            basis.push(w);
        }
    }
    Ok(basis)
}
