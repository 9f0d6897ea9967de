use alloc::vec::Vec;

use super::{Complex, ComplexMatrix};
use crate::error::{dim_err, input_err, Error, Result};

/// Relative Hermiticity tolerance accepted at construction.
pub const HERMITIAN_TOL: f64 = 1e-9;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_REL_THRESHOLD: f64 = 1e-12;

/// A square complex matrix equal to its adjoint.
///
/// Construction symmetrizes the input to `(M + M^dagger) / 2`, rejecting only
/// matrices whose anti-Hermitian part exceeds `1e-9 * max(1, ||M||_F)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(dim_err!(
                "Hermitian operator must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            ));
        }
        let dev = matrix.anti_hermitian_deviation();
        let scale = matrix.frobenius_norm().max(1.0);
        if dev > HERMITIAN_TOL * scale {
            return Err(input_err!(
                "matrix is not Hermitian: ||M - M^dagger||_F = {dev:e}"
            ));
        }
        Ok(Self::from_matrix_unchecked(&matrix))
    }

    /// Symmetrizes without checking; for matrices Hermitian by construction.
    pub(crate) fn from_matrix_unchecked(matrix: &ComplexMatrix) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self {
            matrix: ComplexMatrix::from_real_diagonal(diag),
        }
    }

    /// `|v><v|`.
    pub fn projector_onto(v: &[Complex]) -> Self {
        Self::from_matrix_unchecked(&ComplexMatrix::outer(v, v))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> Complex {
        self.matrix.get(i, j)
    }

    pub fn real_diagonal(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.frobenius_norm()
    }

    fn check_dim(&self, other: &Self, what: &str) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(dim_err!("{what}: dim {} vs {}", self.dim(), other.dim()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other, "addition")?;
        Ok(Self::from_matrix_unchecked(&(&self.matrix + &other.matrix)))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other, "subtraction")?;
        Ok(Self::from_matrix_unchecked(&(&self.matrix - &other.matrix)))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            matrix: self.matrix.scale(s),
        }
    }

    /// `self + s * I`.
    pub fn shift(&self, s: f64) -> Self {
        let mut m = self.matrix.clone();
        for i in 0..self.dim() {
            let z = m.get(i, i);
            m.set(i, i, z + s);
        }
        Self { matrix: m }
    }

    /// `self (x) other`, Hermitian whenever both factors are.
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.kron(&other.matrix),
        }
    }

    /// `U self U^dagger`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.rows() != self.dim() || u.cols() != self.dim() {
            return Err(dim_err!(
                "conjugation of dim {} by {}x{}",
                self.dim(),
                u.rows(),
                u.cols()
            ));
        }
        Ok(Self::from_matrix_unchecked(
            &u.matmul(&self.matrix).matmul(&u.adjoint()),
        ))
    }

    pub fn eig(&self) -> Result<Spectrum> {
        hermitian_eig(self)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eig()?.eigenvalues.last().copied().unwrap_or(0.0))
    }

    /// Spectral norm `max |lambda|`.
    pub fn operator_norm(&self) -> Result<f64> {
        let s = self.eig()?;
        Ok(s.eigenvalues.iter().fold(0.0_f64, |a, v| a.max(v.abs())))
    }

    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        Ok(self.min_eigenvalue()? >= -tol)
    }

    pub fn psd_project(&self) -> Result<Self> {
        psd_project(self)
    }
}

/// Eigen-decomposition `H = V diag(lambda) V^dagger` with eigenvalues in
/// descending order and orthonormal eigenvector columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Vec<Complex> {
        self.eigenvectors.column(k)
    }

    /// `V f(Lambda) V^dagger`.
    pub fn reassemble(&self, f: impl Fn(f64) -> f64) -> HermitianOperator {
        let v = &self.eigenvectors;
        let n = self.dim();
        let vals: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let m = ComplexMatrix::from_fn(n, n, |i, j| {
            let mut s = Complex::new(0.0, 0.0);
            for (k, &l) in vals.iter().enumerate() {
                if l != 0.0 {
                    s += v.get(i, k) * v.get(j, k).conj() * l;
                }
            }
            s
        });
        HermitianOperator::from_matrix_unchecked(&m)
    }

    pub fn reconstruct(&self) -> HermitianOperator {
        self.reassemble(|l| l)
    }
}

/// Cyclic complex Jacobi eigensolver.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal
/// unitary, then applies a real Givens rotation. Sweeps stop once the
/// off-diagonal Frobenius norm drops below `1e-12 * ||H||_F`.
pub fn hermitian_eig(h: &HermitianOperator) -> Result<Spectrum> {
    let n = h.dim();
    let mut a = h.matrix.clone();
    let mut v = ComplexMatrix::identity(n);
    let threshold = JACOBI_REL_THRESHOLD * a.frobenius_norm();

    let off_norm = |a: &ComplexMatrix| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a.get(i, j).norm_sqr();
                }
            }
        }
        libm::sqrt(s)
    };

    let mut converged = off_norm(&a) <= threshold;
    let mut sweep = 0;
    while !converged && sweep < JACOBI_MAX_SWEEPS {
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweep += 1;
        converged = off_norm(&a) <= threshold;
    }
    if !converged {
        return Err(Error::Numerical(alloc::format!(
            "Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps \
             (off-diagonal norm {:e})",
            off_norm(&a)
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&x, &y| diag[y].total_cmp(&diag[x]));
    let eigenvalues = order.iter().map(|&k| diag[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v.get(i, order[j]));
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.rows();
    let apq = a.get(p, q);
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    // Skip pivots that are negligible against both diagonal entries.
    if r < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a.set(p, q, Complex::new(0.0, 0.0));
        a.set(q, p, Complex::new(0.0, 0.0));
        return;
    }
    let phase = apq.conj() / r; // e^{-i phi}
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + libm::sqrt(theta * theta + 1.0))
    } else {
        -1.0 / (-theta + libm::sqrt(theta * theta + 1.0))
    };
    let c = 1.0 / libm::sqrt(t * t + 1.0);
    let s = t * c;

    // U = diag(1, e^{-i phi}) * [[c, s], [-s, c]] on the (p, q) plane.
    let upp = Complex::new(c, 0.0);
    let upq = Complex::new(s, 0.0);
    let uqp = phase * (-s);
    let uqq = phase * c;

    // A <- A U
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * upp + akq * uqp);
        a.set(k, q, akp * upq + akq * uqq);
    }
    // A <- U^dagger A
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, upp.conj() * apk + uqp.conj() * aqk);
        a.set(q, k, upq.conj() * apk + uqq.conj() * aqk);
    }
    a.set(p, q, Complex::new(0.0, 0.0));
    a.set(q, p, Complex::new(0.0, 0.0));
    let dp = a.get(p, p).re;
    let dq = a.get(q, q).re;
    a.set(p, p, Complex::new(dp, 0.0));
    a.set(q, q, Complex::new(dq, 0.0));

    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * upp + vkq * uqp);
        v.set(k, q, vkp * upq + vkq * uqq);
    }
}

/// `tr(A^dagger B)`; the imaginary part must vanish to `1e-9` relative.
pub fn inner_product(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(dim_err!("inner product: dim {} vs {}", a.dim(), b.dim()));
    }
    let z = raw_inner(a.matrix(), b.matrix());
    let scale = (a.frobenius_norm() * b.frobenius_norm()).max(1.0);
    if z.im.abs() > 1e-9 * scale {
        return Err(Error::Numerical(alloc::format!(
            "inner product of Hermitian operators has imaginary part {:e}",
            z.im
        )));
    }
    Ok(z.re)
}

/// `tr(A^dagger B) = sum conj(A_ij) B_ij`.
pub(crate) fn raw_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex {
    a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| x.conj() * y)
        .sum()
}

pub fn is_psd(h: &HermitianOperator, tol: f64) -> Result<bool> {
    h.is_psd(tol)
}

/// Frobenius-nearest positive semidefinite matrix (negative eigenvalues
/// clamped to zero).
pub fn psd_project(h: &HermitianOperator) -> Result<HermitianOperator> {
    Ok(h.eig()?.reassemble(|l| l.max(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn rejects_non_hermitian_and_symmetrizes_small_noise() {
        let bad = ComplexMatrix::new(2, 2, vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])
            .unwrap();
        assert!(HermitianOperator::new(bad).is_err());
        let noisy =
            ComplexMatrix::new(2, 2, vec![c(1.0, 0.0), c(1.0, 1e-12), c(1.0, 0.0), c(2.0, 0.0)])
                .unwrap();
        let h = HermitianOperator::new(noisy).unwrap();
        assert_eq!(h.get(0, 1), h.get(1, 0).conj());
        assert!(HermitianOperator::new(ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn diagonal_eigenvalues_sorted_descending() {
        let h = HermitianOperator::from_real_diagonal(&[3.0, 1.0, 2.0]);
        let s = h.eig().unwrap();
        assert_eq!(s.eigenvalues, vec![3.0, 2.0, 1.0]);
        // columns are standard basis vectors e0, e2, e1
        assert_eq!(s.vector(0), vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(s.vector(1), vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(s.vector(2), vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let x = HermitianOperator::new(
            ComplexMatrix::new(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
                .unwrap(),
        )
        .unwrap();
        let s = x.eig().unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] + 1.0).abs() < 1e-14);
        let r = 1.0 / libm::sqrt(2.0);
        let plus = s.vector(0);
        let minus = s.vector(1);
        // up to a global phase
        let ov_plus = super::super::vdot(&[c(r, 0.0), c(r, 0.0)], &plus).norm();
        let ov_minus = super::super::vdot(&[c(r, 0.0), c(-r, 0.0)], &minus).norm();
        assert!((ov_plus - 1.0).abs() < 1e-12);
        assert!((ov_minus - 1.0).abs() < 1e-12);
        assert!(!x.is_psd(1e-9).unwrap());
    }

    #[test]
    fn complex_pivot_reconstructs() {
        let m = ComplexMatrix::new(
            3,
            3,
            vec![
                c(2.0, 0.0),
                c(0.0, 1.0),
                c(1.0, -1.0),
                c(0.0, -1.0),
                c(1.0, 0.0),
                c(0.5, 0.5),
                c(1.0, 1.0),
                c(0.5, -0.5),
                c(-1.0, 0.0),
            ],
        )
        .unwrap();
        let h = HermitianOperator::new(m).unwrap();
        let s = h.eig().unwrap();
        let back = s.reconstruct();
        assert!(back.try_sub(&h).unwrap().frobenius_norm() < 1e-12);
        let vtv = &s.eigenvectors.adjoint() * &s.eigenvectors;
        assert!((&vtv - &ComplexMatrix::identity(3)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn psd_projection_cases() {
        let rho = HermitianOperator::from_real_diagonal(&[0.25, 0.75]);
        assert!(psd_project(&rho).unwrap().try_sub(&rho).unwrap().frobenius_norm() < 1e-12);
        let p = psd_project(&HermitianOperator::from_real_diagonal(&[1.0, -1.0])).unwrap();
        assert!(p.try_sub(&HermitianOperator::from_real_diagonal(&[1.0, 0.0])).unwrap().frobenius_norm() < 1e-15);
        assert!(HermitianOperator::from_real_diagonal(&[1.0, 0.0]).is_psd(1e-9).unwrap());
    }

    #[test]
    fn inner_product_identity() {
        let i3 = HermitianOperator::identity(3);
        assert_eq!(inner_product(&i3, &i3).unwrap(), 3.0);
        assert!(inner_product(&i3, &HermitianOperator::identity(2)).is_err());
    }

    #[test]
    fn zero_matrix_eig() {
        let s = HermitianOperator::zeros(3).eig().unwrap();
        assert_eq!(s.eigenvalues, vec![0.0; 3]);
    }
}
