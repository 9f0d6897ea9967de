//! Quantum states, couplings and liftings.
//!
//! States are *partial* density operators (positive, trace at most one)
//! throughout, including in the lifting decision procedure. Only
//! [`coupling_tensor`] requires trace-one inputs, since `rho1 (x) rho2` has
//! marginals `tr(rho2) rho1` and `tr(rho1) rho2`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{dim_err, input_err, Error, Result};
use crate::linalg::{
    partial_trace_hermitian, raw_inner, Complex, ComplexMatrix, HermitianOperator, Subspace,
    TraceOut,
};

/// Tolerance for the positivity and trace checks on construction.
pub const STATE_TOL: f64 = 1e-9;

/// Positive semidefinite operator with `0 <= tr <= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    op: HermitianOperator,
}

impl DensityOperator {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let min = op.min_eigenvalue()?;
        if min < -STATE_TOL {
            return Err(input_err!(
                "state is not positive semidefinite: minimum eigenvalue {min:e}"
            ));
        }
        let tr = op.trace();
        if tr > 1.0 + STATE_TOL {
            return Err(input_err!("state has trace {tr} > 1"));
        }
        Ok(Self { op })
    }

    /// Like [`DensityOperator::new`] but additionally demands trace one.
    pub fn normalized(op: HermitianOperator) -> Result<Self> {
        let rho = Self::new(op)?;
        let tr = rho.trace();
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(input_err!("state has trace {tr}, expected 1"));
        }
        Ok(rho)
    }

    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        Self::new(HermitianOperator::new(m)?)
    }

    pub(crate) fn from_operator_unchecked(op: HermitianOperator) -> Self {
        Self { op }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            op: HermitianOperator::zeros(dim),
        }
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(weights: &[f64]) -> Result<Self> {
        Self::new(HermitianOperator::from_real_diagonal(weights))
    }

    /// Pure state `|psi><psi|`; `psi` is used as given (not renormalized).
    pub fn pure(psi: &[Complex]) -> Result<Self> {
        Self::new(HermitianOperator::projector_onto(psi))
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }

    pub fn trace(&self) -> f64 {
        self.op.trace()
    }

    pub fn into_operator(self) -> HermitianOperator {
        self.op
    }

    /// `tr_2` (the marginal on the first factor) for a state on `d1 x d2`.
    pub fn marginal_first(&self, d1: usize, d2: usize) -> Result<HermitianOperator> {
        partial_trace_hermitian(&self.op, d1, d2, TraceOut::Second)
    }

    /// `tr_1` (the marginal on the second factor) for a state on `d1 x d2`.
    pub fn marginal_second(&self, d1: usize, d2: usize) -> Result<HermitianOperator> {
        partial_trace_hermitian(&self.op, d1, d2, TraceOut::First)
    }
}

/// The triple `(rho1, rho2, X)` with `X` a subspace of `H1 (x) H2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingProblem {
    pub rho1: DensityOperator,
    pub rho2: DensityOperator,
    pub subspace: Subspace,
}

impl CouplingProblem {
    pub fn new(rho1: DensityOperator, rho2: DensityOperator, subspace: Subspace) -> Result<Self> {
        let n = rho1.dim() * rho2.dim();
        if subspace.ambient_dim() != n {
            return Err(dim_err!(
                "subspace lives in dimension {}, expected {} x {} = {n}",
                subspace.ambient_dim(),
                rho1.dim(),
                rho2.dim()
            ));
        }
        Ok(Self {
            rho1,
            rho2,
            subspace,
        })
    }

    pub fn d1(&self) -> usize {
        self.rho1.dim()
    }

    pub fn d2(&self) -> usize {
        self.rho2.dim()
    }

    pub fn joint_dim(&self) -> usize {
        self.d1() * self.d2()
    }
}

/// Frobenius distances `(||tr_2(rho) - rho1||, ||tr_1(rho) - rho2||)`.
pub fn marginal_residuals(
    rho: &DensityOperator,
    rho1: &DensityOperator,
    rho2: &DensityOperator,
) -> Result<(f64, f64)> {
    let (d1, d2) = (rho1.dim(), rho2.dim());
    if rho.dim() != d1 * d2 {
        return Err(dim_err!(
            "joint state has dim {}, marginals {d1} and {d2}",
            rho.dim()
        ));
    }
    let r1 = rho.marginal_first(d1, d2)?.try_sub(rho1.operator())?.frobenius_norm();
    let r2 = rho.marginal_second(d1, d2)?.try_sub(rho2.operator())?.frobenius_norm();
    Ok((r1, r2))
}

/// `tr(rho P_X^perp)`: the weight of `rho` outside the subspace.
pub fn support_leakage(rho: &DensityOperator, subspace: &Subspace) -> Result<f64> {
    if rho.dim() != subspace.ambient_dim() {
        return Err(dim_err!(
            "state of dim {} against subspace of ambient dim {}",
            rho.dim(),
            subspace.ambient_dim()
        ));
    }
    Ok(rho.trace() - raw_inner(subspace.projector().matrix(), rho.matrix()).re)
}

pub fn is_coupling(
    rho: &DensityOperator,
    rho1: &DensityOperator,
    rho2: &DensityOperator,
    tol: f64,
) -> Result<bool> {
    let (r1, r2) = marginal_residuals(rho, rho1, rho2)?;
    Ok(r1 <= tol && r2 <= tol)
}

pub fn is_lifting_witness(rho: &DensityOperator, problem: &CouplingProblem, tol: f64) -> Result<bool> {
    Ok(is_coupling(rho, &problem.rho1, &problem.rho2, tol)?
        && support_leakage(rho, &problem.subspace)? <= tol)
}

/// `I_d / d`.
pub fn uniform_density(d: usize) -> Result<DensityOperator> {
    if d == 0 {
        return Err(input_err!("uniform state needs a positive dimension"));
    }
    Ok(DensityOperator::from_operator_unchecked(
        HermitianOperator::identity(d).scale(1.0 / d as f64),
    ))
}

fn check_unitary(u: &ComplexMatrix) -> Result<()> {
    if !u.is_square() {
        return Err(dim_err!("unitary must be square, got {}x{}", u.rows(), u.cols()));
    }
    let dev = (&(&u.adjoint() * u) - &ComplexMatrix::identity(u.rows())).frobenius_norm();
    if dev > 1e-9 {
        return Err(input_err!("matrix is not unitary: ||U^dagger U - I||_F = {dev:e}"));
    }
    Ok(())
}

/// `rho_U = (1/d) sum_i (|i> U|i>)(<i| <i|U^dagger)` together with the
/// subspace `span{|i> U|i>}` it is supported in.
pub fn coupling_unitary(u: &ComplexMatrix) -> Result<(DensityOperator, Subspace)> {
    check_unitary(u)?;
    let d = u.rows();
    let vectors: Vec<Vec<Complex>> = (0..d)
        .map(|i| {
            let mut e = vec![Complex::new(0.0, 0.0); d];
            e[i] = Complex::new(1.0, 0.0);
            let ui = u.column(i);
            product_vector(&e, &ui)
        })
        .collect();
    // The vectors |i>U|i> are orthonormal because the |i> are.
    let subspace = Subspace::from_orthonormal(d * d, &vectors);
    let mut m = ComplexMatrix::zeros(d * d, d * d);
    for v in &vectors {
        m = &m + &ComplexMatrix::outer(v, v);
    }
    let rho = HermitianOperator::from_matrix_unchecked(&m.scale(1.0 / d as f64));
    Ok((DensityOperator::from_operator_unchecked(rho), subspace))
}

/// `|a> (x) |b>`.
pub fn product_vector(a: &[Complex], b: &[Complex]) -> Vec<Complex> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// `rho_id(B) = sum_i p_i |ii><ii|` for the eigenbasis `B` chosen by the
/// eigensolver, and the subspace `=_B = span{|ii> : p_i > rank_tol * p_max}`.
pub fn coupling_identity_basis(rho: &DensityOperator) -> Result<(DensityOperator, Subspace)> {
    let s = rho.operator().eig()?;
    coupling_in_basis(rho, &s.eigenvectors)
}

/// Identity coupling for an explicitly supplied orthonormal eigenbasis of
/// `rho` (columns of `basis`). Fails if the basis does not diagonalize `rho`.
pub fn coupling_in_basis(
    rho: &DensityOperator,
    basis: &ComplexMatrix,
) -> Result<(DensityOperator, Subspace)> {
    let d = rho.dim();
    if basis.rows() != d || basis.cols() != d {
        return Err(dim_err!(
            "basis is {}x{}, state has dim {d}",
            basis.rows(),
            basis.cols()
        ));
    }
    check_unitary(basis)?;
    let diag = &(&basis.adjoint() * rho.matrix()) * basis;
    let weights: Vec<f64> = (0..d).map(|i| diag.get(i, i).re).collect();
    let off = (&diag - &ComplexMatrix::from_real_diagonal(&weights)).frobenius_norm();
    if off > 1e-9 * rho.operator().frobenius_norm().max(1.0) {
        return Err(input_err!("basis does not diagonalize the state (off-diagonal {off:e})"));
    }
    let pmax = weights.iter().cloned().fold(0.0, f64::max);
    let cutoff = crate::DEFAULT_RANK_TOL * pmax;
    let mut m = ComplexMatrix::zeros(d * d, d * d);
    let mut span = Vec::new();
    for (i, &p) in weights.iter().enumerate() {
        let b = basis.column(i);
        let bb = product_vector(&b, &b);
        if p > cutoff && pmax > 0.0 {
            m = &m + &ComplexMatrix::outer(&bb, &bb).scale(p);
            span.push(bb);
        }
    }
    let witness = DensityOperator::from_operator_unchecked(HermitianOperator::from_matrix_unchecked(&m));
    Ok((witness, Subspace::from_orthonormal(d * d, &span)))
}

/// `rho1 (x) rho2`; both inputs must have trace one.
pub fn coupling_tensor(rho1: &DensityOperator, rho2: &DensityOperator) -> Result<DensityOperator> {
    for (name, rho) in [("rho1", rho1), ("rho2", rho2)] {
        let tr = rho.trace();
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(input_err!(
                "{name} has trace {tr}: the product state is a coupling only for \
                 normalized marginals, since tr_2(rho1 (x) rho2) = tr(rho2) rho1"
            ));
        }
    }
    Ok(DensityOperator::from_operator_unchecked(rho1.operator().tensor(rho2.operator())))
}

/// `<A>_rho = tr(A rho)`.
pub fn expectation(a: &HermitianOperator, rho: &DensityOperator) -> Result<f64> {
    if a.dim() != rho.dim() {
        return Err(dim_err!("observable dim {} vs state dim {}", a.dim(), rho.dim()));
    }
    let z = raw_inner(a.matrix(), rho.matrix()); // tr(A^dagger rho) = tr(A rho)
    if z.im.abs() > 1e-9 * a.frobenius_norm().max(1.0) {
        return Err(Error::Numerical(alloc::format!(
            "expectation has imaginary part {:e}",
            z.im
        )));
    }
    Ok(z.re)
}

/// Checks that a coupling forces equal marginal traces and returns
/// `(tr rho1, tr rho2)`.
pub fn couplings_imply_equal_trace(
    rho: &DensityOperator,
    rho1: &DensityOperator,
    rho2: &DensityOperator,
    tol: f64,
) -> Result<(f64, f64)> {
    if !is_coupling(rho, rho1, rho2, tol)? {
        return Err(input_err!("the joint state is not a coupling of the given marginals"));
    }
    let (t1, t2) = (rho1.trace(), rho2.trace());
    if (t1 - t2).abs() > 2.0 * tol {
        return Err(Error::Numerical(alloc::format!(
            "coupling with unequal marginal traces {t1} and {t2}"
        )));
    }
    Ok((t1, t2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_TOL;

    fn r(x: f64) -> Complex {
        Complex::new(x, 0.0)
    }

    fn bell() -> DensityOperator {
        let a = 1.0 / libm::sqrt(2.0);
        DensityOperator::pure(&[r(a), r(0.0), r(0.0), r(a)]).unwrap()
    }

    #[test]
    fn construction_checks() {
        assert!(DensityOperator::diagonal(&[0.5, -0.1]).is_err());
        assert!(DensityOperator::diagonal(&[0.7, 0.7]).is_err());
        assert!(DensityOperator::diagonal(&[0.3, 0.3]).is_ok());
        assert!(DensityOperator::normalized(HermitianOperator::from_real_diagonal(&[0.3, 0.3])).is_err());
    }

    #[test]
    fn bell_state_couples_uniform_marginals() {
        let u = uniform_density(2).unwrap();
        assert!(is_coupling(&bell(), &u, &u, DEFAULT_TOL).unwrap());
        let pure00 = DensityOperator::diagonal(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(!is_coupling(&pure00, &u, &u, DEFAULT_TOL).unwrap());
        assert!(is_coupling(&pure00, &u, &DensityOperator::zero(3), DEFAULT_TOL).is_err());
    }

    #[test]
    fn product_state_is_not_supported_on_equality() {
        let u = uniform_density(2).unwrap();
        let prod = coupling_tensor(&u, &u).unwrap();
        let eq = Subspace::coordinate(4, &[0, 3]).unwrap();
        let problem = CouplingProblem::new(u.clone(), u.clone(), eq).unwrap();
        assert!((support_leakage(&prod, &problem.subspace).unwrap() - 0.5).abs() < 1e-15);
        assert!(!is_lifting_witness(&prod, &problem, DEFAULT_TOL).unwrap());
        let full = CouplingProblem::new(u.clone(), u, Subspace::full(4)).unwrap();
        assert!(is_lifting_witness(&prod, &full, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn uniform_cases() {
        assert!(uniform_density(0).is_err());
        assert_eq!(uniform_density(1).unwrap().matrix().get(0, 0), r(1.0));
        let u4 = uniform_density(4).unwrap();
        assert!((u4.trace() - 1.0).abs() < 1e-15);
        let s = u4.operator().eig().unwrap();
        assert!(s.eigenvalues.iter().all(|&l| (l - 0.25).abs() < 1e-15));
    }

    #[test]
    fn tensor_rejects_subnormalized() {
        let half = DensityOperator::diagonal(&[0.5, 0.0]).unwrap();
        let any = uniform_density(2).unwrap();
        assert!(coupling_tensor(&half, &any).is_err());
        assert!(coupling_tensor(&any, &half).is_err());
        // the rejection is warranted: the product's first marginal is wrong
        let prod = DensityOperator::from_operator_unchecked(half.operator().tensor(&HermitianOperator::from_real_diagonal(&[0.25, 0.25])));
        assert!(!is_coupling(&prod, &half, &DensityOperator::diagonal(&[0.25, 0.25]).unwrap(), 1e-9).unwrap());
    }

    #[test]
    fn point_mass_product() {
        let a = DensityOperator::diagonal(&[1.0, 0.0]).unwrap();
        let b = DensityOperator::diagonal(&[0.0, 1.0]).unwrap();
        let p = coupling_tensor(&a, &b).unwrap();
        assert_eq!(p.matrix(), &ComplexMatrix::from_real_diagonal(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn identity_basis_diagonal_case() {
        let rho = DensityOperator::diagonal(&[1.0 / 3.0, 2.0 / 3.0]).unwrap();
        let (w, x) = coupling_identity_basis(&rho).unwrap();
        assert!((w.matrix().get(0, 0).re - 1.0 / 3.0).abs() < 1e-15);
        assert!((w.matrix().get(3, 3).re - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(x.rank(), 2);
        let problem = CouplingProblem::new(rho.clone(), rho, x).unwrap();
        assert!(is_lifting_witness(&w, &problem, 1e-9).unwrap());
    }

    #[test]
    fn in_basis_rejects_non_eigenbasis() {
        let rho = DensityOperator::diagonal(&[0.25, 0.75]).unwrap();
        let a = 1.0 / libm::sqrt(2.0);
        let h = ComplexMatrix::new(2, 2, vec![r(a), r(a), r(a), r(-a)]).unwrap();
        assert!(coupling_in_basis(&rho, &h).is_err());
        assert!(coupling_unitary(&ComplexMatrix::from_real_diagonal(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn expectation_values() {
        let u = uniform_density(2).unwrap();
        assert!((expectation(&HermitianOperator::identity(2), &u).unwrap() - 1.0).abs() < 1e-15);
        let p0 = HermitianOperator::from_real_diagonal(&[1.0, 0.0]);
        assert!((expectation(&p0, &u).unwrap() - 0.5).abs() < 1e-15);
        assert!(expectation(&HermitianOperator::identity(3), &u).is_err());
    }

    #[test]
    fn equal_trace_fact() {
        let z = DensityOperator::zero(2);
        let zz = DensityOperator::zero(4);
        assert_eq!(couplings_imply_equal_trace(&zz, &z, &z, 1e-9).unwrap(), (0.0, 0.0));
        let u = uniform_density(2).unwrap();
        let (t1, t2) = couplings_imply_equal_trace(&bell(), &u, &u, 1e-9).unwrap();
        assert!((t1 - t2).abs() < 1e-15);
        assert!(couplings_imply_equal_trace(&zz, &u, &u, 1e-9).is_err());
    }
}
