//! Deciding quantum liftings through the coupling semidefinite program.
//!
//! The optimum of `max <P_X, X>` over couplings `X` of `(rho1, rho2)` equals
//! `tr(rho1)` exactly when a coupling supported in `X` exists. Otherwise the
//! dual optimum `(Y1, Y2)` is turned into a refutation
//! `P_X^perp >= Y1' (x) I - I (x) Y2'`, `tr(rho1 Y1') > tr(rho2 Y2')`
//! by [`condition_a_transform`] followed by [`shift_positive`].

mod solver;

pub use solver::{solve_coupling_sdp, solve_with_options, SolverOptions, TRACE_MATCH_TOL};

use crate::error::{dim_err, input_err, Error, Result};
use crate::linalg::{psd_project, HermitianOperator};
use crate::quantum::{expectation, is_lifting_witness, CouplingProblem, DensityOperator};

/// States with trace at or below this are treated as the zero state.
pub const ZERO_TRACE_TOL: f64 = 1e-12;

/// Primal-dual pair returned by the solver, in the original (unscaled)
/// problem.
///
/// For full-rank marginals `dual_value = tr(rho1 Y1) + tr(rho2 Y2)`. When a
/// marginal is rank-deficient the problem is solved on the product of the
/// supports, which holds every feasible `X`; `dual_value` is the dual
/// objective there (still an upper bound on the optimum), and
/// `(dual_y1, dual_y2)` is a feasible full-space completion whose objective
/// is larger by about `sqrt(eps) * tr(rho1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpSolution {
    pub primal_x: HermitianOperator,
    pub dual_y1: HermitianOperator,
    pub dual_y2: HermitianOperator,
    pub primal_value: f64,
    pub dual_value: f64,
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
}

impl SdpSolution {
    fn trivial(problem: &CouplingProblem) -> Self {
        Self {
            primal_x: HermitianOperator::zeros(problem.joint_dim()),
            dual_y1: HermitianOperator::zeros(problem.d1()),
            dual_y2: HermitianOperator::zeros(problem.d2()),
            primal_value: 0.0,
            dual_value: 0.0,
            gap: 0.0,
            primal_residual: 0.0,
            dual_residual: 0.0,
            iterations: 0,
        }
    }
}

/// A refutation of lifting existence.
#[derive(Debug, Clone, PartialEq)]
pub struct DualCertificate {
    pub y1: HermitianOperator,
    pub y2: HermitianOperator,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Exists(DensityOperator),
    NotExists(DualCertificate),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiftingVerdict {
    pub verdict: Verdict,
    pub diagnostics: SdpSolution,
}

impl LiftingVerdict {
    pub fn exists(&self) -> bool {
        matches!(self.verdict, Verdict::Exists(_))
    }

    pub fn witness(&self) -> Option<&DensityOperator> {
        match &self.verdict {
            Verdict::Exists(w) => Some(w),
            Verdict::NotExists(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&DualCertificate> {
        match &self.verdict {
            Verdict::Exists(_) => None,
            Verdict::NotExists(c) => Some(c),
        }
    }
}

/// Decides `rho1 X^# rho2`.
///
/// The returned proof object always passes its verifier at `10 * eps_solve`
/// ([`is_lifting_witness`] or [`verify_dual_certificate`]); if cleanup cannot
/// achieve that, the call fails with [`Error::Solver`] instead.
pub fn check_quantum_lifting(
    problem: &CouplingProblem,
    eps_solve: f64,
    eps_decide: f64,
) -> Result<LiftingVerdict> {
    let (t1, t2) = (problem.rho1.trace(), problem.rho2.trace());
    if (t1 - t2).abs() > TRACE_MATCH_TOL {
        return Err(input_err!(
            "marginal traces differ ({t1} vs {t2}); a coupling requires equal traces"
        ));
    }
    if t1.max(t2) <= ZERO_TRACE_TOL {
        return Ok(LiftingVerdict {
            verdict: Verdict::Exists(DensityOperator::zero(problem.joint_dim())),
            diagnostics: SdpSolution::trivial(problem),
        });
    }

    let face = solver::solve_on_face(
        problem,
        &SolverOptions {
            eps: eps_solve,
            ..SolverOptions::default()
        },
    )?;
    let sol = face.solution.clone();
    let verify_tol = 10.0 * eps_solve;

    if t1 - sol.primal_value <= eps_decide {
        let witness = clean_witness(&sol.primal_x, t1)?;
        if is_lifting_witness(&witness, problem, verify_tol)? {
            return Ok(LiftingVerdict {
                verdict: Verdict::Exists(witness),
                diagnostics: sol,
            });
        }
        // A deficit between the verification tolerance and eps_decide leaves
        // the witness short; a refutation may still go through.
        return match refute(problem, &face, eps_solve, eps_decide)? {
            Some(cert) => Ok(LiftingVerdict {
                verdict: Verdict::NotExists(cert),
                diagnostics: sol,
            }),
            None => Err(Error::Solver {
                message: "witness failed verification after cleanup".into(),
                best: alloc::boxed::Box::new(sol),
            }),
        };
    }

    match refute(problem, &face, eps_solve, eps_decide)? {
        Some(cert) => Ok(LiftingVerdict {
            verdict: Verdict::NotExists(cert),
            diagnostics: sol,
        }),
        None => Err(Error::Solver {
            message: "dual certificate failed verification".into(),
            best: alloc::boxed::Box::new(sol),
        }),
    }
}

/// Builds a certificate from the dual optimum and verifies it.
fn refute(
    problem: &CouplingProblem,
    face: &solver::FaceSolution,
    eps_solve: f64,
    eps_decide: f64,
) -> Result<Option<DualCertificate>> {
    let t1 = problem.rho1.trace();
    // Lift with a quarter of the margin so the refutation keeps most of it.
    let margin = t1 - face.face_dual_value;
    if !(margin > 0.0) {
        return Ok(None);
    }
    let (y1, y2) = face.lift_dual(margin / 4.0)?;
    let (y1, y2) = condition_a_transform(&y1, &y2);
    let (y1, y2, _) = shift_positive(&y1, &y2)?;
    let (y1, y2) = normalize_certificate(problem, y1, y2, eps_decide)?;
    if verify_dual_certificate(&y1, &y2, problem, 10.0 * eps_solve)? {
        Ok(Some(DualCertificate { y1, y2 }))
    } else {
        Ok(None)
    }
}

/// Symmetrize, project onto the PSD cone and rescale to trace `target`.
fn clean_witness(x: &HermitianOperator, target: f64) -> Result<DensityOperator> {
    let projected = psd_project(x)?;
    let tr = projected.trace();
    let w = if tr > 0.0 {
        projected.scale(target / tr)
    } else {
        projected
    };
    Ok(DensityOperator::from_operator_unchecked(w))
}

/// Scales the pair down towards spectral norm one while keeping the trace
/// gap at least `2 * eps_decide`. Scaling by `c <= 1` keeps the operator
/// inequality because `P_X^perp >= 0`.
fn normalize_certificate(
    problem: &CouplingProblem,
    y1: HermitianOperator,
    y2: HermitianOperator,
    eps_decide: f64,
) -> Result<(HermitianOperator, HermitianOperator)> {
    let size = y1.operator_norm()?.max(y2.operator_norm()?);
    if size <= 1.0 {
        return Ok((y1, y2));
    }
    let gap = expectation(&y1, &problem.rho1)? - expectation(&y2, &problem.rho2)?;
    let floor = if gap > 0.0 { (2.0 * eps_decide / gap).min(1.0) } else { 1.0 };
    let c = (1.0 / size).max(floor);
    Ok((y1.scale(c), y2.scale(c)))
}

fn check_pair_dims(y1: &HermitianOperator, y2: &HermitianOperator, problem: &CouplingProblem) -> Result<()> {
    if y1.dim() != problem.d1() || y2.dim() != problem.d2() {
        return Err(dim_err!(
            "certificate dims ({}, {}) vs problem dims ({}, {})",
            y1.dim(),
            y2.dim(),
            problem.d1(),
            problem.d2()
        ));
    }
    Ok(())
}

/// `P_X^perp - (Y1 (x) I2 - I1 (x) Y2)`.
pub fn certificate_slack(
    y1: &HermitianOperator,
    y2: &HermitianOperator,
    problem: &CouplingProblem,
) -> Result<HermitianOperator> {
    check_pair_dims(y1, y2, problem)?;
    let diff = solver::lift_pair(y1.matrix(), &y2.matrix().scale(-1.0));
    let slack = problem.subspace.complement_projector().matrix() - &diff;
    Ok(HermitianOperator::from_matrix_unchecked(&slack))
}

/// True iff `P_X^perp >= Y1 (x) I - I (x) Y2` (to `tol`) and
/// `tr(rho1 Y1) > tr(rho2 Y2) + tol`.
pub fn verify_dual_certificate(
    y1: &HermitianOperator,
    y2: &HermitianOperator,
    problem: &CouplingProblem,
    tol: f64,
) -> Result<bool> {
    let slack = certificate_slack(y1, y2, problem)?;
    if !slack.is_psd(tol)? {
        return Ok(false);
    }
    let lhs = expectation(y1, &problem.rho1)?;
    let rhs = expectation(y2, &problem.rho2)?;
    Ok(lhs > rhs + tol)
}

/// `(Y1, Y2) -> (I - Y1, Y2)`: exchanges the dual constraint
/// `Y1 (x) I + I (x) Y2 >= P_X` with `P_X^perp >= Y1' (x) I - I (x) Y2`.
pub fn condition_a_transform(
    y1: &HermitianOperator,
    y2: &HermitianOperator,
) -> (HermitianOperator, HermitianOperator) {
    (y1.scale(-1.0).shift(1.0), y2.clone())
}

/// Subtracts `lambda = min(spec Y1 u spec Y2)` from both; the difference
/// `Y1 (x) I - I (x) Y2` is unchanged and the outputs are PSD.
pub fn shift_positive(
    y1: &HermitianOperator,
    y2: &HermitianOperator,
) -> Result<(HermitianOperator, HermitianOperator, f64)> {
    let lambda = y1.min_eigenvalue()?.min(y2.min_eigenvalue()?);
    Ok((y1.shift(-lambda), y2.shift(-lambda), lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Subspace;
    use crate::quantum::uniform_density;

    fn no_lifting_problem() -> CouplingProblem {
        CouplingProblem::new(
            DensityOperator::diagonal(&[1.0, 0.0]).unwrap(),
            DensityOperator::diagonal(&[0.0, 1.0]).unwrap(),
            Subspace::coordinate(4, &[0]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn hand_certificate_verifies() {
        let p = no_lifting_problem();
        let y = HermitianOperator::from_real_diagonal(&[1.0, 0.0]);
        let slack = certificate_slack(&y, &y, &p).unwrap();
        // P_perp - (Y1 (x) I - I (x) Y2) = diag(0, 0, 2, 1)
        let expected = HermitianOperator::from_real_diagonal(&[0.0, 0.0, 2.0, 1.0]);
        assert!(slack.try_sub(&expected).unwrap().frobenius_norm() < 1e-15);
        assert!(verify_dual_certificate(&y, &y, &p, 1e-9).unwrap());
        let z = HermitianOperator::zeros(2);
        assert!(!verify_dual_certificate(&z, &z, &p, 1e-9).unwrap());
        assert!(verify_dual_certificate(&HermitianOperator::zeros(3), &z, &p, 1e-9).is_err());
    }

    #[test]
    fn transform_and_shift_examples() {
        let (a, b) = condition_a_transform(&HermitianOperator::identity(2), &HermitianOperator::zeros(3));
        assert_eq!(a.frobenius_norm(), 0.0);
        assert_eq!(b.frobenius_norm(), 0.0);
        let y1 = HermitianOperator::from_real_diagonal(&[0.3, -2.0]);
        let y2 = HermitianOperator::from_real_diagonal(&[1.0, 4.0]);
        let (t1, t2) = condition_a_transform(&y1, &y2);
        let (u1, u2) = condition_a_transform(&t1, &t2);
        assert!(u1.try_sub(&y1).unwrap().frobenius_norm() < 1e-15);
        assert_eq!(u2, y2);

        let d = HermitianOperator::from_real_diagonal(&[1.0, 0.0]);
        let (s1, s2, l) = shift_positive(&d, &d).unwrap();
        assert_eq!(l, 0.0);
        assert_eq!((s1, s2), (d.clone(), d));
        let (s1, s2, l) = shift_positive(
            &HermitianOperator::from_real_diagonal(&[0.0, -1.0]),
            &HermitianOperator::from_real_diagonal(&[2.0, 1.0]),
        )
        .unwrap();
        assert_eq!(l, -1.0);
        assert_eq!(s1, HermitianOperator::from_real_diagonal(&[1.0, 0.0]));
        assert_eq!(s2, HermitianOperator::from_real_diagonal(&[3.0, 2.0]));
    }

    #[test]
    fn full_space_optimum_is_trace() {
        let rho = DensityOperator::diagonal(&[0.3, 0.2]).unwrap();
        let p = CouplingProblem::new(rho.clone(), rho, Subspace::full(4)).unwrap();
        let sol = solve_coupling_sdp(&p, 1e-8).unwrap();
        assert!((sol.primal_value - 0.5).abs() < 1e-8, "{}", sol.primal_value);
        assert!(sol.gap <= 1e-8);
    }

    #[test]
    fn equality_subspace_for_uniform() {
        let u = uniform_density(2).unwrap();
        let p = CouplingProblem::new(u.clone(), u, Subspace::coordinate(4, &[0, 3]).unwrap()).unwrap();
        let v = check_quantum_lifting(&p, 1e-8, 1e-6).unwrap();
        assert!(v.exists());
        assert!((v.diagnostics.primal_value - 1.0).abs() < 1e-8);
        assert!(is_lifting_witness(v.witness().unwrap(), &p, 1e-7).unwrap());
    }

    #[test]
    fn no_lifting_has_zero_optimum_and_certificate() {
        let p = no_lifting_problem();
        let sol = solve_coupling_sdp(&p, 1e-8).unwrap();
        assert!(sol.primal_value.abs() < 1e-8, "{}", sol.primal_value);
        let v = check_quantum_lifting(&p, 1e-8, 1e-6).unwrap();
        let cert = v.certificate().expect("no lifting exists");
        assert!(verify_dual_certificate(&cert.y1, &cert.y2, &p, 1e-7).unwrap());
    }

    #[test]
    fn zero_states_short_circuit() {
        let z = DensityOperator::zero(2);
        let p = CouplingProblem::new(z.clone(), z, Subspace::zero(4)).unwrap();
        let v = check_quantum_lifting(&p, 1e-8, 1e-6).unwrap();
        assert!(v.exists());
        assert_eq!(v.witness().unwrap().trace(), 0.0);
        assert_eq!(v.diagnostics.iterations, 0);
        assert!(solve_coupling_sdp(&p, 1e-8).is_err());
    }

    #[test]
    fn unequal_traces_rejected() {
        let p = CouplingProblem::new(
            DensityOperator::diagonal(&[0.5, 0.0]).unwrap(),
            DensityOperator::diagonal(&[0.5, 0.5]).unwrap(),
            Subspace::full(4),
        )
        .unwrap();
        let e = check_quantum_lifting(&p, 1e-8, 1e-6).unwrap_err();
        assert!(e.is_input_error());
    }
}
