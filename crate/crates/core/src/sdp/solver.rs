//! Dense infeasible-start primal-dual interior-point method for the coupling
//! semidefinite program
//!
//! ```text
//!   maximize  <P_X, X>                 minimize  tr(rho1 Y1) + tr(rho2 Y2)
//!   s.t.      tr_2 X = rho1            s.t.      Y1 (x) I2 + I1 (x) Y2 >= P_X
//!             tr_1 X = rho2
//!             X >= 0
//! ```
//!
//! Internally the pair is written in the standard form
//! `min <C, X>, A(X) = b` / `max b.y, A*(y) + Z = C` with `C = -P_X` and
//! `y = -(Y1, Y2)`, with Hermitian blocks expanded in an orthonormal real
//! basis. Search directions are HKM directions with Mehrotra
//! predictor-corrector centering.
//!
//! `A*` has a one-dimensional kernel, `(t I1, -t I2)`, because both marginal
//! blocks fix the same total trace. The Schur complement is therefore
//! singular by exactly one; the minimum-norm solution is obtained by
//! deflating that known null vector before factoring.
//!
//! Rank-deficient marginals leave the primal without interior points. The
//! iteration then runs on `supp rho1 (x) supp rho2` instead, see
//! [`FaceSolution`]. Late in the iteration the Schur complement is badly
//! conditioned and `A(dX) = rp` drifts; each primal direction gets a
//! correction of the form `X A*(u) X` restoring it.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::SdpSolution;
use crate::error::{input_err, Error, Result};
use crate::linalg::real::{dot, norm, RealCholesky, RealMatrix};
use crate::linalg::{
    cholesky, inverse_from_cholesky, partial_trace_unchecked, raw_inner, solve_lower, Complex,
    ComplexMatrix, HermitianOperator, TraceOut,
};
use crate::quantum::CouplingProblem;

/// Tunables of the interior-point iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Target for the duality gap and both residual norms.
    pub eps: f64,
    pub max_iterations: usize,
    pub step_fraction: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// Relative diagonal regularization of the Schur complement.
    pub regularization: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            eps: crate::DEFAULT_EPS_SOLVE,
            max_iterations: 200,
            step_fraction: 0.98,
            sigma_min: 0.01,
            sigma_max: 0.9,
            regularization: 1e-12,
        }
    }
}

/// Maximum allowed `|tr rho1 - tr rho2|`.
pub const TRACE_MATCH_TOL: f64 = 1e-9;

/// Orthonormal real coordinates on `Herm(C^d)`: diagonal units, then for each
/// `k < l` the pair `(E_kl + E_lk)/sqrt2`, `i(E_kl - E_lk)/sqrt2`.
#[derive(Debug, Clone, Copy)]
struct HermBasis {
    d: usize,
}

impl HermBasis {
    fn len(&self) -> usize {
        self.d * self.d
    }

    /// Coordinates `Re tr(E_k W)`; equals `<E_k, W>` for Hermitian `W` and the
    /// coordinates of the Hermitian part otherwise.
    fn vec(&self, w: &ComplexMatrix, out: &mut [f64]) {
        let d = self.d;
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let mut idx = 0;
        for k in 0..d {
            out[idx] = w.get(k, k).re;
            idx += 1;
        }
        for k in 0..d {
            for l in (k + 1)..d {
                let a = w.get(k, l);
                let b = w.get(l, k);
                out[idx] = s * (a.re + b.re);
                out[idx + 1] = s * (a.im - b.im);
                idx += 2;
            }
        }
    }

    fn unvec(&self, c: &[f64]) -> ComplexMatrix {
        let d = self.d;
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let mut m = ComplexMatrix::zeros(d, d);
        let mut idx = 0;
        for k in 0..d {
            m.set(k, k, Complex::new(c[idx], 0.0));
            idx += 1;
        }
        for k in 0..d {
            for l in (k + 1)..d {
                let (x, y) = (c[idx] * s, c[idx + 1] * s);
                m.set(k, l, Complex::new(x, y));
                m.set(l, k, Complex::new(x, -y));
                idx += 2;
            }
        }
        m
    }
}

/// The marginal map `A` and its adjoint in real coordinates.
struct MarginalMap {
    d1: usize,
    d2: usize,
    b1: HermBasis,
    b2: HermBasis,
}

impl MarginalMap {
    fn new(d1: usize, d2: usize) -> Self {
        Self {
            d1,
            d2,
            b1: HermBasis { d: d1 },
            b2: HermBasis { d: d2 },
        }
    }

    fn m(&self) -> usize {
        self.b1.len() + self.b2.len()
    }

    fn n(&self) -> usize {
        self.d1 * self.d2
    }

    /// `(vec tr_2 W, vec tr_1 W)`.
    fn apply(&self, w: &ComplexMatrix) -> Vec<f64> {
        let mut out = vec![0.0; self.m()];
        let (head, tail) = out.split_at_mut(self.b1.len());
        self.b1.vec(&partial_trace_unchecked(w, self.d1, self.d2, TraceOut::Second), head);
        self.b2.vec(&partial_trace_unchecked(w, self.d1, self.d2, TraceOut::First), tail);
        out
    }

    fn split(&self, y: &[f64]) -> (ComplexMatrix, ComplexMatrix) {
        let k = self.b1.len();
        (self.b1.unvec(&y[..k]), self.b2.unvec(&y[k..]))
    }

    /// `Y1 (x) I2 + I1 (x) Y2`.
    fn adjoint(&self, y: &[f64]) -> ComplexMatrix {
        let (y1, y2) = self.split(y);
        lift_pair(&y1, &y2)
    }

    /// Unit kernel vector of the adjoint, proportional to `(vec I1, -vec I2)`.
    fn kernel(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.m()];
        for k in 0..self.d1 {
            v[k] = 1.0;
        }
        let off = self.b1.len();
        for k in 0..self.d2 {
            v[off + k] = -1.0;
        }
        let nv = norm(&v);
        v.iter_mut().for_each(|x| *x /= nv);
        v
    }
}

/// `Y1 (x) I + I (x) Y2`.
pub(crate) fn lift_pair(y1: &ComplexMatrix, y2: &ComplexMatrix) -> ComplexMatrix {
    let (d1, d2) = (y1.rows(), y2.rows());
    ComplexMatrix::from_fn(d1 * d2, d1 * d2, |r, c| {
        let (i, k) = (r / d2, r % d2);
        let (j, l) = (c / d2, c % d2);
        let mut z = Complex::new(0.0, 0.0);
        if k == l {
            z += y1.get(i, j);
        }
        if i == j {
            z += y2.get(k, l);
        }
        z
    })
}

fn herm(m: &ComplexMatrix) -> ComplexMatrix {
    HermitianOperator::from_matrix_unchecked(m).into_matrix()
}

fn shift_identity(m: &ComplexMatrix, s: f64) -> ComplexMatrix {
    let mut out = m.clone();
    for i in 0..m.rows() {
        let z = out.get(i, i);
        out.set(i, i, z + s);
    }
    out
}

/// Largest `alpha` with `X + alpha D >= 0`, given the Cholesky factor of `X`.
fn max_step(l: &ComplexMatrix, d: &ComplexMatrix) -> Result<f64> {
    let half = solve_lower(l, d);
    let w = solve_lower(l, &half.adjoint());
    let lmin = HermitianOperator::from_matrix_unchecked(&w).min_eigenvalue()?;
    Ok(if lmin >= 0.0 { f64::INFINITY } else { -1.0 / lmin })
}

struct Iterate {
    x: ComplexMatrix,
    y: Vec<f64>,
    z: ComplexMatrix,
}

struct Direction {
    dx: ComplexMatrix,
    dy: Vec<f64>,
    dz: ComplexMatrix,
}

/// Snapshot of the convergence measures at an iterate (normalized scale).
#[derive(Clone, Copy)]
struct Measures {
    primal: f64,
    dual: f64,
    rp: f64,
    rd: f64,
}

impl Measures {
    fn gap(&self) -> f64 {
        (self.dual - self.primal).abs()
    }

    fn worst(&self) -> f64 {
        self.gap().max(self.rp).max(self.rd)
    }
}

/// Solves the coupling SDP to accuracy `eps` (gap and residuals).
pub fn solve_coupling_sdp(problem: &CouplingProblem, eps: f64) -> Result<SdpSolution> {
    solve_with_options(
        problem,
        &SolverOptions {
            eps,
            ..SolverOptions::default()
        },
    )
}

pub fn solve_with_options(problem: &CouplingProblem, opts: &SolverOptions) -> Result<SdpSolution> {
    solve_on_face(problem, opts).map(|f| f.solution)
}

/// A solve carried out on `supp rho1 (x) supp rho2`.
///
/// Every feasible `X` has `tr((Q1 (x) I) X) = tr(Q1 rho1) = 0` for the
/// projector `Q1` onto `ker rho1` (and likewise for `rho2`), so `X` lives on
/// the product of the supports. Restricting there restores strict primal
/// feasibility when a marginal is rank-deficient; the full-space dual
/// optimum is then typically not attained, and [`FaceSolution::lift_dual`]
/// builds feasible full-space pairs at a chosen accuracy instead.
pub(crate) struct FaceSolution {
    pub solution: SdpSolution,
    /// `dual_value` of the reduced problem; an upper bound on the optimum.
    pub face_dual_value: f64,
    v1: ComplexMatrix,
    v2: ComplexMatrix,
    face_y1: ComplexMatrix,
    face_y2: ComplexMatrix,
    face_p: ComplexMatrix,
}

impl FaceSolution {
    fn is_full(&self) -> bool {
        self.v1.cols() == self.v1.rows() && self.v2.cols() == self.v2.rows()
    }

    /// A pair with `Y1 (x) I + I (x) Y2 >= P_X` in the full space whose
    /// objective exceeds the face dual value by about `delta * tr(rho1)`.
    ///
    /// The face pair is shifted until its slack is at least `delta`; the
    /// complements of the supports then get weight `c`. With the face block
    /// `A >= delta`, cross block of norm at most one and the remaining block
    /// above `c - max(|Y1|, |Y2|) - 1`, the Schur complement is PSD once
    /// `c >= 1 + max(|Y1|, |Y2|) + 1/delta`.
    pub(crate) fn lift_dual(&self, delta: f64) -> Result<(HermitianOperator, HermitianOperator)> {
        if self.is_full() {
            return Ok((
                HermitianOperator::from_matrix_unchecked(&self.face_y1),
                HermitianOperator::from_matrix_unchecked(&self.face_y2),
            ));
        }
        let slack = &lift_pair(&self.face_y1, &self.face_y2) - &self.face_p;
        let base = HermitianOperator::from_matrix_unchecked(&slack).min_eigenvalue()?;
        let s = delta + (-base).max(0.0);
        let y1 = shift_identity(&self.face_y1, s);
        let y1h = HermitianOperator::from_matrix_unchecked(&y1);
        let y2h = HermitianOperator::from_matrix_unchecked(&self.face_y2);
        let c = 2.0 + y1h.operator_norm()?.max(y2h.operator_norm()?) + 1.0 / delta;
        Ok((complete(&self.v1, &y1, c), complete(&self.v2, &self.face_y2, c)))
    }
}

/// `V Y V* + c (I - V V*)`.
fn complete(v: &ComplexMatrix, y: &ComplexMatrix, c: f64) -> HermitianOperator {
    let inner = v.matmul(y).matmul(&v.adjoint());
    let vv = v.matmul(&v.adjoint());
    let comp = &ComplexMatrix::identity(v.rows()) - &vv;
    HermitianOperator::from_matrix_unchecked(&(&inner + &comp.scale(c)))
}

/// Isometry onto the eigenvectors with eigenvalue above `rank_tol * lmax`.
fn support_isometry(h: &HermitianOperator) -> Result<ComplexMatrix> {
    let s = h.eig()?;
    let lmax = s.eigenvalues[0];
    let cutoff = crate::DEFAULT_RANK_TOL * lmax;
    let r = s.eigenvalues.iter().filter(|&&l| l > cutoff).count();
    if r == h.dim() {
        return Ok(ComplexMatrix::identity(r));
    }
    Ok(ComplexMatrix::from_fn(h.dim(), r, |i, k| s.eigenvectors.get(i, k)))
}

fn compress(v: &ComplexMatrix, m: &ComplexMatrix) -> ComplexMatrix {
    herm(&v.adjoint().matmul(m).matmul(v))
}

pub(crate) fn solve_on_face(problem: &CouplingProblem, opts: &SolverOptions) -> Result<FaceSolution> {
    let t1 = problem.rho1.trace();
    let t2 = problem.rho2.trace();
    if (t1 - t2).abs() > TRACE_MATCH_TOL {
        return Err(input_err!(
            "marginal traces differ ({t1} vs {t2}); no coupling can exist"
        ));
    }
    if !(t1 > 0.0) || !(t2 > 0.0) {
        return Err(input_err!("the coupling SDP needs states of positive trace"));
    }
    if !(opts.eps > 0.0) {
        return Err(input_err!("solver accuracy must be positive"));
    }

    let (d1, d2) = (problem.d1(), problem.d2());
    let v1 = support_isometry(problem.rho1.operator())?;
    let v2 = support_isometry(problem.rho2.operator())?;
    let full = v1.cols() == d1 && v2.cols() == d2;
    let w = if full { ComplexMatrix::identity(d1 * d2) } else { v1.kron(&v2) };
    let (rho1f, rho2f, pf) = if full {
        (
            problem.rho1.matrix().clone(),
            problem.rho2.matrix().clone(),
            problem.subspace.projector().matrix().clone(),
        )
    } else {
        (
            compress(&v1, problem.rho1.matrix()),
            compress(&v2, problem.rho2.matrix()),
            compress(&w, problem.subspace.projector().matrix()),
        )
    };

    // Unit-trace marginals; X and the objective scale by the trace, Y does not.
    let scale = rho1f.trace().re;
    let b1 = rho1f.scale(1.0 / scale);
    let b2 = rho2f.scale(1.0 / rho2f.trace().re);
    let run = interior_point(&b1, &b2, &pf, scale, opts);

    let x = if full { run.x.scale(scale) } else { w.matmul(&run.x).matmul(&w.adjoint()).scale(scale) };
    let x = HermitianOperator::from_matrix_unchecked(&x);
    let r1 = &partial_trace_unchecked(x.matrix(), d1, d2, TraceOut::Second) - problem.rho1.matrix();
    let r2 = &partial_trace_unchecked(x.matrix(), d1, d2, TraceOut::First) - problem.rho2.matrix();
    let primal_residual = libm::hypot(r1.frobenius_norm(), r2.frobenius_norm());
    let primal_value = raw_inner(problem.subspace.projector().matrix(), x.matrix()).re;
    let face_dual_value = raw_inner(&rho1f, &run.y1).re + raw_inner(&rho2f, &run.y2).re;

    let mut face = FaceSolution {
        solution: SdpSolution {
            primal_x: x,
            dual_y1: HermitianOperator::zeros(d1),
            dual_y2: HermitianOperator::zeros(d2),
            primal_value,
            dual_value: face_dual_value,
            gap: (face_dual_value - primal_value).abs(),
            primal_residual,
            dual_residual: run.measures.rd,
            iterations: run.iterations,
        },
        face_dual_value,
        v1,
        v2,
        face_y1: run.y1,
        face_y2: run.y2,
        face_p: pf,
    };
    // entries grow like 1/delta; sqrt(eps) keeps them near 1/sqrt(eps) so
    // rounding stays far below eps
    let (y1, y2) = face.lift_dual(libm::sqrt(opts.eps))?;
    face.solution.dual_y1 = y1;
    face.solution.dual_y2 = y2;
    match run.failure {
        None => Ok(face),
        Some(message) => Err(Error::Solver {
            message,
            best: Box::new(face.solution),
        }),
    }
}

struct Run {
    x: ComplexMatrix,
    y1: ComplexMatrix,
    y2: ComplexMatrix,
    measures: Measures,
    iterations: usize,
    failure: Option<String>,
}

/// The iteration proper on unit-trace data `b1`, `b2` and objective `p`.
/// On failure the best iterate seen is returned together with the reason.
/// `scale` is the trace the data was normalized by; the stopping test is
/// applied to the rescaled gap and primal residual.
fn interior_point(
    b1: &ComplexMatrix,
    b2: &ComplexMatrix,
    p: &ComplexMatrix,
    scale: f64,
    opts: &SolverOptions,
) -> Run {
    let (d1, d2) = (b1.rows(), b2.rows());
    let map = MarginalMap::new(d1, d2);
    let n = map.n();
    let m = map.m();

    let mut b = vec![0.0; m];
    map.b1.vec(b1, &mut b[..map.b1.len()]);
    map.b2.vec(b2, &mut b[map.b1.len()..]);
    let c = p.scale(-1.0);
    let kernel = map.kernel();

    let adjoint_basis: Vec<ComplexMatrix> = (0..m)
        .map(|j| {
            let mut e = vec![0.0; m];
            e[j] = 1.0;
            map.adjoint(&e)
        })
        .collect();

    // Strictified product point and the Slater dual point Y = I1 (+) I2.
    let product = b1.kron(b2);
    let x0 = &product.scale(0.5) + &ComplexMatrix::identity(n).scale(0.5 / n as f64);
    let mut y0 = vec![0.0; m];
    for k in 0..d1 {
        y0[k] = -1.0;
    }
    for k in 0..d2 {
        y0[map.b1.len() + k] = -1.0;
    }
    let z0 = &c - &map.adjoint(&y0);
    let mut it = Iterate { x: x0, y: y0, z: z0 };

    let measure = |it: &Iterate| -> (Measures, Vec<f64>, ComplexMatrix) {
        let ax = map.apply(&it.x);
        let rp: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let rd = &(&c - &map.adjoint(&it.y)) - &it.z;
        let ms = Measures {
            primal: raw_inner(p, &it.x).re,
            dual: -dot(&b, &it.y),
            rp: norm(&rp),
            rd: rd.frobenius_norm(),
        };
        (ms, rp, rd)
    };

    let mut best: Option<(Measures, ComplexMatrix, Vec<f64>)> = None;
    let mut iterations = 0;
    let mut failure: Option<String> = None;

    loop {
        let (ms, rp, rd) = measure(&it);
        if best.as_ref().is_none_or(|(bm, _, _)| ms.worst() < bm.worst()) {
            best = Some((ms, it.x.clone(), it.y.clone()));
        }
        // Converged once the rescaled gap and residuals meet the target.
        if ms.gap() * scale <= opts.eps && ms.rp * scale <= opts.eps && ms.rd <= opts.eps {
            break;
        }
        if iterations >= opts.max_iterations {
            failure = Some(alloc::format!(
                "iteration cap {} reached (gap {:e}, residuals {:e} / {:e})",
                opts.max_iterations,
                ms.gap() * scale,
                ms.rp * scale,
                ms.rd
            ));
            break;
        }
        iterations += 1;

        let step = newton_step(&map, &adjoint_basis, &kernel, &it, &rp, &rd, opts);
        match step {
            Ok(next) => it = next,
            Err(e) => {
                failure = Some(alloc::format!("{e} at iteration {iterations}"));
                break;
            }
        }
    }

    let (measures, x, y) = match &failure {
        None => {
            let (ms, _, _) = measure(&it);
            (ms, it.x, it.y)
        }
        Some(_) => best.expect("at least one iterate is measured"),
    };
    let (y1m, y2m) = map.split(&y);
    Run {
        x,
        y1: y1m.scale(-1.0),
        y2: y2m.scale(-1.0),
        measures,
        iterations,
        failure,
    }
}

fn newton_step(
    map: &MarginalMap,
    adjoint_basis: &[ComplexMatrix],
    kernel: &[f64],
    it: &Iterate,
    rp: &[f64],
    rd: &ComplexMatrix,
    opts: &SolverOptions,
) -> Result<Iterate> {
    let n = map.n() as f64;
    let m = map.m();
    let mu = raw_inner(&it.x, &it.z).re / n;

    let lz = cholesky(&it.z).ok_or_else(|| Error::Numerical("dual slack lost definiteness".into()))?;
    let lx = cholesky(&it.x).ok_or_else(|| Error::Numerical("primal iterate lost definiteness".into()))?;
    let zinv = inverse_from_cholesky(&lz);

    // Schur complement M_ij = Re tr(A_i X A_j Z^-1), deflated along the kernel.
    let mut schur = RealMatrix::zeros(m);
    for (j, aj) in adjoint_basis.iter().enumerate() {
        let g = it.x.matmul(aj).matmul(&zinv);
        let col = map.apply(&g);
        for i in 0..m {
            schur.set(i, j, col[i]);
        }
    }
    deflate(&mut schur, kernel, opts.regularization);
    let factor = RealCholesky::factor(&schur)
        .ok_or_else(|| Error::Numerical("Schur complement is not positive definite".into()))?;

    let xrd_zinv = it.x.matmul(rd).matmul(&zinv);
    let xz = it.x.matmul(&it.z);

    let solve = |rc: &ComplexMatrix| -> Direction {
        // M dy = rp - A(Rc Z^-1 - X Rd Z^-1)
        let w = &rc.matmul(&zinv) - &xrd_zinv;
        let aw = map.apply(&w);
        let mut rhs: Vec<f64> = rp.iter().zip(&aw).map(|(a, b)| a - b).collect();
        project_off(&mut rhs, kernel);
        let dy = factor.solve(&rhs);
        let dz = herm(&(rd - &map.adjoint(&dy)));
        let dx = herm(&(rc - &it.x.matmul(&dz)).matmul(&zinv));
        Direction { dx, dy, dz }
    };

    // The part of A(dx) = rp lost to the conditioning of M, put back as
    // X A*(u) X so the correction stays inside the range of X.
    let mut gx = RealMatrix::zeros(m);
    for (j, aj) in adjoint_basis.iter().enumerate() {
        let col = map.apply(&it.x.matmul(aj).matmul(&it.x));
        for i in 0..m {
            gx.set(i, j, col[i]);
        }
    }
    deflate(&mut gx, kernel, opts.regularization);
    let gx = RealCholesky::factor(&gx);
    let feasibility_fix = |dx: &ComplexMatrix| -> ComplexMatrix {
        let Some(gx) = gx.as_ref() else { return dx.clone() };
        let mut err: Vec<f64> = rp.iter().zip(map.apply(dx)).map(|(a, b)| a - b).collect();
        project_off(&mut err, kernel);
        let s = map.adjoint(&gx.solve(&err));
        &herm(&it.x.matmul(&s).matmul(&it.x)) + dx
    };

    let step_lengths = |dir: &Direction| -> Result<(f64, f64)> {
        let ap = (opts.step_fraction * max_step(&lx, &dir.dx)?).min(1.0);
        let ad = (opts.step_fraction * max_step(&lz, &dir.dz)?).min(1.0);
        Ok((ap, ad))
    };

    // Predictor.
    let rc_aff = xz.scale(-1.0);
    let aff = solve(&rc_aff);
    let (ap_aff, ad_aff) = step_lengths(&aff)?;
    let x_aff = &it.x + &aff.dx.scale(ap_aff);
    let z_aff = &it.z + &aff.dz.scale(ad_aff);
    let mu_aff = raw_inner(&x_aff, &z_aff).re / n;
    let ratio = if mu > 0.0 { (mu_aff / mu).max(0.0) } else { 0.0 };
    let sigma = (ratio * ratio * ratio).clamp(opts.sigma_min, opts.sigma_max);

    // Corrector.
    let rc = &shift_identity(&xz.scale(-1.0), sigma * mu) - &aff.dx.matmul(&aff.dz);
    let mut dir = solve(&rc);
    dir.dx = feasibility_fix(&dir.dx);
    let (ap, ad) = step_lengths(&dir)?;

    // Rounding can push a boundary-hugging step just outside the cone.
    let x = backtrack(&it.x, &dir.dx, ap)?;
    let (z, ad) = backtrack_len(&it.z, &dir.dz, ad)?;
    let y = it.y.iter().zip(&dir.dy).map(|(a, b)| a + ad * b).collect();
    Ok(Iterate { x, y, z })
}

/// Symmetrizes `a` and adds `gamma k k^T + reg gamma I` with `gamma` the
/// largest diagonal entry, making it definite when `k` spans its kernel.
fn deflate(a: &mut RealMatrix, k: &[f64], reg: f64) {
    a.symmetrize();
    let gamma = a.max_diag().max(f64::MIN_POSITIVE);
    let m = k.len();
    for i in 0..m {
        for j in 0..m {
            let v = a.get(i, j) + gamma * k[i] * k[j];
            a.set(i, j, v);
        }
        let v = a.get(i, i) + reg * gamma;
        a.set(i, i, v);
    }
}

fn project_off(v: &mut [f64], k: &[f64]) {
    let along = dot(k, v);
    v.iter_mut().zip(k).for_each(|(x, kk)| *x -= along * kk);
}

fn backtrack(m: &ComplexMatrix, d: &ComplexMatrix, alpha: f64) -> Result<ComplexMatrix> {
    backtrack_len(m, d, alpha).map(|(next, _)| next)
}

/// `m + alpha d` with `alpha` halved until the result is positive definite.
fn backtrack_len(m: &ComplexMatrix, d: &ComplexMatrix, mut alpha: f64) -> Result<(ComplexMatrix, f64)> {
    for _ in 0..30 {
        let next = herm(&(m + &d.scale(alpha)));
        if cholesky(&next).is_some() {
            return Ok((next, alpha));
        }
        alpha *= 0.5;
    }
    Err(Error::Numerical("no positive definite step along the search direction".into()))
}
