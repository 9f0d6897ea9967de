//! Diagonal embedding of classical lifting problems into quantum ones.
//!
//! A sub-distribution `mu` on `[m]` becomes `diag(mu)`, a relation `R`
//! becomes `X_R = span{|i>|j> : (i, j) in R}`, and a joint sub-distribution
//! becomes the diagonal operator carrying its weights. Witnesses transfer in
//! both directions: embedding a classical witness gives a quantum one, and
//! the diagonal of any quantum witness on an embedded problem is a classical
//! witness. [`cross_check`] runs both deciders on the same instance.

use alloc::vec::Vec;

use crate::classical::{
    check_lifting_maxflow, is_lifting_witness_classical, marginals, ClassicalVerdict,
    JointSubDistribution, Relation, SubDistribution, Weight,
};
use crate::error::{dim_err, input_err, Result};
use crate::linalg::{HermitianOperator, Subspace};
use crate::quantum::{is_lifting_witness, marginal_residuals, CouplingProblem, DensityOperator};
use crate::sdp::{check_quantum_lifting, LiftingVerdict};

/// Negative diagonal entries down to this are clamped to zero on extraction.
pub const EXTRACT_CLAMP_TOL: f64 = 1e-9;

/// Index of `|i>|j>` in `C^m (x) C^n`.
#[inline]
pub fn composite_index(i: usize, j: usize, n: usize) -> usize {
    i * n + j
}

pub fn embed_distribution<W: Weight>(mu: &SubDistribution<W>) -> DensityOperator {
    let w: Vec<f64> = mu.weights().iter().map(|x| x.to_f64()).collect();
    DensityOperator::from_operator_unchecked(HermitianOperator::from_real_diagonal(&w))
}

pub fn embed_relation(relation: &Relation) -> Subspace {
    let n = relation.cols();
    let idx: Vec<usize> = relation
        .pairs()
        .into_iter()
        .map(|(i, j)| composite_index(i, j, n))
        .collect();
    Subspace::coordinate(relation.rows() * n, &idx).expect("pair indices are in range by construction")
}

pub fn embed_joint<W: Weight>(mu: &JointSubDistribution<W>) -> DensityOperator {
    let (m, n) = (mu.rows(), mu.cols());
    let mut diag = alloc::vec![0.0; m * n];
    for i in 0..m {
        for j in 0..n {
            diag[composite_index(i, j, n)] = mu.get(i, j).to_f64();
        }
    }
    DensityOperator::from_operator_unchecked(HermitianOperator::from_real_diagonal(&diag))
}

/// `mu(i, j) = <i|<j| rho |i>|j>`.
pub fn extract_joint(rho: &DensityOperator, m: usize, n: usize) -> Result<JointSubDistribution> {
    if rho.dim() != m * n {
        return Err(dim_err!("state of dim {} read as a {m} x {n} joint", rho.dim()));
    }
    let mut weights = Vec::with_capacity(m * n);
    for i in 0..m {
        for j in 0..n {
            let k = composite_index(i, j, n);
            let v = rho.matrix().get(k, k).re;
            if v < -EXTRACT_CLAMP_TOL {
                return Err(input_err!("diagonal entry ({i}, {j}) is negative ({v:e})"));
            }
            weights.push(v.max(0.0));
        }
    }
    JointSubDistribution::new(m, n, weights)
}

/// The quantum problem `(diag mu1, diag mu2, X_R)`.
pub fn embed_problem<W: Weight>(
    mu1: &SubDistribution<W>,
    mu2: &SubDistribution<W>,
    relation: &Relation,
) -> Result<CouplingProblem> {
    if relation.rows() != mu1.len() || relation.cols() != mu2.len() {
        return Err(dim_err!(
            "relation is {}x{}, marginals have sizes {} and {}",
            relation.rows(),
            relation.cols(),
            mu1.len(),
            mu2.len()
        ));
    }
    CouplingProblem::new(embed_distribution(mu1), embed_distribution(mu2), embed_relation(relation))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictTag {
    Exists,
    NotExists,
}

impl VerdictTag {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictTag::Exists => "exists",
            VerdictTag::NotExists => "not_exists",
        }
    }
}

#[derive(Debug, Clone)]
pub struct EmbeddingReport {
    pub classical_verdict: VerdictTag,
    pub quantum_verdict: VerdictTag,
    /// Largest marginal deviation seen when moving witnesses across.
    pub witness_roundtrip_error: f64,
    pub agreement: bool,
    /// Embedded classical witness verified against the quantum problem.
    pub classical_witness_lifts: Option<bool>,
    /// Diagonal of the quantum witness verified against the classical problem.
    pub quantum_witness_projects: Option<bool>,
    pub classical: ClassicalVerdict<f64>,
    pub quantum: LiftingVerdict,
}

/// Runs both deciders on `(mu1, mu2, R)` and its embedding.
pub fn cross_check<W: Weight>(
    mu1: &SubDistribution<W>,
    mu2: &SubDistribution<W>,
    relation: &Relation,
) -> Result<EmbeddingReport> {
    cross_check_with(mu1, mu2, relation, crate::DEFAULT_EPS_SOLVE, crate::DEFAULT_EPS_DECIDE)
}

pub fn cross_check_with<W: Weight>(
    mu1: &SubDistribution<W>,
    mu2: &SubDistribution<W>,
    relation: &Relation,
    eps_solve: f64,
    eps_decide: f64,
) -> Result<EmbeddingReport> {
    let classical = check_lifting_maxflow(mu1, mu2, relation)?;
    let problem = embed_problem(mu1, mu2, relation)?;
    let quantum = check_quantum_lifting(&problem, eps_solve, eps_decide)?;
    let (m, n) = (mu1.len(), mu2.len());
    let (f1, f2) = (mu1.to_f64(), mu2.to_f64());

    let mut roundtrip: f64 = 0.0;
    let classical_witness_lifts = match &classical {
        ClassicalVerdict::Exists(w) => {
            let embedded = embed_joint(w);
            let (r1, r2) = marginal_residuals(&embedded, &problem.rho1, &problem.rho2)?;
            roundtrip = roundtrip.max(r1).max(r2);
            Some(is_lifting_witness(&embedded, &problem, 1e-9)?)
        }
        ClassicalVerdict::NotExists(_) => None,
    };
    let quantum_witness_projects = match quantum.witness() {
        Some(w) => {
            let joint = extract_joint(w, m, n)?;
            let (p1, p2) = marginals(&joint);
            let dev = p1
                .weights()
                .iter()
                .zip(f1.weights())
                .chain(p2.weights().iter().zip(f2.weights()))
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            roundtrip = roundtrip.max(dev);
            Some(is_lifting_witness_classical(&joint, &f1, &f2, relation, 10.0 * eps_solve)?)
        }
        None => None,
    };

    let classical_verdict = if classical.exists() { VerdictTag::Exists } else { VerdictTag::NotExists };
    let quantum_verdict = if quantum.exists() { VerdictTag::Exists } else { VerdictTag::NotExists };
    let classical = match classical {
        ClassicalVerdict::Exists(w) => ClassicalVerdict::Exists(w.to_f64()),
        ClassicalVerdict::NotExists(s) => ClassicalVerdict::NotExists(s),
    };
    Ok(EmbeddingReport {
        classical_verdict,
        quantum_verdict,
        witness_roundtrip_error: roundtrip,
        agreement: classical_verdict == quantum_verdict,
        classical_witness_lifts,
        quantum_witness_projects,
        classical,
        quantum,
    })
}
