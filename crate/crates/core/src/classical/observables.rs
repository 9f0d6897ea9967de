//! Nonnegative diagonal dual observables: level-set decomposition, the
//! minimal completion `Y2min`, and the sum inequality relating them to the
//! domination condition.

use alloc::vec::Vec;

use super::{DiagonalObservable, Relation, SubDistribution};
use crate::error::{dim_err, input_err, Result};

/// Slack allowed when checking the pairwise constraints on `(Y1, Y2)`.
pub const CONSTRAINT_TOL: f64 = 1e-9;
const SUM_TOL: f64 = 1e-12;

/// One term `lambda_k * 1[S_k]` of a level-set decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSet {
    pub lambda: f64,
    pub indicator: DiagonalObservable,
}

impl LevelSet {
    /// `S_k` as sorted indices.
    pub fn members(&self) -> Vec<usize> {
        (0..self.indicator.len()).filter(|&i| self.indicator.get(i) == 1.0).collect()
    }
}

fn check_nonnegative(y: &DiagonalObservable, name: &str) -> Result<()> {
    if let Some(i) = y.values().iter().position(|&v| v < 0.0) {
        return Err(input_err!("{name} has negative entry {} at {i}", y.get(i)));
    }
    Ok(())
}

/// Writes `Y1 = sum_k lambda_k Z_k` with `Z_k = 1[Y1 >= t_k]` over the
/// distinct positive values `t_1 < .. < t_r`, `lambda_1 = t_1` and
/// `lambda_k = t_k - t_(k-1)`. The supports strictly decrease.
pub fn level_set_decomposition(y1: &DiagonalObservable) -> Result<Vec<LevelSet>> {
    check_nonnegative(y1, "Y1")?;
    let mut levels: Vec<f64> = y1.values().iter().copied().filter(|&v| v > 0.0).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let mut prev = 0.0;
    Ok(levels
        .into_iter()
        .map(|t| {
            let members: Vec<usize> = (0..y1.len()).filter(|&i| y1.get(i) >= t).collect();
            let term = LevelSet {
                lambda: t - prev,
                indicator: DiagonalObservable::indicator(y1.len(), &members),
            };
            prev = t;
            term
        })
        .collect())
}

/// `Y2min = sum_k lambda_k 1[R(S_k)]`, the entrywise smallest nonnegative
/// `Y2` with `Y2_j >= Y1_i` for every `(i, j) in R`.
pub fn y2_min(y1: &DiagonalObservable, relation: &Relation) -> Result<DiagonalObservable> {
    if relation.rows() != y1.len() {
        return Err(dim_err!(
            "Y1 has {} entries, relation has {} rows",
            y1.len(),
            relation.rows()
        ));
    }
    let mut out = alloc::vec![0.0; relation.cols()];
    for level in level_set_decomposition(y1)? {
        for j in relation.image(&level.members())? {
            out[j] += level.lambda;
        }
    }
    DiagonalObservable::new(out)
}

/// Checks `sum mu1(i) Y1_i <= sum mu2(j) Y2_j` for a nonnegative pair that
/// satisfies `Y2_j >= Y1_i` on `R` and `Y2_j >= Y1_i - 1` off `R`.
///
/// A pair violating a constraint is an input error naming the pair.
pub fn check_statement_2prime(
    mu1: &SubDistribution,
    mu2: &SubDistribution,
    relation: &Relation,
    y1: &DiagonalObservable,
    y2: &DiagonalObservable,
) -> Result<bool> {
    let (m, n) = (mu1.len(), mu2.len());
    if y1.len() != m || y2.len() != n || relation.rows() != m || relation.cols() != n {
        return Err(dim_err!(
            "observables of sizes {} and {}, relation {}x{}, distributions {m} and {n}",
            y1.len(),
            y2.len(),
            relation.rows(),
            relation.cols()
        ));
    }
    check_nonnegative(y1, "Y1")?;
    check_nonnegative(y2, "Y2")?;
    for i in 0..m {
        for j in 0..n {
            let bound = if relation.contains(i, j) { y1.get(i) } else { y1.get(i) - 1.0 };
            if y2.get(j) < bound - CONSTRAINT_TOL {
                return Err(input_err!(
                    "constraint violated at ({i}, {j}): Y2_{j} = {} < {bound}",
                    y2.get(j)
                ));
            }
        }
    }
    let lhs: f64 = (0..m).map(|i| mu1.get(i) * y1.get(i)).sum();
    let rhs: f64 = (0..n).map(|j| mu2.get(j) * y2.get(j)).sum();
    Ok(lhs <= rhs + SUM_TOL)
}
