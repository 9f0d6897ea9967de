//! Probabilistic couplings and liftings over finite sets `[m] = {0, .., m-1}`.
//!
//! Weights are generic over [`Weight`], implemented for `f64` and for the
//! exact [`Rational`] type; the rational instantiation makes equivalence
//! checks between deciders free of tolerance questions.

mod observables;
mod maxflow;
mod strassen;

pub use observables::{check_statement_2prime, level_set_decomposition, y2_min, LevelSet, CONSTRAINT_TOL};
pub use maxflow::{check_lifting_maxflow, ClassicalVerdict};
pub use strassen::{check_strassen_exhaustive, StrassenOutcome, MAX_EXHAUSTIVE_SIZE};

use alloc::vec;
use alloc::vec::Vec;
use core::fmt::{Debug, Display};
use core::ops::{Add, Sub};

use num_traits::Zero;

use crate::error::{dim_err, input_err, Result};

pub type Rational = num_rational::Ratio<i128>;

/// Scalar type for probability weights.
pub trait Weight: Copy + PartialOrd + Debug + Display + Zero + Add<Output = Self> + Sub<Output = Self> {
    /// Slack tolerated when checking `sum <= 1` on construction.
    const TOTAL_SLACK: f64;

    fn to_f64(self) -> f64;

    fn is_finite(self) -> bool;

    /// Residual capacities at or below this are treated as saturated.
    fn flow_cutoff(total: Self) -> Self;

    /// Largest `|mu1| - |mu2|` (either sign) treated as equal weights.
    fn match_tol() -> Self;

    /// `a > b` beyond arithmetic noise.
    fn strictly_exceeds(a: Self, b: Self) -> bool;

    fn one() -> Self;
}

impl Weight for f64 {
    const TOTAL_SLACK: f64 = 1e-12;

    fn to_f64(self) -> f64 {
        self
    }

    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }

    fn flow_cutoff(total: Self) -> Self {
        1e-12 * total
    }

    fn match_tol() -> Self {
        1e-9
    }

    fn strictly_exceeds(a: Self, b: Self) -> bool {
        a - b > 1e-12
    }

    fn one() -> Self {
        1.0
    }
}

impl Weight for Rational {
    const TOTAL_SLACK: f64 = 0.0;

    fn to_f64(self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }

    fn is_finite(self) -> bool {
        true
    }

    fn flow_cutoff(_total: Self) -> Self {
        Rational::zero()
    }

    fn match_tol() -> Self {
        Rational::zero()
    }

    fn strictly_exceeds(a: Self, b: Self) -> bool {
        a > b
    }

    fn one() -> Self {
        Rational::from_integer(1)
    }
}

fn sum<W: Weight>(it: impl IntoIterator<Item = W>) -> W {
    it.into_iter().fold(W::zero(), |a, b| a + b)
}

fn check_weights<W: Weight>(weights: &[W]) -> Result<()> {
    for (i, &w) in weights.iter().enumerate() {
        if !w.is_finite() {
            return Err(input_err!("weight {i} is not finite"));
        }
        if w < W::zero() {
            return Err(input_err!("weight {i} is negative ({w})"));
        }
    }
    let total = sum(weights.iter().copied());
    if total.to_f64() > 1.0 + W::TOTAL_SLACK && total > W::one() {
        return Err(input_err!("weights sum to {total} > 1"));
    }
    Ok(())
}

/// A sub-distribution `mu` on `[m]`: nonnegative weights with `|mu| <= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubDistribution<W = f64> {
    weights: Vec<W>,
}

impl<W: Weight> SubDistribution<W> {
    pub fn new(weights: Vec<W>) -> Result<Self> {
        check_weights(&weights)?;
        Ok(Self { weights })
    }

    pub fn zero(m: usize) -> Self {
        Self {
            weights: vec![W::zero(); m],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[W] {
        &self.weights
    }

    pub fn get(&self, i: usize) -> W {
        self.weights[i]
    }

    /// `|mu|`.
    pub fn total(&self) -> W {
        sum(self.weights.iter().copied())
    }

    /// `mu(S)`; indices outside `[m]` are ignored.
    pub fn mass(&self, set: &[usize]) -> W {
        sum(set.iter().filter_map(|&i| self.weights.get(i).copied()))
    }

    /// `{ i : mu(i) > 0 }`.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.weights[i] > W::zero()).collect()
    }

    pub fn to_f64(&self) -> SubDistribution<f64> {
        SubDistribution {
            weights: self.weights.iter().map(|w| w.to_f64()).collect(),
        }
    }
}

impl SubDistribution<f64> {
    /// `Unif_[d]`.
    pub fn uniform(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(input_err!("uniform distribution needs a nonempty set"));
        }
        Ok(Self {
            weights: vec![1.0 / d as f64; d],
        })
    }

    pub fn point_mass(m: usize, at: usize) -> Result<Self> {
        if at >= m {
            return Err(input_err!("point {at} out of range for [{m}]"));
        }
        let mut weights = vec![0.0; m];
        weights[at] = 1.0;
        Ok(Self { weights })
    }
}

/// A joint sub-distribution on `[m] x [n]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSubDistribution<W = f64> {
    m: usize,
    n: usize,
    weights: Vec<W>,
}

impl<W: Weight> JointSubDistribution<W> {
    pub fn new(m: usize, n: usize, weights: Vec<W>) -> Result<Self> {
        if weights.len() != m * n {
            return Err(dim_err!("{} weights for a {m} x {n} joint", weights.len()));
        }
        check_weights(&weights)?;
        Ok(Self { m, n, weights })
    }

    pub(crate) fn from_vec_unchecked(m: usize, n: usize, weights: Vec<W>) -> Self {
        Self { m, n, weights }
    }

    pub fn zero(m: usize, n: usize) -> Self {
        Self {
            m,
            n,
            weights: vec![W::zero(); m * n],
        }
    }

    /// `mu_x(i, j) = mu1(i) mu2(j)`.
    pub fn product(mu1: &SubDistribution<W>, mu2: &SubDistribution<W>) -> Self
    where
        W: core::ops::Mul<Output = W>,
    {
        let (m, n) = (mu1.len(), mu2.len());
        let mut weights = Vec::with_capacity(m * n);
        for i in 0..m {
            for j in 0..n {
                weights.push(mu1.get(i) * mu2.get(j));
            }
        }
        Self { m, n, weights }
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> W {
        self.weights[i * self.n + j]
    }

    pub fn weights(&self) -> &[W] {
        &self.weights
    }

    pub fn total(&self) -> W {
        sum(self.weights.iter().copied())
    }

    pub fn to_f64(&self) -> JointSubDistribution<f64> {
        JointSubDistribution {
            m: self.m,
            n: self.n,
            weights: self.weights.iter().map(|w| w.to_f64()).collect(),
        }
    }
}

/// A relation `R` on `[m] x [n]` as a boolean membership matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    m: usize,
    n: usize,
    member: Vec<bool>,
}

impl Relation {
    pub fn new(m: usize, n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut member = vec![false; m * n];
        for &(i, j) in pairs {
            if i >= m || j >= n {
                return Err(input_err!("pair ({i}, {j}) outside [{m}] x [{n}]"));
            }
            member[i * n + j] = true;
        }
        Ok(Self { m, n, member })
    }

    pub fn from_fn(m: usize, n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut member = Vec::with_capacity(m * n);
        for i in 0..m {
            for j in 0..n {
                member.push(f(i, j));
            }
        }
        Self { m, n, member }
    }

    /// Bit `i * n + j` of `mask` decides membership of `(i, j)`.
    pub fn from_mask(m: usize, n: usize, mask: u64) -> Self {
        Self::from_fn(m, n, |i, j| (mask >> (i * n + j)) & 1 == 1)
    }

    pub fn full(m: usize, n: usize) -> Self {
        Self::from_fn(m, n, |_, _| true)
    }

    pub fn empty(m: usize, n: usize) -> Self {
        Self::from_fn(m, n, |_, _| false)
    }

    pub fn equality(d: usize) -> Self {
        Self::from_fn(d, d, |i, j| i == j)
    }

    /// Graph `{(i, f(i))}` of a map `f: [m] -> [n]`.
    pub fn graph(n: usize, f: &[usize]) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = f.iter().copied().enumerate().collect();
        Self::new(f.len(), n, &pairs)
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i < self.m && j < self.n && self.member[i * self.n + j]
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.m {
            for j in 0..self.n {
                if self.member[i * self.n + j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// `R(S) = { j : exists i in S, (i, j) in R }`, sorted.
    pub fn image(&self, set: &[usize]) -> Result<Vec<usize>> {
        let mut hit = vec![false; self.n];
        for &i in set {
            if i >= self.m {
                return Err(input_err!("index {i} outside [{}]", self.m));
            }
            for (j, h) in hit.iter_mut().enumerate() {
                *h |= self.member[i * self.n + j];
            }
        }
        Ok((0..self.n).filter(|&j| hit[j]).collect())
    }
}

/// A diagonal observable, i.e. a real vector of diagonal entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalObservable {
    values: Vec<f64>,
}

impl DiagonalObservable {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(input_err!("observable entry {i} is not finite"));
        }
        Ok(Self { values })
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            values: vec![0.0; len],
        }
    }

    /// 0/1 indicator of `set` within `[len]`.
    pub fn indicator(len: usize, set: &[usize]) -> Self {
        let mut values = vec![0.0; len];
        for &i in set {
            if i < len {
                values[i] = 1.0;
            }
        }
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }
}

/// `(pi_1(mu), pi_2(mu))`: row and column sums.
pub fn marginals<W: Weight>(mu: &JointSubDistribution<W>) -> (SubDistribution<W>, SubDistribution<W>) {
    let (m, n) = (mu.m, mu.n);
    let rows = (0..m).map(|i| sum((0..n).map(|j| mu.get(i, j)))).collect();
    let cols = (0..n).map(|j| sum((0..m).map(|i| mu.get(i, j)))).collect();
    (SubDistribution { weights: rows }, SubDistribution { weights: cols })
}

fn abs_diff<W: Weight>(a: W, b: W) -> W {
    if a >= b {
        a - b
    } else {
        b - a
    }
}

/// Marginals match `(mu1, mu2)` to `tol` in the max norm and `mu` puts at
/// most `tol` on each pair outside `R`.
pub fn is_lifting_witness_classical<W: Weight>(
    mu: &JointSubDistribution<W>,
    mu1: &SubDistribution<W>,
    mu2: &SubDistribution<W>,
    relation: &Relation,
    tol: W,
) -> Result<bool> {
    let (m, n) = (mu1.len(), mu2.len());
    if mu.m != m || mu.n != n || relation.m != m || relation.n != n {
        return Err(dim_err!(
            "joint {}x{}, relation {}x{}, marginals {m} and {n}",
            mu.m,
            mu.n,
            relation.m,
            relation.n
        ));
    }
    let (p1, p2) = marginals(mu);
    let rows_ok = (0..m).all(|i| abs_diff(p1.get(i), mu1.get(i)) <= tol);
    let cols_ok = (0..n).all(|j| abs_diff(p2.get(j), mu2.get(j)) <= tol);
    let support_ok = (0..m).all(|i| (0..n).all(|j| relation.contains(i, j) || mu.get(i, j) <= tol));
    Ok(rows_ok && cols_ok && support_ok)
}

/// Free-function form of [`Relation::image`].
pub fn relation_image(relation: &Relation, set: &[usize]) -> Result<Vec<usize>> {
    relation.image(set)
}
