#![allow(dead_code)]

use qlift_core::classical::{Rational, Relation, SubDistribution};
use qlift_core::linalg::orthonormalize;
use qlift_core::{Complex, ComplexMatrix, DensityOperator, HermitianOperator, Subspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub fn random_complex(rng: &mut impl Rng) -> Complex {
    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_vector(rng: &mut impl Rng, d: usize) -> Vec<Complex> {
    (0..d).map(|_| random_complex(rng)).collect()
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| random_complex(rng))
}

pub fn random_hermitian(rng: &mut impl Rng, d: usize) -> HermitianOperator {
    let a = random_matrix(rng, d, d);
    let h = (&a + &a.adjoint()).scale(0.5);
    HermitianOperator::new(h).unwrap()
}

/// Haar-ish unitary: Gram-Schmidt on random columns.
pub fn random_unitary(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    loop {
        let cols: Vec<Vec<Complex>> = (0..d).map(|_| random_vector(rng, d)).collect();
        let q = orthonormalize(d, &cols).unwrap();
        if q.len() == d {
            return ComplexMatrix::from_fn(d, d, |i, j| q[j][i]);
        }
    }
}

/// `U diag(w) U*` with `w` normalized to the given trace; `rank` nonzero weights.
pub fn random_density(rng: &mut impl Rng, d: usize, rank: usize, trace: f64) -> DensityOperator {
    let mut w: Vec<f64> = (0..d).map(|k| if k < rank { rng.random_range(0.05..1.0) } else { 0.0 }).collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x *= trace / s);
    let u = random_unitary(rng, d);
    let op = HermitianOperator::from_real_diagonal(&w).conjugate_by(&u).unwrap();
    DensityOperator::new(op).unwrap()
}

pub fn random_subspace(rng: &mut impl Rng, ambient: usize, rank: usize) -> Subspace {
    let vs: Vec<Vec<Complex>> = (0..rank).map(|_| random_vector(rng, ambient)).collect();
    Subspace::from_span(ambient, &vs).unwrap()
}

/// Random integer counts with a fixed sum.
fn composition(rng: &mut impl Rng, parts: usize, total: i128) -> Vec<i128> {
    let mut out = vec![0i128; parts];
    for _ in 0..total {
        out[rng.random_range(0..parts)] += 1;
    }
    out
}

/// Two rational sub-distributions with the same total, weights `k / den`.
pub fn random_rational_pair(
    rng: &mut impl Rng,
    m: usize,
    n: usize,
) -> (SubDistribution<Rational>, SubDistribution<Rational>) {
    let den: i128 = [4, 6, 8, 12][rng.random_range(0..4)];
    let total = if rng.random_bool(0.7) { den } else { rng.random_range(0..=den) };
    let a = composition(rng, m, total);
    let b = composition(rng, n, total);
    let to = |v: Vec<i128>| SubDistribution::new(v.into_iter().map(|k| Rational::new(k, den)).collect()).unwrap();
    (to(a), to(b))
}

pub fn random_relation(rng: &mut impl Rng, m: usize, n: usize) -> Relation {
    let p = rng.random_range(0.1..0.9);
    Relation::from_fn(m, n, |_, _| rng.random_bool(p))
}

pub fn frob_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).frobenius_norm()
}

/// Elementwise partial traces, independent of the library's implementation.
pub fn naive_tr2(m: &ComplexMatrix, d1: usize, d2: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d1, d1, |i, j| (0..d2).map(|k| m.get(i * d2 + k, j * d2 + k)).sum())
}

pub fn naive_tr1(m: &ComplexMatrix, d1: usize, d2: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d2, d2, |k, l| (0..d1).map(|i| m.get(i * d2 + k, i * d2 + l)).sum())
}

/// `sum conj(a_ij) b_ij`, real part.
pub fn naive_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.entries().iter().zip(b.entries()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Exhaustive Strassen check in the simplest possible form.
pub fn naive_strassen_holds(w1: &[Rational], w2: &[Rational], r: &Relation) -> bool {
    let (m, n) = (w1.len(), w2.len());
    (0u32..1 << m).all(|s| {
        let lhs: Rational = (0..m).filter(|i| s >> i & 1 == 1).map(|i| w1[i]).sum();
        let rhs: Rational = (0..n)
            .filter(|&j| (0..m).any(|i| s >> i & 1 == 1 && r.contains(i, j)))
            .map(|j| w2[j])
            .sum();
        lhs <= rhs
    })
}

/// Random lifting problem: equal traces, random marginal ranks and a random subspace.
pub fn random_problem(rng: &mut impl Rng, d1: usize, d2: usize) -> qlift_core::quantum::CouplingProblem {
    let t = rng.random_range(0.2..=1.0);
    let r1 = rng.random_range(1..=d1);
    let r2 = rng.random_range(1..=d2);
    let rho1 = random_density(rng, d1, r1, t);
    let rho2 = random_density(rng, d2, r2, t);
    let k = rng.random_range(1..=d1 * d2);
    let x = random_subspace(rng, d1 * d2, k);
    qlift_core::quantum::CouplingProblem::new(rho1, rho2, x).unwrap()
}
