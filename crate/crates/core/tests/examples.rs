//! Worked couplings and liftings, reproduced to 1e-9.

mod common;

use common::*;
use qlift_core::classical::*;
use qlift_core::quantum::*;
use qlift_core::sdp::check_quantum_lifting;
use qlift_core::{ComplexMatrix, DensityOperator, Subspace};

const TOL: f64 = 1e-9;

fn flip() -> SubDistribution {
    SubDistribution::new(vec![0.5, 0.5]).unwrap()
}

fn close(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= TOL)
}

#[test]
fn flip_identity_and_negation_couplings() {
    let mu_id = JointSubDistribution::new(2, 2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
    let mu_neg = JointSubDistribution::new(2, 2, vec![0.0, 0.5, 0.5, 0.0]).unwrap();
    for mu in [&mu_id, &mu_neg] {
        let (a, b) = marginals(mu);
        assert!(close(a.weights(), &[0.5, 0.5]) && close(b.weights(), &[0.5, 0.5]));
    }
    let eq = Relation::equality(2);
    let neq = Relation::from_fn(2, 2, |a, b| a != b);
    assert!(is_lifting_witness_classical(&mu_id, &flip(), &flip(), &eq, TOL).unwrap());
    assert!(is_lifting_witness_classical(&mu_neg, &flip(), &flip(), &neq, TOL).unwrap());
    match check_lifting_maxflow(&flip(), &flip(), &neq).unwrap() {
        ClassicalVerdict::Exists(w) => assert!(close(w.weights(), mu_neg.weights())),
        v => panic!("{v:?}"),
    }
}

#[test]
fn bijection_couplings() {
    for f in [vec![0, 1, 2], vec![1, 2, 0], vec![2, 1, 0], vec![3, 0, 2, 1]] {
        let d = f.len();
        let unif = SubDistribution::uniform(d).unwrap();
        let graph = Relation::graph(d, &f).unwrap();
        let mut w = vec![0.0; d * d];
        for (i, &fi) in f.iter().enumerate() {
            w[i * d + fi] = 1.0 / d as f64;
        }
        let mu_f = JointSubDistribution::new(d, d, w).unwrap();
        assert!(is_lifting_witness_classical(&mu_f, &unif, &unif, &graph, TOL).unwrap());
        match check_lifting_maxflow(&unif, &unif, &graph).unwrap() {
            ClassicalVerdict::Exists(found) => assert!(close(found.weights(), mu_f.weights())),
            v => panic!("{v:?}"),
        }
    }
}

#[test]
fn identity_couplings_depend_on_the_eigenbasis() {
    let half = uniform_density(2).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let computational = ComplexMatrix::identity(2);
    let diagonal = ComplexMatrix::from_parts(2, 2, &[h, h, h, -h], &[0.0; 4]).unwrap();
    let (w_b, x_b) = coupling_in_basis(&half, &computational).unwrap();
    let (w_d, x_d) = coupling_in_basis(&half, &diagonal).unwrap();
    assert!(close(&w_b.operator().real_diagonal(), &[0.5, 0.0, 0.0, 0.5]));
    // (|++><++| + |--><--|) / 2 has 1/4 in the four corners and 1/4 on the anti-diagonal
    for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3), (1, 1), (1, 2), (2, 1), (2, 2)] {
        assert!((w_d.matrix().get(i, j).re - 0.25).abs() <= TOL, "({i},{j})");
    }
    assert!(frob_diff(w_b.matrix(), w_d.matrix()) > 0.4);
    for (w, x) in [(&w_b, &x_b), (&w_d, &x_d)] {
        let p = CouplingProblem::new(half.clone(), half.clone(), x.clone()).unwrap();
        assert!(is_lifting_witness(w, &p, TOL).unwrap());
    }
}

#[test]
fn tensor_product_coupling() {
    let mut g = rng(50);
    let r1 = random_density(&mut g, 2, 2, 1.0);
    let r2 = random_density(&mut g, 3, 2, 1.0);
    let t = coupling_tensor(&r1, &r2).unwrap();
    let (e1, e2) = marginal_residuals(&t, &r1, &r2).unwrap();
    assert!(e1 <= TOL && e2 <= TOL);
    let p = CouplingProblem::new(r1, r2, Subspace::full(6)).unwrap();
    assert!(is_lifting_witness(&t, &p, TOL).unwrap());
}

#[test]
fn bell_state_witnesses_basis_equality() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let bell = DensityOperator::pure(&[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]).unwrap();
    let half = uniform_density(2).unwrap();
    let eq = Subspace::coordinate(4, &[0, 3]).unwrap();
    let p = CouplingProblem::new(half.clone(), half, eq).unwrap();
    assert!(is_lifting_witness(&bell, &p, TOL).unwrap());
    for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        assert!((bell.matrix().get(i, j).re - 0.5).abs() <= TOL);
    }
    assert!(check_quantum_lifting(&p, 1e-8, 1e-6).unwrap().exists());
}

#[test]
fn unitary_couplings_differ_for_identity_and_flip() {
    let x = ComplexMatrix::from_parts(2, 2, &[0.0, 1.0, 1.0, 0.0], &[0.0; 4]).unwrap();
    let (rho_i, _) = coupling_unitary(&ComplexMatrix::identity(2)).unwrap();
    let (rho_x, _) = coupling_unitary(&x).unwrap();
    assert!(close(&rho_i.operator().real_diagonal(), &[0.5, 0.0, 0.0, 0.5]));
    assert!(close(&rho_x.operator().real_diagonal(), &[0.0, 0.5, 0.5, 0.0]));
    let half = uniform_density(2).unwrap();
    for rho in [&rho_i, &rho_x] {
        let (e1, e2) = marginal_residuals(rho, &half, &half).unwrap();
        assert!(e1 <= TOL && e2 <= TOL);
    }
    assert!((frob_diff(rho_i.matrix(), rho_x.matrix()) - 1.0).abs() <= TOL);
}
