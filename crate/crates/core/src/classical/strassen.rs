use alloc::vec::Vec;

use super::{Relation, SubDistribution, Weight};
use crate::error::{dim_err, input_err, Result};

/// Largest left-hand set size accepted by the `2^m` enumeration.
pub const MAX_EXHAUSTIVE_SIZE: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrassenOutcome {
    /// `mu1(S) <= mu2(R(S))` for every `S`.
    Holds,
    /// A set with `mu1(S) > mu2(R(S))`, sorted ascending.
    Violated(Vec<usize>),
}

impl StrassenOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, StrassenOutcome::Holds)
    }
}

/// Brute-force check of `forall S. mu1(S) <= mu2(R(S))`.
///
/// Subsets are visited in increasing bitmask order (bit `i` set means
/// `i in S`) and the first violating one is returned.
pub fn check_strassen_exhaustive<W: Weight>(
    mu1: &SubDistribution<W>,
    mu2: &SubDistribution<W>,
    relation: &Relation,
) -> Result<StrassenOutcome> {
    let (m, n) = (mu1.len(), mu2.len());
    if relation.rows() != m || relation.cols() != n {
        return Err(dim_err!(
            "relation is {}x{}, marginals have sizes {m} and {n}",
            relation.rows(),
            relation.cols()
        ));
    }
    if m > MAX_EXHAUSTIVE_SIZE {
        return Err(input_err!(
            "exhaustive check limited to m <= {MAX_EXHAUSTIVE_SIZE} (got {m}); use the max-flow checker"
        ));
    }
    // Row images, precomputed once.
    let row_images: Vec<Vec<usize>> = (0..m)
        .map(|i| (0..n).filter(|&j| relation.contains(i, j)).collect())
        .collect();
    let mut hit = alloc::vec![false; n];
    for mask in 0u32..(1u32 << m) {
        hit.iter_mut().for_each(|h| *h = false);
        let mut left = W::zero();
        for (i, img) in row_images.iter().enumerate() {
            if (mask >> i) & 1 == 1 {
                left = left + mu1.get(i);
                for &j in img {
                    hit[j] = true;
                }
            }
        }
        let mut right = W::zero();
        for (j, &h) in hit.iter().enumerate() {
            if h {
                right = right + mu2.get(j);
            }
        }
        if W::strictly_exceeds(left, right) {
            return Ok(StrassenOutcome::Violated(
                (0..m).filter(|&i| (mask >> i) & 1 == 1).collect(),
            ));
        }
    }
    Ok(StrassenOutcome::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn flip_equality_holds() {
        let flip = SubDistribution::new(vec![0.5, 0.5]).unwrap();
        assert!(check_strassen_exhaustive(&flip, &flip, &Relation::equality(2)).unwrap().holds());
    }

    #[test]
    fn single_pair_relation_violated_by_second_point() {
        let flip = SubDistribution::new(vec![0.5, 0.5]).unwrap();
        let r = Relation::new(2, 2, &[(0, 0)]).unwrap();
        assert_eq!(
            check_strassen_exhaustive(&flip, &flip, &r).unwrap(),
            StrassenOutcome::Violated(vec![1])
        );
    }

    #[test]
    fn zero_distributions_hold_for_any_relation() {
        let z = SubDistribution::<f64>::zero(3);
        for mask in 0..(1 << 9) {
            let r = Relation::from_mask(3, 3, mask);
            assert!(check_strassen_exhaustive(&z, &z, &r).unwrap().holds());
        }
    }

    #[test]
    fn size_and_shape_limits() {
        let big = SubDistribution::<f64>::zero(25);
        let one = SubDistribution::<f64>::zero(1);
        assert!(check_strassen_exhaustive(&big, &one, &Relation::full(25, 1)).unwrap_err().is_input_error());
        assert!(check_strassen_exhaustive(&one, &one, &Relation::full(2, 1)).is_err());
    }
}
