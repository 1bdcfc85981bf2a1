//! Cumulants from raw moments through the partition-sum formula
//!
//! `C_k = sum over partitions pi of [k] of (|pi| - 1)! (-1)^(|pi| - 1) prod_{B in pi} m_|B|`.

use num_bigint::BigInt;
use num_traits::{Pow, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Largest supported cumulant order; Bell(8) = 4140 partitions.
pub const CUMULANT_GUARD: usize = 8;

/// A partition of `{1, ..., k}` into non-empty blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetPartition {
    k: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }
}

/// All partitions of `{1, ..., k}`, generated from restricted growth
/// strings `a_1 = 0, a_i <= 1 + max(a_1..a_{i-1})`.
pub fn set_partitions(k: usize) -> Result<Vec<SetPartition>> {
    if k == 0 {
        return Err(Error::Argument("k must be at least 1".into()));
    }
    if k > CUMULANT_GUARD {
        return Err(Error::CumulantGuard {
            k,
            limit: CUMULANT_GUARD,
        });
    }
    let mut out = Vec::new();
    let mut growth = vec![0usize; k];
    loop {
        let num_blocks = growth.iter().max().unwrap() + 1;
        let mut blocks = vec![Vec::new(); num_blocks];
        for (i, &b) in growth.iter().enumerate() {
            blocks[b].push(i + 1);
        }
        out.push(SetPartition { k, blocks });

        // Next restricted growth string: bump the rightmost position that
        // may still grow, reset everything after it.
        let mut i = k - 1;
        loop {
            if i == 0 {
                return Ok(out);
            }
            let prefix_max = *growth[..i].iter().max().unwrap();
            if growth[i] <= prefix_max {
                growth[i] += 1;
                growth[i + 1..].fill(0);
                break;
            }
            i -= 1;
        }
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// Converts raw moments `m_1..m_K` into cumulants `C_1..C_K`.
pub fn moments_to_cumulants(moments: &[Rational]) -> Result<Vec<Rational>> {
    if moments.is_empty() {
        return Err(Error::Argument("need at least one moment".into()));
    }
    if moments.len() > CUMULANT_GUARD {
        return Err(Error::CumulantGuard {
            k: moments.len(),
            limit: CUMULANT_GUARD,
        });
    }
    let mut cumulants = Vec::with_capacity(moments.len());
    for k in 1..=moments.len() {
        let mut total = Rational::zero();
        for pi in set_partitions(k)? {
            let r = pi.num_blocks();
            let mut term = Rational::from_integer(factorial(r - 1));
            if r % 2 == 0 {
                term = -term;
            }
            for block in pi.blocks() {
                term *= &moments[block.len() - 1];
            }
            total += term;
        }
        cumulants.push(total);
    }
    Ok(cumulants)
}

/// Raw moments `E[X^1..X^k_max]` of a finite distribution given as
/// `(value, probability)` pairs.
pub fn raw_moments(outcomes: &[(Rational, Rational)], k_max: usize) -> Vec<Rational> {
    (1..=k_max)
        .map(|j| {
            outcomes
                .iter()
                .map(|(v, p)| Pow::pow(v, j as u32) * p)
                .fold(Rational::zero(), |acc, x| acc + x)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::ratio;
    use proptest::prelude::*;
    use std::collections::HashSet;

    #[test]
    fn partition_counts_are_bell_numbers() {
        // Bell numbers from the recurrence B_{m+1} = sum C(m, i) B_i.
        let mut bell = vec![1u64];
        for m in 0..8 {
            let mut binom = 1u64;
            let mut next = 0;
            for i in 0..=m {
                next += binom * bell[i];
                binom = binom * (m - i) as u64 / (i as u64 + 1);
            }
            bell.push(next);
        }
        assert_eq!(&bell[..6], &[1, 1, 2, 5, 15, 52]);
        for k in 1..=8 {
            let parts = set_partitions(k).unwrap();
            assert_eq!(parts.len() as u64, bell[k], "k = {k}");
            let distinct: HashSet<_> = parts
                .iter()
                .map(|p| {
                    let mut b = p.blocks().to_vec();
                    b.sort();
                    b
                })
                .collect();
            assert_eq!(distinct.len(), parts.len());
            for p in &parts {
                let mut all: Vec<usize> = p.blocks().iter().flatten().copied().collect();
                all.sort();
                assert_eq!(all, (1..=k).collect::<Vec<_>>());
                assert!(p.blocks().iter().all(|b| !b.is_empty()));
            }
        }
        assert!(matches!(set_partitions(9), Err(Error::CumulantGuard { .. })));
    }

    #[test]
    fn bernoulli_cumulants() {
        let half = ratio(1, 2);
        let c = moments_to_cumulants(&[half.clone(), half.clone()]).unwrap();
        assert_eq!(c, vec![ratio(1, 2), ratio(1, 4)]);
        for (p, q) in [(1, 2), (1, 3), (2, 7)] {
            let p = ratio(p, q);
            let c = moments_to_cumulants(&[p.clone(), p.clone(), p.clone()]).unwrap();
            let one = ratio(1, 1);
            let expected = &p * (&one - &p) * (&one - ratio(2, 1) * &p);
            assert_eq!(c[2], expected);
        }
        let c3 = moments_to_cumulants(&[half.clone(), half.clone(), half]).unwrap();
        assert_eq!(c3[2], ratio(0, 1));
    }

    #[test]
    fn crossing_count_cumulants_at_five() {
        let c = moments_to_cumulants(&[ratio(4, 5), ratio(34, 25)]).unwrap();
        assert_eq!(c, vec![ratio(4, 5), ratio(18, 25)]);
    }

    #[test]
    fn guard_on_order() {
        let m = vec![ratio(1, 1); 9];
        assert!(matches!(
            moments_to_cumulants(&m),
            Err(Error::CumulantGuard { k: 9, .. })
        ));
    }

    fn small_distribution() -> impl Strategy<Value = Vec<(Rational, Rational)>> {
        prop::collection::vec((-5i64..=5, 1i64..=6), 1..5).prop_map(|pairs| {
            let total: i64 = pairs.iter().map(|p| p.1).sum();
            pairs
                .into_iter()
                .map(|(v, w)| (ratio(v, 1), ratio(w, total)))
                .collect()
        })
    }

    fn cumulants_of(d: &[(Rational, Rational)], k: usize) -> Vec<Rational> {
        moments_to_cumulants(&raw_moments(d, k)).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn shift_invariance(d in small_distribution(), c in -4i64..=4) {
            let shifted: Vec<_> = d.iter().map(|(v, p)| (v + ratio(c, 1), p.clone())).collect();
            let a = cumulants_of(&d, 5);
            let b = cumulants_of(&shifted, 5);
            prop_assert_eq!(&b[0], &(&a[0] + ratio(c, 1)));
            prop_assert_eq!(&a[1..], &b[1..]);
        }

        #[test]
        fn homogeneity(d in small_distribution(), num in -3i64..=3, den in 1i64..=3) {
            let lambda = ratio(num, den);
            let scaled: Vec<_> = d.iter().map(|(v, p)| (v * &lambda, p.clone())).collect();
            let a = cumulants_of(&d, 5);
            let b = cumulants_of(&scaled, 5);
            for k in 0..5 {
                prop_assert_eq!(&b[k], &(&a[k] * Pow::pow(&lambda, (k + 1) as u32)));
            }
        }

        #[test]
        fn additivity_for_independent_sums(x in small_distribution(), y in small_distribution()) {
            let sum: Vec<_> = x
                .iter()
                .flat_map(|(vx, px)| y.iter().map(move |(vy, py)| (vx + vy, px * py)))
                .collect();
            let (cx, cy, cs) = (cumulants_of(&x, 4), cumulants_of(&y, 4), cumulants_of(&sum, 4));
            for k in 0..4 {
                prop_assert_eq!(&cs[k], &(&cx[k] + &cy[k]));
            }
        }
    }
}
