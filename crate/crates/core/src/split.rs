//! Prefix and suffix splits of sorted dyadic lists.
//!
//! For a non-increasing list `2^-a_1 >= 2^-a_2 >= ...` and an integer
//! `a <= a_1`, if the total is at least `2^-a` then some prefix sums to
//! exactly `2^-a`; if the total is a multiple of `2^-a` and the smallest
//! weight is at most `2^-a`, some suffix does too.
//! Every strategy that hunts for a set of mass exactly one half relies on this.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

fn check_sorted(exponents: &[u32], a: u32, bounded: bool) -> Result<u32> {
    if exponents.is_empty() {
        return Err(Error::PreconditionViolated("empty list".into()));
    }
    if exponents.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::PreconditionViolated(
            "weights must be non-increasing".into(),
        ));
    }
    if bounded && a > exponents[0] {
        return Err(Error::PreconditionViolated(format!(
            "target 2^-{a} is smaller than the largest weight 2^-{}",
            exponents[0]
        )));
    }
    Ok(*exponents.last().expect("nonempty"))
}

/// Length `m` of the shortest prefix with mass exactly `2^-a`.
///
/// `exponents[i]` is `a_i`, so weights are `2^-a_i`; they must be
/// non-increasing (exponents non-decreasing).
pub fn dyadic_prefix_split(exponents: &[u32], a: u32) -> Result<usize> {
    let scale = check_sorted(exponents, a, true)?;
    let target = BigUint::from(1u8) << (scale - a);
    let mut sum = BigUint::zero();
    for (i, &e) in exponents.iter().enumerate() {
        sum += BigUint::from(1u8) << (scale - e);
        if sum == target {
            return Ok(i + 1);
        }
        if sum > target {
            break;
        }
    }
    Err(Error::PreconditionViolated(format!(
        "total mass is below 2^-{a}"
    )))
}

/// 0-based start `s` of a suffix `exponents[s..]` with mass exactly `2^-a`.
///
/// Requires the total to be an integer multiple of `2^-a` and the smallest
/// weight to be at most `2^-a`. Unlike the prefix split, weights larger than
/// `2^-a` are allowed.
pub fn dyadic_suffix_split(exponents: &[u32], a: u32) -> Result<usize> {
    let scale = check_sorted(exponents, a, false)?.max(a);
    let unit = BigUint::from(1u8) << (scale - a);
    let total: BigUint = exponents
        .iter()
        .map(|&e| BigUint::from(1u8) << (scale - e))
        .sum();
    if total.is_zero() || !(&total % &unit).is_zero() {
        return Err(Error::PreconditionViolated(format!(
            "total mass is not a positive multiple of 2^-{a}"
        )));
    }
    let mut sum = BigUint::zero();
    for (i, &e) in exponents.iter().enumerate().rev() {
        sum += BigUint::from(1u8) << (scale - e);
        if sum == unit {
            return Ok(i);
        }
        if sum > unit {
            break;
        }
    }
    // Unreachable for valid input: repeated prefix splits tile the list.
    Err(Error::PreconditionViolated(
        "no suffix of the required mass".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    #[test]
    fn prefix_examples() {
        assert_eq!(dyadic_prefix_split(&[1, 2, 3, 3], 1).unwrap(), 1);
        assert_eq!(dyadic_prefix_split(&[2, 2, 2, 3, 3], 1).unwrap(), 2);
        assert_eq!(dyadic_prefix_split(&[2, 3, 3], 2).unwrap(), 1);
    }

    #[test]
    fn suffix_examples() {
        // 1-based l = start + 1
        assert_eq!(dyadic_suffix_split(&[2, 2, 2, 3, 3], 1).unwrap() + 1, 3);
        assert_eq!(dyadic_suffix_split(&[1, 1], 1).unwrap() + 1, 2);
        // 1/8 + 1/16 + 1/16 = 1/4, checked by hand
        assert_eq!(dyadic_suffix_split(&[1, 2, 3, 4, 4], 2).unwrap() + 1, 3);
    }

    #[test]
    fn precondition_errors() {
        // total 1/4 < 1/2
        assert!(matches!(
            dyadic_prefix_split(&[3, 3], 1),
            Err(Error::PreconditionViolated(_))
        ));
        // a > a_1: target 1/8 below the largest weight 1/2
        assert!(matches!(
            dyadic_prefix_split(&[1, 2], 3),
            Err(Error::PreconditionViolated(_))
        ));
        // 3/8 is not a multiple of 1/4
        assert!(matches!(
            dyadic_suffix_split(&[2, 3], 2),
            Err(Error::PreconditionViolated(_))
        ));
        // 1/2 + 1/2 has no suffix of mass 1/4
        assert!(dyadic_suffix_split(&[1, 1], 2).is_err());
        assert!(dyadic_prefix_split(&[2, 1], 1).is_err());
    }

    fn sorted_dyadic_list() -> impl Strategy<Value = (Vec<u32>, u32)> {
        prop::collection::vec(1u32..12, 1..40).prop_flat_map(|mut v| {
            v.sort_unstable();
            let a1 = v[0];
            (Just(v), 0..=a1)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn prefix_sums_exactly((exps, a) in sorted_dyadic_list()) {
            let w = |e: u32| BigRational::new(1.into(), num_bigint::BigInt::from(1) << e);
            let total: BigRational = exps.iter().map(|&e| w(e)).sum();
            let target = w(a);
            match dyadic_prefix_split(&exps, a) {
                Ok(m) => {
                    let s: BigRational = exps[..m].iter().map(|&e| w(e)).sum();
                    prop_assert_eq!(s, target);
                    // shortest such prefix
                    let shorter: BigRational = exps[..m - 1].iter().map(|&e| w(e)).sum();
                    prop_assert!(shorter < w(a));
                }
                Err(_) => prop_assert!(total < target),
            }
        }
    }
}
