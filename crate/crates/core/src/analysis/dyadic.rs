//! Dyadic distributions on small ground sets: enumeration, half-mass sets
//! (splitters), tails and the hard distribution.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dist::DyadicMeasure;
use crate::error::{Error, Result};
use crate::set::ElementSet;

pub const MAX_ENUMERATION_N: usize = 10;
pub const MAX_SPLITTER_N: usize = 20;

/// Sorted exponent lists (each in `1..=n-1`, at least two, at most `n`) of
/// every dyadic distribution with `n` or fewer atoms.
pub(crate) fn exponent_multisets(n: usize) -> Vec<Vec<u32>> {
    fn dfs(scale: u32, remaining: u64, slots: usize, min_e: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        for e in min_e..=scale {
            let unit = 1u64 << (scale - e);
            if unit > remaining {
                continue;
            }
            let rest = remaining - unit;
            cur.push(e);
            if rest == 0 {
                if cur.len() >= 2 {
                    out.push(cur.clone());
                }
            } else if slots > 1 && rest <= (slots as u64 - 1) * unit {
                dfs(scale, rest, slots - 1, e, cur, out);
            }
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n >= 2 {
        let scale = n as u32 - 1;
        dfs(scale, 1u64 << scale, n, 1, &mut Vec::new(), &mut out);
    }
    out
}

/// Codes are `0` for a zero-mass element and `a` for mass `2^-a`.
pub(crate) fn padded_codes(n: usize, exps: &[u32]) -> Vec<u32> {
    let mut v = vec![0; n - exps.len()];
    v.extend_from_slice(exps);
    v
}

pub(crate) fn codes_to_measure(codes: &[u32]) -> DyadicMeasure {
    DyadicMeasure::new(codes.iter().map(|&c| (c > 0).then_some(c)).collect())
}

/// Lexicographic successor; false (and the slice left as is) at the last one.
pub(crate) fn next_permutation(v: &mut [u32]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("successor exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Streams every non-constant dyadic distribution on `n` points.
#[derive(Debug, Clone)]
pub struct DyadicEnumeration {
    n: usize,
    multisets: std::vec::IntoIter<Vec<u32>>,
    current: Option<Vec<u32>>,
    up_to_permutation: bool,
}

impl Iterator for DyadicEnumeration {
    type Item = DyadicMeasure;

    fn next(&mut self) -> Option<DyadicMeasure> {
        loop {
            if let Some(cur) = &mut self.current {
                let out = codes_to_measure(cur);
                if self.up_to_permutation || !next_permutation(cur) {
                    self.current = None;
                }
                return Some(out);
            }
            let m = self.multisets.next()?;
            self.current = Some(padded_codes(self.n, &m));
        }
    }
}

/// All non-constant dyadic distributions on `n <= 10` points, zero masses
/// allowed. With `up_to_permutation`, one representative per multiset of
/// masses (zeros first, then masses in decreasing order).
pub fn enumerate_dyadic(n: usize, up_to_permutation: bool) -> Result<DyadicEnumeration> {
    if n > MAX_ENUMERATION_N {
        return Err(Error::TooLarge {
            what: "dyadic enumeration",
            limit: MAX_ENUMERATION_N,
        });
    }
    Ok(DyadicEnumeration {
        n,
        multisets: exponent_multisets(n).into_iter(),
        current: None,
        up_to_permutation,
    })
}

/// The sets of mass exactly 1/2 under a dyadic distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitterSet {
    n: usize,
    masks: Vec<u64>,
}

impl SplitterSet {
    pub fn from_masks(n: usize, mut masks: Vec<u64>) -> Self {
        masks.sort_unstable();
        masks.dedup();
        SplitterSet { n, masks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn contains(&self, set: &ElementSet) -> bool {
        set.to_mask().is_some_and(|m| self.masks.binary_search(&m).is_ok())
    }

    pub fn sets(&self) -> Vec<ElementSet> {
        self.masks.iter().map(|&m| ElementSet::from_mask(self.n, m)).collect()
    }
}

/// Subset sums of `masses` indexed by bitmask.
pub(crate) fn subset_sums(masses: &[u64]) -> Vec<u64> {
    let mut sums = vec![0u64; 1 << masses.len()];
    for m in 1..sums.len() {
        sums[m] = sums[m & (m - 1)] + masses[m.trailing_zeros() as usize];
    }
    sums
}

pub fn splitters(mu: &DyadicMeasure) -> Result<SplitterSet> {
    let n = mu.n();
    if n > MAX_SPLITTER_N {
        return Err(Error::TooLarge {
            what: "splitter enumeration",
            limit: MAX_SPLITTER_N,
        });
    }
    if !mu.is_distribution() {
        return Err(Error::InvalidDistribution("dyadic weights must sum to 1".into()));
    }
    if !mu.is_non_constant() {
        return Err(Error::ConstantDistribution);
    }
    // a dyadic distribution on n points has every exponent below n
    let scale = mu.max_exponent().expect("non-constant");
    let masses = mu.masses_u64(scale).expect("exponents fit");
    let half = 1u64 << (scale - 1);
    let masks = if n <= 16 {
        subset_sums(&masses)
            .iter()
            .enumerate()
            .filter(|&(_, &s)| s == half)
            .map(|(m, _)| m as u64)
            .collect()
    } else {
        let lo_bits = n / 2;
        let lo = subset_sums(&masses[..lo_bits]);
        let hi = subset_sums(&masses[lo_bits..]);
        let mut by_sum: HashMap<u64, Vec<u64>> = HashMap::new();
        for (m, &s) in lo.iter().enumerate() {
            if s <= half {
                by_sum.entry(s).or_default().push(m as u64);
            }
        }
        let mut out = Vec::new();
        for (h, &s) in hi.iter().enumerate() {
            if let Some(ls) = half.checked_sub(s).and_then(|rest| by_sum.get(&rest)) {
                out.extend(ls.iter().map(|&l| l | ((h as u64) << lo_bits)));
            }
        }
        out
    };
    Ok(SplitterSet::from_masks(n, masks))
}

/// The tail: the largest `T` whose masses are `2^-(a+1), ..., 2^-(a+|T|-1)`
/// with the last one repeated, for some `a >= 1`, while every other element
/// has mass at least `2^-a`. Empty if there is none or if some mass is zero.
pub fn tail(mu: &DyadicMeasure) -> ElementSet {
    let n = mu.n();
    let empty = ElementSet::empty(n);
    if mu.exponents().iter().any(|e| e.is_none()) {
        return empty;
    }
    let Some(top) = mu.max_exponent() else {
        return empty;
    };
    let at = |level: u32| -> Vec<usize> { (0..n).filter(|&i| mu.exponent(i) == Some(level)).collect() };
    let bottom = at(top);
    if bottom.len() != 2 || top < 2 {
        return empty;
    }
    let mut members = bottom;
    let mut a = top - 1;
    while a >= 2 {
        let level = at(a);
        if level.len() != 1 {
            break;
        }
        members.push(level[0]);
        a -= 1;
    }
    ElementSet::from_indices(n, members)
}

/// The distribution with `2t - 1` atoms of mass `2^-a` followed by a halving
/// tail, on `n = 2^a / (2 eps)` points with `t = eps n`.
pub fn hard_distribution(eps: &BigRational, a: u32) -> Result<DyadicMeasure> {
    let bad = |why: &str| Error::PreconditionViolated(format!("hard distribution: {why}"));
    if !eps.is_positive() || eps > &BigRational::new(1.into(), 2.into()) {
        return Err(bad("need 0 < eps <= 1/2"));
    }
    let inv = eps.recip();
    if !inv.is_integer() {
        return Err(bad("1/eps must be an integer"));
    }
    if a == 0 || a > 40 {
        return Err(bad("need 1 <= a <= 40"));
    }
    let n2 = BigInt::one() << a;
    let n_rat = BigRational::from_integer(n2) * inv / BigInt::from(2);
    if !n_rat.is_integer() {
        return Err(bad("n = 2^a / (2 eps) is not an integer"));
    }
    let n = n_rat
        .to_integer()
        .to_usize()
        .filter(|&n| n <= 1 << 20)
        .ok_or_else(|| bad("n too large"))?;
    if n < 4 {
        return Err(bad("need n >= 4"));
    }
    let t_rat = eps * BigRational::from_integer(BigInt::from(n));
    debug_assert!(t_rat.is_integer() && !t_rat.is_zero());
    let t = t_rat.to_integer().to_usize().expect("t <= n");
    let heavy = 2 * t - 1;
    let rest = n - heavy;
    let mut exps = vec![a; heavy];
    if rest == 1 {
        exps.push(a);
    } else {
        exps.extend((1..rest as u32).map(|j| a + j));
        exps.push(a + rest as u32 - 1);
    }
    let mu = DyadicMeasure::from_exponents(&exps);
    debug_assert!(mu.is_distribution());
    Ok(mu)
}

/// `n choose k` as an exact integer.
pub(crate) fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Per-size densities of a collection of subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MrdReport {
    pub n: usize,
    /// `counts[i]` sets of size `i`, for `i` in `0..=n`.
    pub counts: Vec<usize>,
    /// `densities[i] = counts[i] / C(n, i)`; only sizes `1..n` matter.
    pub densities: Vec<BigRational>,
    pub max: BigRational,
    /// Sizes attaining the maximum, ascending.
    pub argmax: Vec<usize>,
}

/// Maximum relative density over sizes `1..n`.
pub fn mrd(sets: &SplitterSet) -> MrdReport {
    let n = sets.n();
    let mut counts = vec![0usize; n + 1];
    for &m in sets.masks() {
        counts[m.count_ones() as usize] += 1;
    }
    let densities: Vec<BigRational> = (0..=n)
        .map(|i| BigRational::new(BigInt::from(counts[i]), binomial(n, i)))
        .collect();
    let max = (1..n).map(|i| densities[i].clone()).max().unwrap_or_else(BigRational::zero);
    let argmax = (1..n).filter(|&i| densities[i] == max).collect();
    MrdReport {
        n,
        counts,
        densities,
        max,
        argmax,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::parse_rational;

    fn set(n: usize, one_based: &[usize]) -> ElementSet {
        ElementSet::from_indices(n, one_based.iter().map(|i| i - 1))
    }

    fn dm(ws: &[&str]) -> DyadicMeasure {
        crate::Distribution::from_strs(ws).unwrap().as_dyadic().unwrap()
    }

    #[test]
    fn enumeration_counts() {
        // counts from a separate brute force over all exponent vectors
        for (n, all, full) in [(2, 1, 1), (3, 6, 3), (4, 31, 13), (5, 180, 75), (6, 1245, 525)] {
            let v: Vec<_> = enumerate_dyadic(n, false).unwrap().collect();
            assert_eq!(v.len(), all, "n = {n}");
            assert_eq!(v.iter().filter(|m| m.support_size() == n).count(), full);
            assert!(v.iter().all(|m| m.is_distribution() && m.is_non_constant()));
            let mut sorted = v.clone();
            sorted.sort_by(|a, b| a.exponents().cmp(b.exponents()));
            sorted.dedup();
            assert_eq!(sorted.len(), all);
        }
        assert!(enumerate_dyadic(11, true).is_err());
    }

    #[test]
    fn brute_force_agrees_with_enumeration() {
        // every vector in {0, 1..n-1}^n summing to 1 with two or more atoms
        for n in 2..=5usize {
            let mut count = 0;
            let base = n as u32;
            for code in 0..base.pow(n as u32) {
                let mut c = code;
                let mut total = 0u64;
                let mut atoms = 0;
                for _ in 0..n {
                    let e = c % base;
                    c /= base;
                    if e > 0 {
                        atoms += 1;
                        total += 1 << (n as u32 - 1 - e);
                    }
                }
                if atoms >= 2 && total == 1 << (n - 1) {
                    count += 1;
                }
            }
            assert_eq!(count, enumerate_dyadic(n, false).unwrap().count());
        }
    }

    #[test]
    fn splitter_examples() {
        let s = splitters(&dm(&["1/2", "1/4", "1/4"])).unwrap();
        let mut got = s.sets();
        got.sort_by_key(|x| x.to_mask());
        assert_eq!(got, vec![set(3, &[1]), set(3, &[2, 3])]);

        let s = splitters(&dm(&["1/2", "1/2", "0"])).unwrap();
        assert_eq!(s.len(), 4);
        for x in [set(3, &[1]), set(3, &[2]), set(3, &[1, 3]), set(3, &[2, 3])] {
            assert!(s.contains(&x));
        }

        let hard = hard_distribution(&parse_rational("1/5").unwrap(), 2).unwrap();
        let s = splitters(&hard).unwrap();
        assert_eq!(s.len(), 6);
        let sizes: Vec<u32> = s.masks().iter().map(|m| m.count_ones()).collect();
        assert_eq!(sizes.iter().filter(|&&k| k == 2).count(), 3);
        assert_eq!(sizes.iter().filter(|&&k| k == 8).count(), 3);

        assert!(matches!(
            splitters(&DyadicMeasure::new(vec![None, Some(0)])),
            Err(Error::ConstantDistribution)
        ));
    }

    #[test]
    fn meet_in_the_middle_agrees() {
        // 17 points: a chain 1/2, 1/4, ..., 2^-16, 2^-16
        let mut exps: Vec<u32> = (1..=16).collect();
        exps.push(16);
        let mu = DyadicMeasure::from_exponents(&exps);
        let s = splitters(&mu).unwrap();
        let direct: Vec<u64> = subset_sums(&mu.masses_u64(16).unwrap())
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v == 1 << 15)
            .map(|(m, _)| m as u64)
            .collect();
        assert_eq!(s.masks(), &direct[..]);
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn hard_distribution_examples() {
        let hard = hard_distribution(&parse_rational("1/5").unwrap(), 2).unwrap();
        let want = ["1/4", "1/4", "1/4", "1/8", "1/16", "1/32", "1/64", "1/128", "1/256", "1/256"];
        for (i, w) in want.iter().enumerate() {
            assert_eq!(hard.weight(i), parse_rational(w).unwrap());
        }
        let small = hard_distribution(&parse_rational("1/2").unwrap(), 2).unwrap();
        assert_eq!(small, DyadicMeasure::from_exponents(&[2, 2, 2, 2]));
        assert!(hard_distribution(&parse_rational("2/5").unwrap(), 2).is_err());
        assert!(hard_distribution(&parse_rational("1/2").unwrap(), 1).is_err());
    }

    #[test]
    fn tail_examples() {
        let hard = hard_distribution(&parse_rational("1/5").unwrap(), 2).unwrap();
        assert_eq!(tail(&hard), set(10, &[4, 5, 6, 7, 8, 9, 10]));
        assert!(tail(&DyadicMeasure::from_exponents(&[2, 2, 2, 2])).is_empty());
        assert_eq!(tail(&DyadicMeasure::from_exponents(&[1, 2, 3, 3])), set(4, &[2, 3, 4]));
        assert_eq!(tail(&DyadicMeasure::from_exponents(&[1, 2, 2])), set(3, &[2, 3]));
        assert!(tail(&DyadicMeasure::from_exponents(&[1, 1])).is_empty());
        assert!(tail(&DyadicMeasure::new(vec![Some(1), None, Some(2), Some(2)])).is_empty());
    }

    #[test]
    fn mrd_examples() {
        let hard = hard_distribution(&parse_rational("1/5").unwrap(), 2).unwrap();
        let r = mrd(&splitters(&hard).unwrap());
        assert_eq!(r.max, parse_rational("1/15").unwrap());
        assert_eq!(r.argmax, vec![2, 8]);
        let r = mrd(&splitters(&dm(&["1/2", "1/4", "1/4"])).unwrap());
        assert_eq!(r.max, parse_rational("1/3").unwrap());
        let r = mrd(&splitters(&dm(&["1/2", "1/2"])).unwrap());
        assert_eq!(r.max, BigRational::one());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 2), BigInt::from(45));
        assert_eq!(binomial(10, 8), BigInt::from(45));
        assert_eq!(binomial(3, 4), BigInt::zero());
    }
}
