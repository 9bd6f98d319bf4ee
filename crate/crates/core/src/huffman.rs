//! Huffman trees: the optimal unrestricted strategy.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::ops::Add;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use crate::dist::{Distribution, DyadicMeasure};
use crate::error::{Error, Result};
use crate::question::Question;
use crate::set::{Element, ElementSet};
use crate::tree::{DecisionTree, TreeBuilder};

#[derive(Debug, Clone)]
pub struct HuffmanResult {
    pub tree: DecisionTree,
    pub opt_cost: BigRational,
    /// `2^-depth` on the support, zero elsewhere.
    pub dyadic: DyadicMeasure,
}

/// Merge sequence of Huffman's algorithm on `masses` (all positive).
/// Ties between equal masses go to the smaller node id; leaves are ids
/// `0..m`, merged nodes get `m, m+1, ...` in creation order.
fn merges<T: Ord + Clone + Add<Output = T>>(masses: &[T]) -> Vec<(usize, usize)> {
    let mut heap: BinaryHeap<Reverse<(T, usize)>> = masses
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, w)| Reverse((w, i)))
        .collect();
    let mut next = masses.len();
    let mut out = Vec::with_capacity(masses.len().saturating_sub(1));
    while heap.len() > 1 {
        let Reverse((wa, a)) = heap.pop().expect("len > 1");
        let Reverse((wb, b)) = heap.pop().expect("len > 1");
        out.push((a, b));
        heap.push(Reverse((wa + wb, next)));
        next += 1;
    }
    out
}

/// Leaf depths of a Huffman tree over positive `masses`.
pub fn huffman_depths<T: Ord + Clone + Add<Output = T>>(masses: &[T]) -> Vec<u32> {
    let m = masses.len();
    let ms = merges(masses);
    let total = m + ms.len();
    let mut parent = vec![usize::MAX; total];
    for (k, &(a, b)) in ms.iter().enumerate() {
        parent[a] = m + k;
        parent[b] = m + k;
    }
    // Parents are created after children, so a reverse sweep fills depths.
    let mut depth = vec![0u32; total];
    for id in (0..total).rev() {
        if parent[id] != usize::MAX {
            depth[id] = depth[parent[id]] + 1;
        }
    }
    depth.truncate(m);
    depth
}

/// Optimal tree for `dist`. Zero-mass elements get no leaf.
pub fn huffman(dist: &Distribution) -> HuffmanResult {
    let n = dist.n();
    let support = dist.support();
    let masses: Vec<BigUint> = support.iter().map(|&i| dist.numerators()[i].clone()).collect();
    let m = support.len();
    let ms = merges(&masses);

    let mut b = TreeBuilder::new();
    let mut ids = Vec::with_capacity(m + ms.len());
    let mut sets: Vec<Option<ElementSet>> = Vec::with_capacity(m + ms.len());
    for &i in &support {
        ids.push(b.leaf(Element(i)));
        sets.push(Some(ElementSet::from_indices(n, [i])));
    }
    for &(a, c) in &ms {
        let yes_set = sets[a].take().expect("each node merged once");
        let no_set = sets[c].take().expect("each node merged once");
        let mut union = yes_set.clone();
        for x in no_set.iter() {
            union.insert(x);
        }
        ids.push(b.ask(Question::explicit(yes_set), ids[a], ids[c]));
        sets.push(Some(union));
    }
    let root = *ids.last().expect("support is nonempty");
    let tree = b.finish(n, root);

    let depths = huffman_depths(&masses);
    let mut exps = vec![None; n];
    let mut acc = BigUint::zero();
    for (k, &i) in support.iter().enumerate() {
        exps[i] = Some(depths[k]);
        acc += &masses[k] * BigUint::from(depths[k]);
    }
    let opt_cost = BigRational::new(BigInt::from(acc), BigInt::from(dist.denominator().clone()));
    HuffmanResult {
        tree,
        opt_cost,
        dyadic: DyadicMeasure::new(exps),
    }
}

/// `Opt(pi)` by exhaustive search over complete prefix codes; an oracle for
/// small supports (at most 7 elements).
pub fn brute_force_opt(dist: &Distribution) -> Result<BigRational> {
    const LIMIT: usize = 7;
    let support = dist.support();
    let m = support.len();
    if m > LIMIT {
        return Err(Error::TooLarge {
            what: "support for brute-force Opt",
            limit: LIMIT,
        });
    }
    if m == 1 {
        return Ok(BigRational::zero());
    }
    let max_e = (m - 1) as u32;
    let full = 1u64 << max_e;
    let mut best: Option<BigRational> = None;
    let mut exps = vec![1u32; m];
    loop {
        let kraft: u64 = exps.iter().map(|&e| 1u64 << (max_e - e)).sum();
        if kraft == full {
            let cost: BigRational = support
                .iter()
                .zip(&exps)
                .map(|(&i, &e)| dist.weight(i) * BigRational::from_integer(e.into()))
                .sum();
            if best.as_ref().is_none_or(|b| cost < *b) {
                best = Some(cost);
            }
        }
        // odometer over {1..max_e}^m
        let mut k = 0;
        loop {
            if k == m {
                return Ok(best.expect("the balanced code is complete"));
            }
            if exps[k] < max_e {
                exps[k] += 1;
                break;
            }
            exps[k] = 1;
            k += 1;
        }
    }
}
