#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use quiztree_core::tree::Node;
use quiztree_core::{DecisionTree, Distribution, Element, NodeId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random integer masses in `0..=max`, at least two of them positive.
pub fn random_masses(rng: &mut ChaCha8Rng, n: usize, max: u64) -> Distribution {
    loop {
        let ms: Vec<u64> = (0..n).map(|_| rng.random_range(0..=max)).collect();
        if ms.iter().any(|&m| m > 0) {
            return Distribution::from_u64_masses(&ms).unwrap();
        }
    }
}

/// Entropy in bits, computed from the weights directly.
pub fn entropy(d: &Distribution) -> f64 {
    d.weights_f64()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// `sum_x pi(x) depth(x)`, by walking the tree from the root for each leaf.
pub fn cost_by_walk(t: &DecisionTree, d: &Distribution) -> BigRational {
    let mut total = BigRational::from_integer(BigInt::from(0));
    let mut stack: Vec<(NodeId, u64)> = vec![(t.root(), 0)];
    while let Some((id, depth)) = stack.pop() {
        match t.node(id) {
            Node::Leaf(Element(i)) => total += d.weight(*i) * BigInt::from(depth),
            Node::Ask { yes, no, .. } => {
                stack.push((*yes, depth + 1));
                stack.push((*no, depth + 1));
            }
        }
    }
    total
}

/// Every internal node with the support elements that reach it.
pub fn reach_sets(t: &DecisionTree, d: &Distribution) -> Vec<(NodeId, Vec<usize>)> {
    let mut out = Vec::new();
    let mut stack = vec![(t.root(), d.support())];
    while let Some((id, cand)) = stack.pop() {
        if let Node::Ask { question, yes, no } = t.node(id) {
            let (y, n): (Vec<usize>, Vec<usize>) = cand.iter().partition(|&&x| question.contains(x));
            out.push((id, cand));
            stack.push((*yes, y));
            stack.push((*no, n));
        }
    }
    out
}

pub fn mass_sum(d: &Distribution, xs: &[usize]) -> BigUint {
    xs.iter().map(|&x| d.numerators()[x].clone()).sum()
}
