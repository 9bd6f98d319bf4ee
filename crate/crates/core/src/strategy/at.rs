//! Algorithm A_t: equality questions for heavy elements, balanced
//! comparisons otherwise.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::dist::{binary_entropy, Distribution};
use crate::error::{Error, Result};
use crate::family::ComparisonEquality;
use crate::question::Question;
use crate::set::Element;
use crate::tree::{DecisionTree, Node, NodeId, TreeBuilder};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtParams {
    t: BigRational,
}

impl AtParams {
    pub fn new(t: BigRational) -> Result<Self> {
        if t <= BigRational::zero() || t > BigRational::from_integer(1.into()) {
            return Err(Error::PreconditionViolated(format!("threshold {t} outside (0, 1]")));
        }
        Ok(AtParams { t })
    }

    pub fn t(&self) -> &BigRational {
        &self.t
    }
}

impl Default for AtParams {
    fn default() -> Self {
        AtParams {
            t: BigRational::new(3.into(), 10.into()),
        }
    }
}

pub fn comparison_equality_family(n: usize) -> ComparisonEquality {
    ComparisonEquality::new(n)
}

/// What A_t does on a domain of positive masses listed in ground order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum AtChoice {
    /// Ask whether x is the element at this position.
    Equal(usize),
    /// Ask whether x comes before the element at this position (>= 1).
    Before(usize),
}

/// Position of the most balanced nontrivial comparison: minimizes
/// `|2 * prefix - total|` over prefix lengths `1..len`, smallest on ties.
pub(crate) fn balanced_position(masses: &[BigUint]) -> usize {
    let total: BigUint = masses.iter().sum();
    let mut prefix = BigUint::zero();
    let mut best: Option<(BigUint, usize)> = None;
    for (j, m) in masses.iter().enumerate().take(masses.len() - 1) {
        prefix += m;
        let twice = &prefix << 1u32;
        let gap = if twice >= total { &twice - &total } else { &total - &twice };
        if best.as_ref().is_none_or(|(g, _)| gap < *g) {
            best = Some((gap, j + 1));
        }
    }
    best.expect("at least two masses").1
}

pub(crate) fn at_choice(masses: &[BigUint], t: &BigRational) -> Option<AtChoice> {
    if masses.len() < 2 {
        return None;
    }
    let total: BigUint = masses.iter().sum();
    let (imax, max) = masses
        .iter()
        .enumerate()
        .fold((0, &masses[0]), |acc, (i, m)| if m > acc.1 { (i, m) } else { acc });
    // max / total >= t, exactly. On two elements the equality question and
    // the comparison split the domain identically; the comparison is used.
    let lhs = BigInt::from(max.clone()) * t.denom();
    let rhs = BigInt::from(total) * t.numer();
    if lhs >= rhs && masses.len() > 2 {
        Some(AtChoice::Equal(imax))
    } else {
        Some(AtChoice::Before(balanced_position(masses)))
    }
}

/// A question and whether its Yes/No sides are swapped relative to the
/// set the engine asked about.
pub(crate) type Phrased = (Question, bool);

/// Runs A_t over labelled masses (positive, in ground order) and emits a
/// subtree into the reserved slot `root`. `fill` is called once per label
/// with the slot its leaf goes into and may build further structure there.
pub(crate) fn build_at_subtree<L: Copy>(
    b: &mut TreeBuilder,
    root: NodeId,
    domain: Vec<(L, BigUint)>,
    t: &BigRational,
    eq: &dyn Fn(L) -> Phrased,
    before: &dyn Fn(L) -> Phrased,
    fill: &mut dyn FnMut(&mut TreeBuilder, NodeId, L),
) {
    let mut stack = vec![(root, domain)];
    while let Some((id, dom)) = stack.pop() {
        let masses: Vec<BigUint> = dom.iter().map(|(_, m)| m.clone()).collect();
        match at_choice(&masses, t) {
            None => fill(b, id, dom[0].0),
            Some(AtChoice::Equal(i)) => {
                let (q, flip) = eq(dom[i].0);
                let hit = b.reserve();
                let miss = b.reserve();
                let rest: Vec<_> = dom
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, e)| e.clone())
                    .collect();
                stack.push((hit, vec![dom[i].clone()]));
                stack.push((miss, rest));
                set_ask(b, id, q, flip, hit, miss);
            }
            Some(AtChoice::Before(j)) => {
                let (q, flip) = before(dom[j].0);
                let lo = b.reserve();
                let hi = b.reserve();
                let mut left = dom;
                let right = left.split_off(j);
                stack.push((lo, left));
                stack.push((hi, right));
                set_ask(b, id, q, flip, lo, hi);
            }
        }
    }
}

fn set_ask(b: &mut TreeBuilder, id: NodeId, question: Question, flip: bool, yes: NodeId, no: NodeId) {
    let (yes, no) = if flip { (no, yes) } else { (yes, no) };
    b.set(id, Node::Ask { question, yes, no });
}

fn support_domain(dist: &Distribution) -> Vec<(usize, BigUint)> {
    dist.support()
        .into_iter()
        .map(|i| (i, dist.numerators()[i].clone()))
        .collect()
}

/// The element `x_mid` whose comparison question is most balanced, as a
/// 0-based element (never the first element of the support).
pub fn middle_index(dist: &Distribution) -> Result<Element> {
    let dom: Vec<(usize, BigUint)> = (0..dist.n())
        .map(|i| (i, dist.numerators()[i].clone()))
        .collect();
    if dom.len() < 2 {
        return Err(Error::PreconditionViolated("need n >= 2".into()));
    }
    let masses: Vec<BigUint> = dom.iter().map(|(_, m)| m.clone()).collect();
    Ok(Element(dom[balanced_position(&masses)].0))
}

pub fn build_at_tree(dist: &Distribution, params: &AtParams) -> DecisionTree {
    let n = dist.n();
    let mut b = TreeBuilder::new();
    let root = b.reserve();
    build_at_subtree(
        &mut b,
        root,
        support_domain(dist),
        &params.t,
        &|i| (Question::equality(n, i), false),
        &|i| (Question::comparison(n, i), false),
        &mut |b, id, i| b.set(id, Node::Leaf(Element(i))),
    );
    b.finish(n, root)
}

/// `R_t(pi) = A_t(pi) - H(pi) - 1`.
pub fn redundancy_diagnostic(dist: &Distribution, params: &AtParams) -> f64 {
    let cost = build_at_tree(dist, params)
        .cost(dist)
        .expect("A_t covers the support");
    cost.to_f64().expect("finite") - dist.entropy() - 1.0
}

/// `R_t` through the three-case recursion on conditional distributions,
/// without building a tree.
pub fn recursive_redundancy(dist: &Distribution, params: &AtParams) -> f64 {
    fn go(masses: &[BigUint], t: &BigRational) -> f64 {
        let ratio = |part: &BigUint, total: &BigUint| {
            BigRational::new(BigInt::from(part.clone()), BigInt::from(total.clone()))
                .to_f64()
                .expect("finite")
        };
        let total: BigUint = masses.iter().sum();
        match at_choice(masses, t) {
            None => -1.0,
            Some(AtChoice::Equal(i)) => {
                let p = ratio(&masses[i], &total);
                let rest: Vec<BigUint> = masses
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, m)| m.clone())
                    .collect();
                1.0 - binary_entropy(p) - p + (1.0 - p) * go(&rest, t)
            }
            Some(AtChoice::Before(j)) => {
                let lo: BigUint = masses[..j].iter().sum();
                let p = ratio(&lo, &total);
                1.0 - binary_entropy(p) + p * go(&masses[..j], t) + (1.0 - p) * go(&masses[j..], t)
            }
        }
    }
    let masses: Vec<BigUint> = support_domain(dist).into_iter().map(|(_, m)| m).collect();
    go(&masses, &params.t)
}
