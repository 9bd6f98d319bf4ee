//! Optimal strategies using only subsets or supersets of the pivot
//! `S = {x_1, ..., x_{floor(n/2)}}`.

use num_bigint::BigUint;
use num_traits::One;

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::family::QuestionFamily;
use crate::huffman::huffman;
use crate::question::{ConeIndex, Question, QuestionKind};
use crate::set::{Element, ElementSet};
use crate::split::dyadic_prefix_split;
use crate::stepper::{StepState, Stepper};
use crate::tree::{DecisionTree, Node, TreeBuilder};

#[derive(Debug, Clone)]
pub struct ConeFamily {
    n: usize,
}

impl ConeFamily {
    pub fn new(n: usize) -> Self {
        ConeFamily { n }
    }

    pub fn pivot(&self) -> usize {
        ConeIndex::pivot(self.n)
    }

    pub fn contains_set(&self, set: &ElementSet) -> bool {
        ConeIndex::of_set(set).is_some()
    }
}

impl QuestionFamily for ConeFamily {
    fn ground_size(&self) -> usize {
        self.n
    }

    /// Members of the cone itself: `2^floor(n/2) + 2^ceil(n/2) - 1`.
    fn cardinality(&self) -> BigUint {
        let p = self.pivot();
        (BigUint::one() << p) + (BigUint::one() << (self.n - p)) - 1u8
    }

    fn admits(&self, q: &Question) -> bool {
        if q.n() != self.n {
            return false;
        }
        if let QuestionKind::Cone(_) = q.kind() {
            return true;
        }
        let s = q.resolve();
        self.contains_set(&s) || self.contains_set(&s.complement())
    }

    fn members(&self) -> Option<Vec<ElementSet>> {
        if self.n > 24 {
            return None;
        }
        let p = self.pivot();
        let n = self.n;
        let mut out = Vec::new();
        for mask in 0u64..(1 << p) {
            out.push(ElementSet::from_mask(n, mask));
        }
        let base = (1u64 << p) - 1;
        for extra in 1u64..(1 << (n - p)) {
            out.push(ElementSet::from_mask(n, base | (extra << p)));
        }
        Some(out)
    }

    fn name(&self) -> &'static str {
        "cone"
    }
}

/// Shared planning state: the Huffman exponents and the support listed
/// heaviest first. This is the non-decreasing order (ties by index) read
/// backwards, so half-mass prefixes of it are suffixes of that order.
#[derive(Debug, Clone)]
struct ConePlan {
    n: usize,
    exps: Vec<Option<u32>>,
    order: Vec<usize>,
}

/// One step: either the last candidate, or a cone question and the
/// candidates answering Yes.
enum ConeStep {
    Leaf(usize),
    Ask(Question, Vec<bool>),
}

impl ConePlan {
    fn new(dist: &Distribution) -> Self {
        let exps = huffman(dist).dyadic.exponents().to_vec();
        let mut order: Vec<usize> = (0..dist.n()).filter(|&i| exps[i].is_some()).collect();
        order.sort_by_key(|&i| (exps[i], std::cmp::Reverse(i)));
        ConePlan {
            n: dist.n(),
            exps,
            order,
        }
    }

    fn initial(&self) -> Vec<bool> {
        let mut c = vec![false; self.n];
        for &i in &self.order {
            c[i] = true;
        }
        c
    }

    /// `cand` holds the candidates at `depth`; under the conditional
    /// measure each has mass `2^-(e_i - depth)`.
    fn step(&self, cand: &[bool], depth: u32) -> ConeStep {
        let live: Vec<usize> = self.order.iter().copied().filter(|&i| cand[i]).collect();
        if live.len() == 1 {
            return ConeStep::Leaf(live[0]);
        }
        let pivot = ConeIndex::pivot(self.n);
        let e = |i: usize| self.exps[i].expect("support") - depth;
        let emax = live.iter().map(|&i| e(i)).max().expect("nonempty");
        let unit = |i: usize| BigUint::one() << (emax - e(i));
        let half = BigUint::one() << (emax - 1);
        let in_s: BigUint = live.iter().filter(|&&i| i < pivot).map(|&i| unit(i)).sum();

        let mut set = vec![false; self.n];
        let superset;
        if in_s == half {
            set[..pivot].fill(true);
            superset = false;
        } else {
            let heavy_side = in_s > half;
            let side: Vec<usize> = live
                .iter()
                .copied()
                .filter(|&i| (i < pivot) == heavy_side)
                .collect();
            let side_exps: Vec<u32> = side.iter().map(|&i| e(i)).collect();
            let m = dyadic_prefix_split(&side_exps, 1).expect("a side above 1/2 has a half-mass prefix");
            if heavy_side {
                for &i in &side[..m] {
                    set[i] = true;
                }
                superset = false;
            } else {
                set.fill(true);
                for &i in &side[..m] {
                    set[i] = false;
                }
                superset = true;
            }
        }
        let bits: Vec<bool> = if superset {
            set[pivot..].to_vec()
        } else {
            set[..pivot].to_vec()
        };
        let q = Question::new(
            self.n,
            QuestionKind::Cone(ConeIndex {
                n: self.n,
                superset,
                bits,
            }),
        );
        let yes: Vec<bool> = (0..self.n).map(|i| cand[i] && set[i]).collect();
        ConeStep::Ask(q, yes)
    }
}

/// An optimal tree whose questions all lie in the cone of the pivot.
pub fn cone_optimal_tree(dist: &Distribution) -> DecisionTree {
    let plan = ConePlan::new(dist);
    let mut b = TreeBuilder::new();
    let root = b.reserve();
    let mut stack = vec![(root, plan.initial(), 0u32)];
    while let Some((id, cand, depth)) = stack.pop() {
        match plan.step(&cand, depth) {
            ConeStep::Leaf(i) => b.set(id, Node::Leaf(Element(i))),
            ConeStep::Ask(question, yes_cand) => {
                let no_cand: Vec<bool> = cand.iter().zip(&yes_cand).map(|(&c, &y)| c && !y).collect();
                let yes = b.reserve();
                let no = b.reserve();
                stack.push((yes, yes_cand, depth + 1));
                stack.push((no, no_cand, depth + 1));
                b.set(id, Node::Ask { question, yes, no });
            }
        }
    }
    b.finish(dist.n(), root)
}

/// Plays the cone strategy online, computing each question on demand.
#[derive(Debug, Clone)]
pub struct ConeOnline {
    plan: ConePlan,
    cand: Vec<bool>,
    depth: u32,
    pending: Option<(Question, Vec<bool>)>,
    done: Option<Element>,
}

pub fn cone_online(dist: &Distribution) -> ConeOnline {
    let plan = ConePlan::new(dist);
    let cand = plan.initial();
    let mut s = ConeOnline {
        plan,
        cand,
        depth: 0,
        pending: None,
        done: None,
    };
    s.advance();
    s
}

impl ConeOnline {
    fn advance(&mut self) {
        match self.plan.step(&self.cand, self.depth) {
            ConeStep::Leaf(i) => {
                self.done = Some(Element(i));
                self.pending = None;
            }
            ConeStep::Ask(q, yes) => self.pending = Some((q, yes)),
        }
    }
}

impl Stepper for ConeOnline {
    fn state(&self) -> StepState {
        match (&self.done, &self.pending) {
            (Some(e), _) => StepState::Done(*e),
            (None, Some((q, _))) => StepState::Ask(q.clone()),
            (None, None) => unreachable!("a step is always planned"),
        }
    }

    fn answer(&mut self, yes: bool) -> Result<StepState> {
        let Some((_, yes_cand)) = self.pending.take() else {
            return Err(Error::PreconditionViolated("the game is over".into()));
        };
        let next: Vec<bool> = self
            .cand
            .iter()
            .zip(&yes_cand)
            .map(|(&c, &y)| c && (y == yes))
            .collect();
        if !next.iter().any(|&c| c) {
            return Err(Error::InconsistentAnswers);
        }
        self.cand = next;
        self.depth += 1;
        self.advance();
        Ok(self.state())
    }

    fn questions_asked(&self) -> usize {
        self.depth as usize
    }
}

/// Size of the cone, as a closed form.
pub fn cone_family_size(n: usize) -> BigUint {
    ConeFamily::new(n).cardinality()
}
