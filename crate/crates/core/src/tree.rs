//! Decision trees over `X_n`, their exact cost, validation, and simulation.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::family::QuestionFamily;
use crate::question::Question;
use crate::set::Element;

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Leaf(Element),
    Ask {
        question: Question,
        yes: NodeId,
        no: NodeId,
    },
}

/// A binary decision tree stored in an arena. Traversals are iterative so
/// long equality chains do not exhaust the stack.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionTree {
    n: usize,
    nodes: Vec<Node>,
    root: NodeId,
}

/// Incremental construction of a [`DecisionTree`]; nodes may be reserved
/// before their children exist.
#[derive(Debug, Default)]
pub struct TreeBuilder {
    nodes: Vec<Option<Node>>,
}

impl TreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reserve(&mut self) -> NodeId {
        self.nodes.push(None);
        self.nodes.len() - 1
    }

    pub fn set(&mut self, id: NodeId, node: Node) {
        self.nodes[id] = Some(node);
    }

    pub fn leaf(&mut self, e: Element) -> NodeId {
        let id = self.reserve();
        self.set(id, Node::Leaf(e));
        id
    }

    pub fn ask(&mut self, question: Question, yes: NodeId, no: NodeId) -> NodeId {
        let id = self.reserve();
        self.set(id, Node::Ask { question, yes, no });
        id
    }

    pub fn finish(self, n: usize, root: NodeId) -> DecisionTree {
        let nodes = self
            .nodes
            .into_iter()
            .enumerate()
            .map(|(i, node)| node.unwrap_or_else(|| panic!("node {i} reserved but never set")))
            .collect();
        DecisionTree { n, nodes, root }
    }
}

/// One question asked during a simulated run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub question: Question,
    pub answer: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub secret: Element,
    pub steps: Vec<Step>,
}

impl Transcript {
    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn answers(&self) -> Vec<bool> {
        self.steps.iter().map(|s| s.answer).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A support element has no leaf.
    MissingLeaf(Element),
    /// A leaf is labeled by an element outside the support.
    LeafOutsideSupport(Element),
    DuplicateLeaf(Element),
    /// The leaf's element does not satisfy the answers on its root path.
    PathInconsistent { element: Element, depth: usize },
    /// A question is not in the allowed family.
    OutOfFamily { node: NodeId, question: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn out_of_family(&self) -> usize {
        self.violations
            .iter()
            .filter(|v| matches!(v, Violation::OutOfFamily { .. }))
            .count()
    }
}

impl DecisionTree {
    /// The tree with no questions: a single leaf.
    pub fn single_leaf(n: usize, e: Element) -> Self {
        DecisionTree {
            n,
            nodes: vec![Node::Leaf(e)],
            root: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn question_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Ask { .. }))
            .count()
    }

    /// Visits every reachable node with its depth, in preorder.
    pub fn walk(&self) -> impl Iterator<Item = (NodeId, usize)> + '_ {
        let mut stack = vec![(self.root, 0usize)];
        std::iter::from_fn(move || {
            let (id, d) = stack.pop()?;
            if let Node::Ask { yes, no, .. } = &self.nodes[id] {
                stack.push((*no, d + 1));
                stack.push((*yes, d + 1));
            }
            Some((id, d))
        })
    }

    /// Leaves as `(element, depth)` in preorder.
    pub fn leaves(&self) -> Vec<(Element, usize)> {
        self.walk()
            .filter_map(|(id, d)| match &self.nodes[id] {
                Node::Leaf(e) => Some((*e, d)),
                Node::Ask { .. } => None,
            })
            .collect()
    }

    /// Depth of every element's leaf, `None` if it has none.
    pub fn depths(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.n];
        for (e, d) in self.leaves() {
            if e.0 < self.n {
                out[e.0] = Some(d);
            }
        }
        out
    }

    pub fn max_depth(&self) -> usize {
        self.walk().map(|(_, d)| d).max().unwrap_or(0)
    }

    /// Exact expected number of questions under `dist`.
    pub fn cost(&self, dist: &Distribution) -> Result<BigRational> {
        if dist.n() != self.n {
            return Err(Error::TreeInvalid(format!(
                "tree is over X_{}, distribution over X_{}",
                self.n,
                dist.n()
            )));
        }
        let depths = self.depths();
        let mut acc = BigUint::zero();
        for i in dist.support() {
            let d = depths[i].ok_or_else(|| {
                Error::TreeInvalid(format!("support element {} has no leaf", Element(i)))
            })?;
            acc += &dist.numerators()[i] * BigUint::from(d);
        }
        Ok(BigRational::new(
            BigInt::from(acc),
            BigInt::from(dist.denominator().clone()),
        ))
    }

    /// Checks leaf/support agreement, distinct leaves, path consistency and,
    /// if a family is given, that every question belongs to it.
    pub fn validate(&self, dist: &Distribution, family: Option<&dyn QuestionFamily>) -> ValidationReport {
        let mut violations = Vec::new();
        let mut seen = vec![false; self.n];
        let support = dist.support_set();

        // Path consistency: walk with the answers taken so far.
        let mut stack: Vec<(NodeId, Vec<(NodeId, bool)>)> = vec![(self.root, Vec::new())];
        while let Some((id, path)) = stack.pop() {
            match &self.nodes[id] {
                Node::Leaf(e) => {
                    if e.0 >= self.n {
                        violations.push(Violation::LeafOutsideSupport(*e));
                        continue;
                    }
                    if seen[e.0] {
                        violations.push(Violation::DuplicateLeaf(*e));
                    }
                    seen[e.0] = true;
                    if !support.contains(e.0) {
                        violations.push(Violation::LeafOutsideSupport(*e));
                    }
                    let consistent = path.iter().all(|&(anc, ans)| match &self.nodes[anc] {
                        Node::Ask { question, .. } => question.contains(e.0) == ans,
                        Node::Leaf(_) => unreachable!(),
                    });
                    if !consistent {
                        violations.push(Violation::PathInconsistent {
                            element: *e,
                            depth: path.len(),
                        });
                    }
                }
                Node::Ask { question, yes, no } => {
                    if let Some(f) = family {
                        if !f.admits(question) {
                            violations.push(Violation::OutOfFamily {
                                node: id,
                                question: question.render(),
                            });
                        }
                    }
                    let mut py = path.clone();
                    py.push((id, true));
                    let mut pn = path;
                    pn.push((id, false));
                    stack.push((*no, pn));
                    stack.push((*yes, py));
                }
            }
        }
        for i in support.iter() {
            if !seen[i] {
                violations.push(Violation::MissingLeaf(Element(i)));
            }
        }
        ValidationReport { violations }
    }

    /// Plays the tree against `secret`, answering by set membership.
    pub fn simulate(&self, secret: Element) -> Result<Transcript> {
        let mut steps = Vec::new();
        let mut id = self.root;
        loop {
            match &self.nodes[id] {
                Node::Leaf(e) if *e == secret => return Ok(Transcript { secret, steps }),
                Node::Leaf(_) => return Err(Error::SecretNotInTree(secret.0)),
                Node::Ask { question, yes, no } => {
                    let answer = question.contains(secret.0);
                    steps.push(Step {
                        question: question.clone(),
                        answer,
                    });
                    id = if answer { *yes } else { *no };
                }
            }
        }
    }
}
