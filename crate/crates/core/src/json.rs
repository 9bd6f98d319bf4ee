//! External JSON formats. Elements are 1-based everywhere here.
//!
//! Distributions: `{"n": 3, "weights": ["1/2", "1/4", "1/4"]}` or
//! `{"dyadic_exponents": [1, 2, 2]}`. Trees: `{"leaf": i}` or
//! `{"q": question, "yes": tree, "no": tree}`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::dist::{parse_rational, Distribution, DyadicMeasure};
use crate::error::{Error, Result};
use crate::question::{Question, QuestionKind};
use crate::set::{Element, ElementSet};
use crate::tree::{DecisionTree, Node, NodeId, TreeBuilder};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DistributionJson {
    Weights {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        weights: Vec<String>,
    },
    Dyadic { dyadic_exponents: Vec<u32> },
}

impl DistributionJson {
    pub fn from_distribution(dist: &Distribution) -> Self {
        DistributionJson::Weights {
            n: Some(dist.n()),
            weights: dist.weights().iter().map(|w| w.to_string()).collect(),
        }
    }

    pub fn to_distribution(&self) -> Result<Distribution> {
        match self {
            DistributionJson::Weights { n, weights } => {
                if let Some(n) = n {
                    if *n != weights.len() {
                        return Err(Error::Parse(format!("n = {n} but {} weights given", weights.len())));
                    }
                }
                let ws = weights.iter().map(|w| parse_rational(w)).collect::<Result<Vec<_>>>()?;
                Distribution::new(ws)
            }
            DistributionJson::Dyadic { dyadic_exponents } => {
                DyadicMeasure::from_exponents(dyadic_exponents).to_distribution()
            }
        }
    }
}

pub fn parse_distribution(text: &str) -> Result<Distribution> {
    let raw: DistributionJson =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("distribution JSON: {e}")))?;
    raw.to_distribution()
}

pub fn distribution_to_json(dist: &Distribution) -> Value {
    serde_json::to_value(DistributionJson::from_distribution(dist)).expect("plain data")
}

fn kind_name(q: &Question) -> &'static str {
    match q.kind() {
        QuestionKind::Equality(_) => "equality",
        QuestionKind::Comparison(_) => "comparison",
        QuestionKind::EntryWise { .. } => "entry",
        QuestionKind::Cone(_) => "cone",
        QuestionKind::Cyclic(_) => "cyclic",
        QuestionKind::Explicit(_) => "explicit",
    }
}

/// `{kind, index?, elements?, render}`; `elements` lists the resolved set.
pub fn question_to_json(q: &Question, with_elements: bool) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), json!(kind_name(q)));
    match q.kind() {
        QuestionKind::Equality(i) | QuestionKind::Comparison(i) => {
            m.insert("index".into(), json!(i + 1));
        }
        _ => {}
    }
    if with_elements {
        let elems: Vec<usize> = q.resolve().iter().map(|i| i + 1).collect();
        m.insert("elements".into(), json!(elems));
    }
    m.insert("render".into(), json!(q.render()));
    Value::Object(m)
}

/// Equality and comparison questions keep their kind; anything else comes
/// back as the explicit set it resolves to.
pub fn question_from_json(v: &Value, n: usize) -> Result<Question> {
    let bad = |why: &str| Error::Parse(format!("question JSON: {why}"));
    let kind = v.get("kind").and_then(Value::as_str).unwrap_or("explicit");
    let index = v.get("index").and_then(Value::as_u64).map(|i| i as usize);
    match (kind, index) {
        ("equality", Some(i)) if (1..=n).contains(&i) => return Ok(Question::equality(n, i - 1)),
        ("comparison", Some(i)) if (1..=n).contains(&i) => return Ok(Question::comparison(n, i - 1)),
        _ => {}
    }
    let elems = v
        .get("elements")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing elements"))?;
    let mut idx = Vec::with_capacity(elems.len());
    for e in elems {
        let i = e.as_u64().ok_or_else(|| bad("element is not an integer"))? as usize;
        if !(1..=n).contains(&i) {
            return Err(bad(&format!("element {i} outside 1..={n}")));
        }
        idx.push(i - 1);
    }
    Ok(Question::explicit(ElementSet::from_indices(n, idx)))
}

/// Serializes without recursion in our code; serde_json itself recurses
/// when printing, so extremely deep trees should not be emitted.
pub fn tree_to_json(tree: &DecisionTree) -> Value {
    let mut done: Vec<Option<Value>> = vec![None; tree.nodes().len()];
    let mut stack = vec![(tree.root(), false)];
    while let Some((id, expanded)) = stack.pop() {
        match tree.node(id) {
            Node::Leaf(e) => done[id] = Some(json!({ "leaf": e.one_based() })),
            Node::Ask { question, yes, no } => {
                if expanded {
                    let y = done[*yes].take().expect("child built");
                    let n = done[*no].take().expect("child built");
                    done[id] = Some(json!({ "q": question_to_json(question, true), "yes": y, "no": n }));
                } else {
                    stack.push((id, true));
                    stack.push((*yes, false));
                    stack.push((*no, false));
                }
            }
        }
    }
    done[tree.root()].take().expect("root built")
}

pub fn tree_from_json(v: &Value, n: usize) -> Result<DecisionTree> {
    let bad = |why: String| Error::Parse(format!("tree JSON: {why}"));
    let mut b = TreeBuilder::new();
    let root = b.reserve();
    let mut stack: Vec<(NodeId, &Value)> = vec![(root, v)];
    while let Some((id, node)) = stack.pop() {
        if let Some(leaf) = node.get("leaf") {
            let i = leaf.as_u64().ok_or_else(|| bad("leaf is not an integer".into()))? as usize;
            let e = Element::from_one_based(i)
                .filter(|e| e.0 < n)
                .ok_or_else(|| bad(format!("leaf {i} outside 1..={n}")))?;
            b.set(id, Node::Leaf(e));
            continue;
        }
        let (Some(q), Some(y), Some(no)) = (node.get("q"), node.get("yes"), node.get("no")) else {
            return Err(bad("node needs either leaf or q/yes/no".into()));
        };
        let question = question_from_json(q, n)?;
        let yes = b.reserve();
        let no_id = b.reserve();
        b.set(id, Node::Ask { question, yes, no: no_id });
        stack.push((yes, y));
        stack.push((no_id, no));
    }
    Ok(b.finish(n, root))
}
