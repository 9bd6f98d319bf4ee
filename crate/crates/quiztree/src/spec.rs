//! Strategy selection shared by the CLI, the benchmark and the service.

use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use quiztree_core::family::QuestionFamily;
use quiztree_core::stepper::{Stepper, TreeStepper};
use quiztree_core::strategy::at::{build_at_tree, comparison_equality_family, AtParams};
use quiztree_core::strategy::cone::{cone_online, cone_optimal_tree, ConeFamily};
use quiztree_core::strategy::prolixity::{build_tr_tree, prolixity_stepper, CyclicFamily, ProlixityParams};
use quiztree_core::strategy::vector::{build_vector_tree, vector_family};
use quiztree_core::{huffman, parse_rational, DecisionTree, Distribution, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum StrategySpec {
    Huffman,
    At { t: BigRational },
    Vector { r: f64 },
    Cone,
    Prolixity { k: u32, seed: u64 },
}

pub const KINDS: [&str; 5] = ["huffman", "at", "vector", "cone", "prolixity"];

impl StrategySpec {
    /// Builds a spec from a kind name and optional parameters, filling in
    /// defaults (`t = 3/10`, `r = 2`, `k = 3`, `seed = 0`).
    pub fn from_parts(kind: &str, t: Option<&str>, r: Option<f64>, k: Option<u32>, seed: Option<u64>) -> Result<Self> {
        let spec = match kind {
            "huffman" => StrategySpec::Huffman,
            "at" => {
                let t = match t {
                    Some(s) => parse_rational(s)?,
                    None => AtParams::default().t().clone(),
                };
                AtParams::new(t.clone())?;
                StrategySpec::At { t }
            }
            "vector" => {
                let r = r.unwrap_or(2.0);
                if !(r >= 1.0 && r.is_finite()) {
                    return Err(Error::PreconditionViolated(format!("r = {r} must be at least 1")));
                }
                StrategySpec::Vector { r }
            }
            "cone" => StrategySpec::Cone,
            "prolixity" => {
                let p = ProlixityParams::new(k.unwrap_or(3), seed.unwrap_or(0))?;
                StrategySpec::Prolixity { k: p.k, seed: p.seed }
            }
            other => return Err(Error::Parse(format!("unknown strategy {other:?}"))),
        };
        Ok(spec)
    }

    /// Accepts `{"kind": ..., "t": "3/10", "r": 2, "k": 3, "seed": 1}`;
    /// numbers may also be given as strings.
    pub fn from_json(v: &Value) -> Result<Self> {
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("strategy needs a kind".into()))?;
        let text = |key: &str| -> Option<String> {
            v.get(key).and_then(|x| match x {
                Value::String(s) => Some(s.clone()),
                Value::Number(n) => Some(n.to_string()),
                _ => None,
            })
        };
        let num = |key: &str| -> Result<Option<f64>> {
            text(key)
                .map(|s| {
                    parse_rational(&s)
                        .ok()
                        .and_then(|q| q.to_f64())
                        .or_else(|| s.parse().ok())
                        .ok_or_else(|| Error::Parse(format!("{key} = {s:?} is not a number")))
                })
                .transpose()
        };
        let int = |key: &str| -> Result<Option<u64>> {
            text(key)
                .map(|s| s.parse::<u64>().map_err(|_| Error::Parse(format!("{key} = {s:?} is not an integer"))))
                .transpose()
        };
        let k = int("k")?
            .map(|k| u32::try_from(k).map_err(|_| Error::Parse("k is too large".into())))
            .transpose()?;
        Self::from_parts(kind, text("t").as_deref(), num("r")?, k, int("seed")?)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            StrategySpec::Huffman => "huffman",
            StrategySpec::At { .. } => "at",
            StrategySpec::Vector { .. } => "vector",
            StrategySpec::Cone => "cone",
            StrategySpec::Prolixity { .. } => "prolixity",
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            StrategySpec::Huffman | StrategySpec::Cone => json!({ "kind": self.kind() }),
            StrategySpec::At { t } => json!({ "kind": "at", "t": t.to_string() }),
            StrategySpec::Vector { r } => json!({ "kind": "vector", "r": r.to_string() }),
            StrategySpec::Prolixity { k, seed } => json!({ "kind": "prolixity", "k": k, "seed": seed }),
        }
    }

    /// Short label for reports, e.g. `at(t=3/10)`.
    pub fn label(&self) -> String {
        match self {
            StrategySpec::At { t } => format!("at(t={t})"),
            StrategySpec::Vector { r } => format!("vector(r={r})"),
            StrategySpec::Prolixity { k, .. } => format!("prolixity(k={k})"),
            _ => self.kind().to_string(),
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        match self {
            StrategySpec::Prolixity { k, .. } => StrategySpec::Prolixity { k: *k, seed },
            other => other.clone(),
        }
    }

    pub fn build_tree(&self, dist: &Distribution) -> Result<DecisionTree> {
        match self {
            StrategySpec::Huffman => Ok(huffman(dist).tree),
            StrategySpec::At { t } => Ok(build_at_tree(dist, &AtParams::new(t.clone())?)),
            StrategySpec::Vector { r } => build_vector_tree(dist, *r),
            StrategySpec::Cone => Ok(cone_optimal_tree(dist)),
            StrategySpec::Prolixity { k, seed } => build_tr_tree(dist, ProlixityParams::new(*k, *seed)?),
        }
    }

    /// An interactive player. Cone and prolixity compute questions on
    /// demand; the others walk a prebuilt tree.
    pub fn stepper(&self, dist: &Distribution) -> Result<Box<dyn Stepper>> {
        Ok(match self {
            StrategySpec::Cone => Box::new(cone_online(dist)),
            StrategySpec::Prolixity { k, seed } => Box::new(prolixity_stepper(dist, ProlixityParams::new(*k, *seed)?)?),
            other => Box::new(TreeStepper::new(Arc::new(other.build_tree(dist)?))),
        })
    }

    /// The question family the strategy draws from, if it is restricted.
    pub fn family(&self, n: usize) -> Result<Option<Box<dyn QuestionFamily>>> {
        Ok(match self {
            StrategySpec::Huffman => None,
            StrategySpec::At { .. } => Some(Box::new(comparison_equality_family(n))),
            StrategySpec::Vector { r } => Some(Box::new(vector_family(n, *r)?)),
            StrategySpec::Cone => Some(Box::new(ConeFamily::new(n))),
            StrategySpec::Prolixity { k, .. } => Some(Box::new(CyclicFamily::new(n, *k))),
        })
    }

    /// Number of questions available, or `2^(n-1) - 1` when unrestricted.
    pub fn family_size(&self, n: usize) -> Result<BigUint> {
        Ok(match self.family(n)? {
            Some(f) => f.cardinality(),
            None => (BigUint::from(1u8) << n.saturating_sub(1)) - 1u8,
        })
    }
}

/// Catalog served at `/api/meta/strategies`.
pub fn catalog() -> Value {
    json!([
        {
            "kind": "huffman",
            "description": "Optimal tree over arbitrary questions.",
            "params": []
        },
        {
            "kind": "at",
            "description": "Comparison and equality questions; expected cost below H + 1 for t = 3/10.",
            "params": [{ "name": "t", "default": "3/10", "description": "threshold for asking x = x_max" }]
        },
        {
            "kind": "vector",
            "description": "Entry-wise questions on a digit encoding; expected cost below H + floor(r).",
            "params": [{ "name": "r", "default": "2", "description": "redundancy budget, at least 1" }]
        },
        {
            "kind": "cone",
            "description": "Optimal strategy using subsets or supersets of the first half of the elements.",
            "params": []
        },
        {
            "kind": "prolixity",
            "description": "Randomized strategy with expected cost below Opt + r + r^2, r = 2^-k.",
            "params": [
                { "name": "k", "default": "3", "description": "precision, r = 2^-k" },
                { "name": "seed", "default": "0", "description": "random seed" }
            ]
        }
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let s = StrategySpec::from_json(&json!({"kind": "at", "t": "1/2"})).unwrap();
        assert_eq!(s.to_json(), json!({"kind": "at", "t": "1/2"}));
        let s = StrategySpec::from_json(&json!({"kind": "at"})).unwrap();
        assert_eq!(s.label(), "at(t=3/10)");
        let s = StrategySpec::from_json(&json!({"kind": "prolixity", "k": 4, "seed": "9"})).unwrap();
        assert_eq!(s, StrategySpec::Prolixity { k: 4, seed: 9 });
        let s = StrategySpec::from_json(&json!({"kind": "vector", "r": 3})).unwrap();
        assert_eq!(s, StrategySpec::Vector { r: 3.0 });
        assert!(StrategySpec::from_json(&json!({"kind": "oracle"})).is_err());
        assert!(StrategySpec::from_json(&json!({"kind": "at", "t": "0"})).is_err());
        assert!(StrategySpec::from_json(&json!({"kind": "prolixity", "k": 1})).is_err());
        assert!(StrategySpec::from_json(&json!({})).is_err());
    }

    #[test]
    fn every_kind_builds() {
        let d = Distribution::from_strs(&["1/2", "1/4", "1/8", "1/8"]).unwrap();
        for kind in KINDS {
            let s = StrategySpec::from_parts(kind, None, None, None, None).unwrap();
            let t = s.build_tree(&d).unwrap();
            assert!(t.validate(&d, s.family(4).unwrap().as_deref()).is_valid(), "{kind}");
        }
        assert_eq!(StrategySpec::Huffman.family_size(4).unwrap(), BigUint::from(7u8));
        assert_eq!(StrategySpec::Cone.family_size(5).unwrap(), BigUint::from(11u8));
    }
}
