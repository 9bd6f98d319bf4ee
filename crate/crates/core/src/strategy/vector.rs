//! Redundancy-r strategy: write elements as vectors of `floor(r)` digits and
//! resolve one digit at a time with A_{3/10}.

use std::collections::BTreeMap;

use num_bigint::BigUint;

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::family::QuestionFamily;
use crate::question::{digit, EntryTest, Question, QuestionKind};
use crate::set::{Element, ElementSet};
use crate::strategy::at::{build_at_subtree, AtParams, Phrased};
use crate::tree::{DecisionTree, Node, NodeId, TreeBuilder};

/// Row-major mixed-radix encoding of `0..n` as `k` digits in `0..base`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VectorCodec {
    pub n: usize,
    pub k: usize,
    pub base: usize,
}

impl VectorCodec {
    pub fn new(n: usize, r: f64) -> Result<Self> {
        if n < 1 || !(r >= 1.0) || !r.is_finite() {
            return Err(Error::PreconditionViolated(format!("need n >= 1 and r >= 1, got n = {n}, r = {r}")));
        }
        let k = r.floor() as usize;
        // smallest base with base^k >= n
        let fits = |b: usize| {
            let mut acc: u128 = 1;
            for _ in 0..k {
                acc = acc.saturating_mul(b as u128);
                if acc >= n as u128 {
                    return true;
                }
            }
            acc >= n as u128
        };
        let mut base = (n as f64).powf(1.0 / k as f64).round().max(1.0) as usize;
        while base > 1 && fits(base - 1) {
            base -= 1;
        }
        while !fits(base) {
            base += 1;
        }
        Ok(VectorCodec { n, k, base: base.max(2) })
    }

    pub fn encode(&self, x: usize) -> Vec<usize> {
        (0..self.k).map(|c| digit(x, c, self.k, self.base)).collect()
    }

    pub fn decode(&self, digits: &[usize]) -> usize {
        digits.iter().fold(0, |acc, &d| acc * self.base + d)
    }

    fn entry(&self, coord: usize, test: EntryTest) -> Question {
        Question::new(
            self.n,
            QuestionKind::EntryWise {
                coord,
                coords: self.k,
                base: self.base,
                test,
            },
        )
    }

    /// Expresses "digit < v" (1 <= v < base) inside the reduced family.
    fn less(&self, coord: usize, v: usize) -> Phrased {
        if v == 1 {
            (self.entry(coord, EntryTest::Eq(0)), false)
        } else if v == self.base - 1 {
            (self.entry(coord, EntryTest::Eq(v)), true)
        } else {
            (self.entry(coord, EntryTest::Less(v)), false)
        }
    }
}

/// Entry-wise equality and comparison questions with the redundant
/// comparisons (`< 1`, `< 2`, `< base`) removed.
#[derive(Debug, Clone)]
pub struct VectorFamily {
    codec: VectorCodec,
}

impl VectorFamily {
    pub fn codec(&self) -> &VectorCodec {
        &self.codec
    }

    fn tests(&self) -> Vec<EntryTest> {
        let b = self.codec.base;
        if b == 2 {
            return vec![EntryTest::Eq(0)];
        }
        (0..b)
            .map(EntryTest::Eq)
            .chain((2..b - 1).map(EntryTest::Less))
            .collect()
    }
}

pub fn vector_family(n: usize, r: f64) -> Result<VectorFamily> {
    Ok(VectorFamily {
        codec: VectorCodec::new(n, r)?,
    })
}

impl QuestionFamily for VectorFamily {
    fn ground_size(&self) -> usize {
        self.codec.n
    }

    fn cardinality(&self) -> BigUint {
        BigUint::from(self.codec.k * (2 * self.codec.base - 3))
    }

    fn admits(&self, q: &Question) -> bool {
        let c = &self.codec;
        if q.n() != c.n {
            return false;
        }
        if let QuestionKind::EntryWise {
            coords, base, test, ..
        } = q.kind()
        {
            if *coords == c.k && *base == c.base {
                return match test {
                    EntryTest::Eq(v) => *v < c.base,
                    EntryTest::Less(v) => (1..c.base).contains(v),
                };
            }
        }
        let set = q.resolve();
        if set.is_empty() || set.is_full() {
            return false;
        }
        let canon = set.canonical();
        (0..c.k).any(|coord| {
            self.tests()
                .into_iter()
                .any(|t| c.entry(coord, t).resolve().canonical() == canon)
        })
    }

    fn members(&self) -> Option<Vec<ElementSet>> {
        let c = &self.codec;
        let mut out = Vec::new();
        for coord in 0..c.k {
            for t in self.tests() {
                out.push(c.entry(coord, t).resolve().canonical());
            }
        }
        Some(out)
    }

    fn name(&self) -> &'static str {
        "vector"
    }
}

fn build_coord(
    b: &mut TreeBuilder,
    slot: NodeId,
    codec: &VectorCodec,
    params: &AtParams,
    coord: usize,
    candidates: Vec<(usize, BigUint)>,
) {
    if coord == codec.k {
        debug_assert_eq!(candidates.len(), 1);
        b.set(slot, Node::Leaf(Element(candidates[0].0)));
        return;
    }
    let mut classes: BTreeMap<usize, Vec<(usize, BigUint)>> = BTreeMap::new();
    for (x, m) in candidates {
        classes
            .entry(digit(x, coord, codec.k, codec.base))
            .or_default()
            .push((x, m));
    }
    let domain: Vec<(usize, BigUint)> = classes
        .iter()
        .map(|(&v, xs)| (v, xs.iter().map(|(_, m)| m).sum()))
        .collect();
    build_at_subtree(
        b,
        slot,
        domain,
        params.t(),
        &|v| (codec.entry(coord, EntryTest::Eq(v)), false),
        &|v| codec.less(coord, v),
        &mut |b, id, v| {
            let next = classes.remove(&v).expect("digit class exists");
            build_coord(b, id, codec, params, coord + 1, next);
        },
    );
}

pub fn build_vector_tree(dist: &Distribution, r: f64) -> Result<DecisionTree> {
    let codec = VectorCodec::new(dist.n(), r)?;
    let params = AtParams::default();
    let mut b = TreeBuilder::new();
    let root = b.reserve();
    let candidates = dist
        .support()
        .into_iter()
        .map(|i| (i, dist.numerators()[i].clone()))
        .collect();
    build_coord(&mut b, root, &codec, &params, 0, candidates);
    Ok(b.finish(dist.n(), root))
}
