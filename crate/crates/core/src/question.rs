//! Yes/No questions: subsets of `X_n` described by a structured kind.

use crate::error::{Error, Result};
use crate::set::{Element, ElementSet};

/// Digit test for an entry-wise vector question. Digit values are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntryTest {
    /// `x[coord] = value`
    Eq(usize),
    /// `x[coord] < value`
    Less(usize),
}

/// Index into the cone of `S = {x_1, ..., x_pivot}`.
///
/// A subset index selects which elements of `S` belong to the question; a
/// superset index selects which elements outside `S` are added to it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConeIndex {
    pub n: usize,
    pub superset: bool,
    pub bits: Vec<bool>,
}

impl ConeIndex {
    pub fn pivot(n: usize) -> usize {
        n / 2
    }

    /// Decodes a packed index of `ceil(n/2) + 1` bits: a leading kind bit
    /// (0 = subset of `S`, 1 = superset of `S`), then the free coordinates.
    /// In the subset case only the first `floor(n/2)` free bits are used and
    /// any trailing bit must be zero.
    pub fn from_bits(bits: &[bool], n: usize) -> Result<Self> {
        let want = n.div_ceil(2) + 1;
        if bits.len() != want {
            return Err(Error::MalformedIndex(format!(
                "expected {want} bits for n = {n}, got {}",
                bits.len()
            )));
        }
        let superset = bits[0];
        let pivot = Self::pivot(n);
        let free = if superset { n - pivot } else { pivot };
        if bits[1 + free..].iter().any(|&b| b) {
            return Err(Error::MalformedIndex(
                "subset index sets a bit beyond the pivot".into(),
            ));
        }
        Ok(ConeIndex {
            n,
            superset,
            bits: bits[1..1 + free].to_vec(),
        })
    }

    pub fn to_bits(&self) -> Vec<bool> {
        let mut out = vec![false; self.n.div_ceil(2) + 1];
        out[0] = self.superset;
        out[1..1 + self.bits.len()].copy_from_slice(&self.bits);
        out
    }

    /// The index of `set` if it lies in the cone. Prefers the subset form
    /// for the pivot itself.
    pub fn of_set(set: &ElementSet) -> Option<Self> {
        let n = set.ground_size();
        let pivot = Self::pivot(n);
        let in_s = |i: usize| i < pivot;
        if set.iter().all(in_s) {
            return Some(ConeIndex {
                n,
                superset: false,
                bits: (0..pivot).map(|i| set.contains(i)).collect(),
            });
        }
        if (0..pivot).all(|i| set.contains(i)) {
            return Some(ConeIndex {
                n,
                superset: true,
                bits: (pivot..n).map(|i| set.contains(i)).collect(),
            });
        }
        None
    }

    pub fn contains(&self, x: usize) -> bool {
        let pivot = Self::pivot(self.n);
        match (self.superset, x < pivot) {
            (false, true) => self.bits[x],
            (false, false) => false,
            (true, true) => true,
            (true, false) => self.bits.get(x - pivot).copied().unwrap_or(false),
        }
    }
}

/// Membership `x_i in Q_q` for a packed cone index, in O(n).
pub fn cone_membership(bits: &[bool], x: Element, n: usize) -> Result<bool> {
    if x.0 >= n {
        return Err(Error::MalformedIndex(format!("{x} is outside X_{n}")));
    }
    Ok(ConeIndex::from_bits(bits, n)?.contains(x.0))
}

/// A cyclic interval of `X_n` adjusted by explicit additions and removals.
///
/// `interval = Some((start, end))` covers `start, start+1, ..., end` modulo
/// `n`; `end = start - 1 (mod n)` is the whole of `X_n`. `None` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclicQuestion {
    pub n: usize,
    pub interval: Option<(usize, usize)>,
    pub added: Vec<usize>,
    pub removed: Vec<usize>,
}

impl CyclicQuestion {
    pub fn in_interval(&self, x: usize) -> bool {
        match self.interval {
            None => false,
            Some((s, e)) if s <= e => s <= x && x <= e,
            Some((s, e)) => x >= s || x <= e,
        }
    }

    pub fn contains(&self, x: usize) -> bool {
        if self.removed.contains(&x) {
            return false;
        }
        self.in_interval(x) || self.added.contains(&x)
    }

    pub fn adjustments(&self) -> usize {
        self.added.len() + self.removed.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QuestionKind {
    /// `x = x_i`
    Equality(usize),
    /// `x < x_i`, i.e. `{x_1, ..., x_{i-1}}` in 1-based terms.
    Comparison(usize),
    /// A digit test on the mixed-radix vector encoding of the element.
    EntryWise {
        coord: usize,
        coords: usize,
        base: usize,
        test: EntryTest,
    },
    Cone(ConeIndex),
    Cyclic(CyclicQuestion),
    Explicit(ElementSet),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Question {
    n: usize,
    kind: QuestionKind,
}

/// Digit `coord` (0 = most significant) of `x` written with `coords` digits in `base`.
pub fn digit(x: usize, coord: usize, coords: usize, base: usize) -> usize {
    let place = base.pow((coords - 1 - coord) as u32);
    (x / place) % base
}

impl Question {
    pub fn new(n: usize, kind: QuestionKind) -> Self {
        Question { n, kind }
    }

    pub fn equality(n: usize, i: usize) -> Self {
        Self::new(n, QuestionKind::Equality(i))
    }

    pub fn comparison(n: usize, i: usize) -> Self {
        Self::new(n, QuestionKind::Comparison(i))
    }

    pub fn explicit(set: ElementSet) -> Self {
        Self::new(set.ground_size(), QuestionKind::Explicit(set))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &QuestionKind {
        &self.kind
    }

    pub fn contains(&self, x: usize) -> bool {
        if x >= self.n {
            return false;
        }
        match &self.kind {
            QuestionKind::Equality(i) => x == *i,
            QuestionKind::Comparison(i) => x < *i,
            QuestionKind::EntryWise {
                coord,
                coords,
                base,
                test,
            } => {
                let d = digit(x, *coord, *coords, *base);
                match test {
                    EntryTest::Eq(v) => d == *v,
                    EntryTest::Less(v) => d < *v,
                }
            }
            QuestionKind::Cone(c) => c.contains(x),
            QuestionKind::Cyclic(c) => c.contains(x),
            QuestionKind::Explicit(s) => s.contains(x),
        }
    }

    /// The subset of `X_n` this question asks about.
    pub fn resolve(&self) -> ElementSet {
        match &self.kind {
            QuestionKind::Explicit(s) => s.clone(),
            _ => ElementSet::from_indices(self.n, (0..self.n).filter(|&x| self.contains(x))),
        }
    }

    /// Trivial questions (empty or all of `X_n`) carry no information.
    pub fn is_degenerate(&self) -> bool {
        let r = self.resolve();
        r.is_empty() || r.is_full()
    }

    /// Human-readable form, 1-based.
    pub fn render(&self) -> String {
        match &self.kind {
            QuestionKind::Equality(i) => format!("Is x = x_{}?", i + 1),
            QuestionKind::Comparison(i) => format!("Is x < x_{}?", i + 1),
            QuestionKind::EntryWise { coord, test, .. } => match test {
                EntryTest::Eq(v) => format!("Is coordinate {} of x equal to {}?", coord + 1, v + 1),
                EntryTest::Less(v) => format!("Is coordinate {} of x < {}?", coord + 1, v + 1),
            },
            _ => {
                let set = self.resolve();
                if set.len() <= 12 {
                    let names: Vec<String> = set.iter().map(|i| Element(i).to_string()).collect();
                    format!("Is x in {{{}}}?", names.join(", "))
                } else {
                    format!("Is x in {}?", self.describe())
                }
            }
        }
    }

    fn describe(&self) -> String {
        match &self.kind {
            QuestionKind::Cone(c) => {
                let pivot = ConeIndex::pivot(self.n);
                let picked: Vec<usize> = c
                    .bits
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(j, _)| if c.superset { pivot + j + 1 } else { j + 1 })
                    .collect();
                if c.superset {
                    format!("x_1..x_{pivot} plus {} more (of {:?})", picked.len(), picked)
                } else {
                    format!("a {}-element subset of x_1..x_{pivot}", picked.len())
                }
            }
            QuestionKind::Cyclic(c) => {
                let iv = match c.interval {
                    None => "the empty interval".to_string(),
                    Some((s, e)) => format!("the cyclic interval x_{}..x_{}", s + 1, e + 1),
                };
                format!(
                    "{iv} with {} added and {} removed",
                    c.added.len(),
                    c.removed.len()
                )
            }
            _ => format!("a {}-element set", self.resolve().len()),
        }
    }
}
