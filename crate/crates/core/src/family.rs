//! Families of allowed questions.
//!
//! Families are taken up to complement: a question and its complement ask the
//! same thing, and admitting one admits the other.

use num_bigint::BigUint;

use crate::question::Question;
use crate::set::ElementSet;

pub trait QuestionFamily: Send + Sync {
    fn ground_size(&self) -> usize;

    /// Number of distinct nontrivial questions, counting a set and its
    /// complement once.
    fn cardinality(&self) -> BigUint;

    fn admits(&self, q: &Question) -> bool;

    /// Canonical representatives (see [`ElementSet::canonical`]) of every
    /// member, when the family is small enough to list.
    fn members(&self) -> Option<Vec<ElementSet>> {
        None
    }

    fn name(&self) -> &'static str;
}

/// `x = x_i` and `x < x_i` questions.
#[derive(Debug, Clone)]
pub struct ComparisonEquality {
    n: usize,
}

impl ComparisonEquality {
    pub fn new(n: usize) -> Self {
        ComparisonEquality { n }
    }

    fn is_singleton_or_prefix(s: &ElementSet) -> bool {
        let len = s.len();
        len == 1 || (len > 0 && s.iter().all(|i| i < len))
    }
}

impl QuestionFamily for ComparisonEquality {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn cardinality(&self) -> BigUint {
        BigUint::from((2 * self.n).saturating_sub(3))
    }

    fn admits(&self, q: &Question) -> bool {
        if q.n() != self.n {
            return false;
        }
        let s = q.resolve();
        if s.is_empty() || s.is_full() {
            return false;
        }
        Self::is_singleton_or_prefix(&s) || Self::is_singleton_or_prefix(&s.complement())
    }

    fn members(&self) -> Option<Vec<ElementSet>> {
        let n = self.n;
        if n < 2 {
            return Some(Vec::new());
        }
        let mut out: Vec<ElementSet> = Vec::new();
        let mut push = |s: ElementSet| {
            let c = s.canonical();
            if !out.contains(&c) {
                out.push(c);
            }
        };
        for i in 0..n {
            push(ElementSet::from_indices(n, [i]));
        }
        for i in 1..n {
            push(ElementSet::from_indices(n, 0..i));
        }
        Some(out)
    }

    fn name(&self) -> &'static str {
        "comparison-equality"
    }
}

/// An explicitly listed family.
#[derive(Debug, Clone)]
pub struct ExplicitFamily {
    n: usize,
    sets: Vec<ElementSet>,
}

impl ExplicitFamily {
    pub fn new(n: usize, sets: impl IntoIterator<Item = ElementSet>) -> Self {
        let mut canon: Vec<ElementSet> = Vec::new();
        for s in sets {
            assert_eq!(s.ground_size(), n, "set over the wrong ground size");
            if s.is_empty() || s.is_full() {
                continue;
            }
            let c = s.canonical();
            if !canon.contains(&c) {
                canon.push(c);
            }
        }
        ExplicitFamily { n, sets: canon }
    }

    pub fn sets(&self) -> &[ElementSet] {
        &self.sets
    }
}

impl QuestionFamily for ExplicitFamily {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn cardinality(&self) -> BigUint {
        BigUint::from(self.sets.len())
    }

    fn admits(&self, q: &Question) -> bool {
        q.n() == self.n && self.sets.contains(&q.resolve().canonical())
    }

    fn members(&self) -> Option<Vec<ElementSet>> {
        Some(self.sets.clone())
    }

    fn name(&self) -> &'static str {
        "explicit"
    }
}
