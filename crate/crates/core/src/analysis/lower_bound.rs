//! Exhaustive check of the first question of every near-optimal tree on
//! the heavy/light distribution behind the prolixity lower bound.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::huffman::{brute_force_opt, huffman, huffman_depths};
use crate::set::ElementSet;

pub const MAX_LB_N: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstQuestion {
    pub set: ElementSet,
    /// Cost of the best tree starting with this question.
    pub cost: BigRational,
    /// Heavy elements on the larger and smaller side.
    pub heavy_split: (usize, usize),
    pub lights_together: bool,
}

#[derive(Debug, Clone)]
pub struct LbCheckReport {
    pub k: u32,
    pub n: usize,
    pub delta: BigRational,
    pub r: BigRational,
    pub dist: Distribution,
    pub opt: BigRational,
    /// Brute-force optimum, when the support is small enough.
    pub opt_brute: Option<BigRational>,
    pub questions_checked: usize,
    /// First questions admitting cost at most `opt + r`.
    pub admissible: Vec<FirstQuestion>,
}

impl LbCheckReport {
    /// Every admissible first question splits the heavies `2^(k-1)` to
    /// `2^(k-1) - 1` and keeps the lights on one side.
    pub fn property_holds(&self) -> bool {
        let big = 1usize << (self.k - 1);
        !self.admissible.is_empty()
            && self
                .admissible
                .iter()
                .all(|q| q.heavy_split == (big, big - 1) && q.lights_together)
    }
}

/// Cost of an optimal subtree over `weights` (unnormalised).
fn subtree_cost(weights: &[BigRational]) -> BigRational {
    huffman_depths(weights)
        .iter()
        .zip(weights)
        .map(|(&d, w)| w * BigRational::from_integer(BigInt::from(d)))
        .sum()
}

/// `delta` defaults to `r^2 / 2` with `r = 2^-k`.
pub fn prolixity_lb_check(k: u32, n: usize, delta: Option<BigRational>) -> Result<LbCheckReport> {
    if n > MAX_LB_N {
        return Err(Error::TooLarge {
            what: "lower-bound sweep",
            limit: MAX_LB_N,
        });
    }
    if !(2..=3).contains(&k) {
        return Err(Error::PreconditionViolated(format!("k = {k} is not 2 or 3")));
    }
    let r = BigRational::new(BigInt::one(), BigInt::one() << k);
    let heavies = (1usize << k) - 1;
    if n <= 1 << k {
        return Err(Error::PreconditionViolated(format!("need n > 2^k, got n = {n}")));
    }
    let delta = delta.unwrap_or_else(|| &r * &r / BigInt::from(2));
    if !delta.is_positive() || delta >= &r * &r {
        return Err(Error::PreconditionViolated("need 0 < delta < r^2".into()));
    }
    let lights = n - heavies;
    let heavy_mass = (BigRational::one() - &delta) / BigInt::from(heavies);
    let light_mass = &delta / BigInt::from(lights);
    let weights: Vec<BigRational> = (0..n)
        .map(|i| if i < heavies { heavy_mass.clone() } else { light_mass.clone() })
        .collect();
    let dist = Distribution::new(weights.clone())?;
    let opt = huffman(&dist).opt_cost;
    let opt_brute = if n <= 7 { Some(brute_force_opt(&dist)?) } else { None };
    let budget = &opt + &r;

    let mut admissible = Vec::new();
    let questions = (1u64 << (n - 1)) - 1;
    for mask in 1..=questions {
        let set = ElementSet::from_mask(n, mask);
        let (yes, no): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| set.contains(i));
        let side = |idx: &[usize]| subtree_cost(&idx.iter().map(|&i| weights[i].clone()).collect::<Vec<_>>());
        let cost = BigRational::one() + side(&yes) + side(&no);
        if cost > budget {
            continue;
        }
        let hy = yes.iter().filter(|&&i| i < heavies).count();
        let hn = heavies - hy;
        let ly = yes.len() - hy;
        admissible.push(FirstQuestion {
            set,
            cost,
            heavy_split: (hy.max(hn), hy.min(hn)),
            lights_together: ly == 0 || ly == lights,
        });
    }
    debug_assert!(opt.is_positive() && !budget.is_zero());
    Ok(LbCheckReport {
        k,
        n,
        delta,
        r,
        dist,
        opt,
        opt_brute,
        questions_checked: questions as usize,
        admissible,
    })
}
