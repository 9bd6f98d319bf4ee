//! Random distributions for benchmarks and statistical tests. Float draws
//! are rationalized with denominator `2^32` and renormalized exactly.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::Exp1;

use crate::dist::Distribution;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleFamily {
    /// Uniform on the probability simplex.
    UniformSimplex,
    /// Weights `1/i^s` assigned to a random permutation of the elements.
    Zipf(f64),
    /// Leaf depths of a random full binary tree, randomly placed.
    DyadicRandom,
}

impl fmt::Display for SampleFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleFamily::UniformSimplex => write!(f, "uniform-simplex"),
            SampleFamily::Zipf(s) => write!(f, "zipf({s})"),
            SampleFamily::DyadicRandom => write!(f, "dyadic-random"),
        }
    }
}

impl FromStr for SampleFamily {
    type Err = Error;

    /// Accepts `uniform-simplex`, `dyadic-random`, `zipf` (s = 1),
    /// `zipf(s)` and `zipf:s`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "uniform-simplex" => return Ok(SampleFamily::UniformSimplex),
            "dyadic-random" => return Ok(SampleFamily::DyadicRandom),
            "zipf" => return Ok(SampleFamily::Zipf(1.0)),
            _ => {}
        }
        let arg = s
            .strip_prefix("zipf(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| s.strip_prefix("zipf:"));
        match arg.map(|a| a.trim().parse::<f64>()) {
            Some(Ok(x)) if x.is_finite() && x >= 0.0 => Ok(SampleFamily::Zipf(x)),
            _ => Err(Error::Parse(format!("unknown distribution family {s:?}"))),
        }
    }
}

/// `1/i^s` in the natural order, rationalized.
pub fn zipf(n: usize, s: f64) -> Result<Distribution> {
    let ws: Vec<f64> = (1..=n).map(|i| (i as f64).powf(-s)).collect();
    Distribution::rationalize(&ws)
}

fn random_tree_depths<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<u32> {
    let mut depths = vec![0u32];
    while depths.len() < n {
        let i = rng.random_range(0..depths.len());
        depths[i] += 1;
        let d = depths[i];
        depths.push(d);
    }
    depths
}

pub fn sample<R: Rng + ?Sized>(family: SampleFamily, n: usize, rng: &mut R) -> Result<Distribution> {
    if n == 0 {
        return Err(Error::InvalidDistribution("n must be at least 1".into()));
    }
    match family {
        SampleFamily::UniformSimplex => {
            let ws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
            Distribution::rationalize(&ws)
        }
        SampleFamily::Zipf(s) => {
            let mut ws: Vec<f64> = (1..=n).map(|i| (i as f64).powf(-s)).collect();
            ws.shuffle(rng);
            Distribution::rationalize(&ws)
        }
        SampleFamily::DyadicRandom => {
            let mut depths = random_tree_depths(n, rng);
            depths.shuffle(rng);
            let top = depths.iter().copied().max().unwrap_or(0);
            let masses: Vec<BigUint> = depths.iter().map(|&d| BigUint::one() << (top - d)).collect();
            Distribution::from_masses(&masses)
        }
    }
}
