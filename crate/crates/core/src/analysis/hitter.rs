//! Dyadic hitters: question sets meeting a half-mass set of every dyadic
//! distribution. These are exactly the sets that admit optimal trees.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::dyadic::{
    codes_to_measure, exponent_multisets, mrd, next_permutation, padded_codes, splitters, subset_sums,
    MAX_ENUMERATION_N,
};
use crate::dist::DyadicMeasure;
use crate::error::{Error, Result};
use crate::family::{ExplicitFamily, QuestionFamily};
use crate::set::ElementSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HitterReport {
    pub n: usize,
    pub hits: bool,
    /// The first distribution (in enumeration order) that no member splits.
    pub counterexample: Option<DyadicMeasure>,
}

fn family_masks(family: &dyn QuestionFamily, n: usize) -> Result<Vec<u64>> {
    if family.ground_size() != n {
        return Err(Error::PreconditionViolated(format!(
            "family is over {} points, not {n}",
            family.ground_size()
        )));
    }
    let members = family.members().ok_or(Error::TooLarge {
        what: "family listing",
        limit: MAX_ENUMERATION_N,
    })?;
    let mut masks: Vec<u64> = members.iter().filter_map(|s| s.to_mask()).collect();
    masks.sort_unstable();
    masks.dedup();
    Ok(masks)
}

/// Checks every non-constant dyadic distribution on `n <= 10` points.
pub fn is_dyadic_hitter(family: &dyn QuestionFamily, n: usize) -> Result<HitterReport> {
    if n > MAX_ENUMERATION_N {
        return Err(Error::TooLarge {
            what: "dyadic hitter check",
            limit: MAX_ENUMERATION_N,
        });
    }
    let masks = family_masks(family, n)?;
    Ok(check_masks(&masks, n))
}

pub(crate) fn check_masks(masks: &[u64], n: usize) -> HitterReport {
    if n < 2 {
        return HitterReport {
            n,
            hits: true,
            counterexample: None,
        };
    }
    let scale = n as u32 - 1;
    let half = 1u64 << (scale - 1);
    let lo_bits = n / 2;
    let lo_mask = (1u64 << lo_bits) - 1;
    let counterexample = exponent_multisets(n).par_iter().find_map_first(|exps| {
        let mut codes = padded_codes(n, exps);
        let mut masses = vec![0u64; n];
        loop {
            for (m, &c) in masses.iter_mut().zip(&codes) {
                *m = if c == 0 { 0 } else { 1 << (scale - c) };
            }
            let lo = subset_sums(&masses[..lo_bits]);
            let hi = subset_sums(&masses[lo_bits..]);
            let hit = masks
                .iter()
                .any(|&m| lo[(m & lo_mask) as usize] + hi[(m >> lo_bits) as usize] == half);
            if !hit {
                return Some(codes_to_measure(&codes));
            }
            if !next_permutation(&mut codes) {
                return None;
            }
        }
    });
    HitterReport {
        n,
        hits: counterexample.is_none(),
        counterexample,
    }
}

pub const MAX_MIN_HITTER_N: usize = 5;

/// Smallest dyadic hitter on `n <= 5` points, by exhaustive search over the
/// `2^(n-1) - 1` questions taken up to complement.
pub fn min_dyadic_hitter(n: usize) -> Result<(usize, ExplicitFamily)> {
    if n > MAX_MIN_HITTER_N {
        return Err(Error::TooLarge {
            what: "minimum dyadic hitter search",
            limit: MAX_MIN_HITTER_N,
        });
    }
    if n < 2 {
        return Ok((0, ExplicitFamily::new(n, [])));
    }
    // canonical questions avoid x_n
    let questions: Vec<u64> = (1..(1u64 << (n - 1))).collect();
    let dists: Vec<Vec<u64>> = super::dyadic::enumerate_dyadic(n, false)?
        .map(|mu| {
            let scale = n as u32 - 1;
            mu.masses_u64(scale).expect("exponents below n")
        })
        .collect();
    let words = dists.len().div_ceil(64);
    let cover: Vec<Vec<u64>> = questions
        .iter()
        .map(|&q| {
            let mut bits = vec![0u64; words];
            for (j, masses) in dists.iter().enumerate() {
                let s: u64 = (0..n).filter(|&i| q >> i & 1 == 1).map(|i| masses[i]).sum();
                if s == 1 << (n - 2) {
                    bits[j / 64] |= 1 << (j % 64);
                }
            }
            bits
        })
        .collect();
    let full: Vec<u64> = (0..words)
        .map(|w| {
            let bits = (dists.len() - 64 * w).min(64);
            if bits == 64 {
                u64::MAX
            } else {
                (1u64 << bits) - 1
            }
        })
        .collect();
    let q = questions.len();
    let mut subsets: Vec<u64> = (1..(1u64 << q)).collect();
    subsets.sort_by_key(|s| (s.count_ones(), *s));
    for s in subsets {
        let mut acc = vec![0u64; words];
        for (i, c) in cover.iter().enumerate() {
            if s >> i & 1 == 1 {
                for (a, b) in acc.iter_mut().zip(c) {
                    *a |= b;
                }
            }
        }
        if acc == full {
            let sets = (0..q)
                .filter(|&i| s >> i & 1 == 1)
                .map(|i| ElementSet::from_mask(n, questions[i]));
            return Ok((s.count_ones() as usize, ExplicitFamily::new(n, sets)));
        }
    }
    unreachable!("all questions together hit every dyadic distribution")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoReport {
    pub n: usize,
    /// Minimum over dyadic distributions of the maximum relative density
    /// of their splitters.
    pub rho: BigRational,
    pub witness: DyadicMeasure,
}

/// Densities are invariant under relabelling, so one distribution per
/// multiset of masses suffices.
pub fn rho(n: usize) -> Result<RhoReport> {
    if !(2..=MAX_ENUMERATION_N).contains(&n) {
        return Err(Error::TooLarge {
            what: "rho enumeration",
            limit: MAX_ENUMERATION_N,
        });
    }
    let mut best: Option<(BigRational, DyadicMeasure)> = None;
    for mu in super::dyadic::enumerate_dyadic(n, true)? {
        let r = mrd(&splitters(&mu)?).max;
        if best.as_ref().is_none_or(|(b, _)| &r < b) {
            best = Some((r, mu));
        }
    }
    let (rho, witness) = best.expect("n >= 2 has a dyadic distribution");
    Ok(RhoReport { n, rho, witness })
}

#[derive(Debug, Clone)]
pub struct SampledHitter {
    pub family: ExplicitFamily,
    /// `M = 1 / rho(n)`.
    pub m: BigRational,
    /// Sets drawn for each size `1..n`.
    pub per_size: usize,
    pub report: HitterReport,
}

/// Draws `ceil(M n log2 n)` uniform `i`-subsets for each `i` in `1..n` and
/// checks whether the result is a dyadic hitter.
pub fn sample_hitter(n: usize, seed: u64) -> Result<SampledHitter> {
    let r = rho(n)?;
    let m = BigRational::from_integer(BigInt::from(1)) / r.rho;
    let per_size = (m.to_f64().expect("finite") * n as f64 * (n as f64).log2()).ceil() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sets = Vec::new();
    for size in 1..n {
        for _ in 0..per_size {
            sets.push(ElementSet::from_indices(n, sample(&mut rng, n, size)));
        }
    }
    let family = ExplicitFamily::new(n, sets);
    let report = is_dyadic_hitter(&family, n)?;
    Ok(SampledHitter {
        family,
        m,
        per_size,
        report,
    })
}

/// Exact `1 / rho(n)` lower bound on the size of a dyadic hitter.
pub fn hitter_lower_bound(n: usize) -> Result<BigRational> {
    let r = rho(n)?;
    if r.rho.is_zero() {
        return Err(Error::PreconditionViolated("rho is zero".into()));
    }
    Ok(BigRational::from_integer(BigInt::from(1)) / r.rho)
}
