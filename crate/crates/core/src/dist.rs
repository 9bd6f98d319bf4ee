//! Exact probability distributions and dyadic measures over `X_n`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::set::ElementSet;

/// A probability distribution with exact rational weights.
///
/// Weights are also kept as integer numerators over their least common
/// denominator so strategies can compare masses without renormalizing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    weights: Vec<BigRational>,
    numerators: Vec<BigUint>,
    denominator: BigUint,
}

impl Distribution {
    pub fn new(weights: Vec<BigRational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution("no elements".into()));
        }
        if let Some(i) = weights.iter().position(|w| w < &BigRational::zero()) {
            return Err(Error::InvalidDistribution(format!(
                "weight of x_{} is negative",
                i + 1
            )));
        }
        let total: BigRational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {total}, not 1"
            )));
        }
        let den = weights
            .iter()
            .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let numerators = weights
            .iter()
            .map(|w| {
                (w.numer() * (&den / w.denom()))
                    .to_biguint()
                    .expect("nonnegative")
            })
            .collect();
        Ok(Distribution {
            weights,
            numerators,
            denominator: den.to_biguint().expect("positive"),
        })
    }

    /// Builds a distribution proportional to nonnegative integer masses.
    pub fn from_masses(masses: &[BigUint]) -> Result<Self> {
        let total: BigUint = masses.iter().sum();
        if total.is_zero() {
            return Err(Error::InvalidDistribution("all masses are zero".into()));
        }
        let total = BigInt::from(total);
        Self::new(
            masses
                .iter()
                .map(|m| BigRational::new(BigInt::from(m.clone()), total.clone()))
                .collect(),
        )
    }

    pub fn from_u64_masses(masses: &[u64]) -> Result<Self> {
        let m: Vec<BigUint> = masses.iter().map(|&x| BigUint::from(x)).collect();
        Self::from_masses(&m)
    }

    /// Parses weights written as `"p/q"` or integers.
    pub fn from_strs<S: AsRef<str>>(weights: &[S]) -> Result<Self> {
        let parsed = weights
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(parsed)
    }

    /// Rationalizes floating-point weights with denominator `2^32`, then
    /// renormalizes exactly. Used only by samplers.
    pub fn rationalize(ps: &[f64]) -> Result<Self> {
        let scale = (1u64 << 32) as f64;
        let total: f64 = ps.iter().sum();
        if !(total > 0.0) || ps.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::InvalidDistribution(
                "float weights must be finite, nonnegative, and not all zero".into(),
            ));
        }
        let mut masses: Vec<u64> = ps.iter().map(|p| (p / total * scale).round() as u64).collect();
        if masses.iter().all(|&m| m == 0) {
            let i = ps
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)
                .unwrap_or(0);
            masses[i] = 1;
        }
        Self::from_u64_masses(&masses)
    }

    pub fn uniform(n: usize) -> Self {
        Self::from_u64_masses(&vec![1; n]).expect("n >= 1")
    }

    pub fn point_mass(n: usize, i: usize) -> Self {
        let mut m = vec![0; n];
        m[i] = 1;
        Self::from_u64_masses(&m).expect("valid point mass")
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &BigRational {
        &self.weights[i]
    }

    /// Integer numerators over the common denominator.
    pub fn numerators(&self) -> &[BigUint] {
        &self.numerators
    }

    pub fn denominator(&self) -> &BigUint {
        &self.denominator
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| !self.numerators[i].is_zero()).collect()
    }

    pub fn support_set(&self) -> ElementSet {
        ElementSet::from_indices(self.n(), self.support())
    }

    pub fn mass_of(&self, set: &ElementSet) -> BigRational {
        set.iter().map(|i| self.weights[i].clone()).sum()
    }

    /// Index of the most probable element; ties go to the smallest index.
    pub fn max_index(&self) -> usize {
        let mut best = 0;
        for i in 1..self.n() {
            if self.numerators[i] > self.numerators[best] {
                best = i;
            }
        }
        best
    }

    pub fn is_point_mass(&self) -> bool {
        self.support().len() == 1
    }

    pub fn weights_f64(&self) -> Vec<f64> {
        self.weights
            .iter()
            .map(|w| w.to_f64().unwrap_or(0.0))
            .collect()
    }

    /// Base-2 Shannon entropy.
    pub fn entropy(&self) -> f64 {
        entropy_of(&self.weights_f64())
    }

    /// The weights as a dyadic measure, if every weight is 0 or a power of two.
    pub fn as_dyadic(&self) -> Option<DyadicMeasure> {
        let exps = self
            .weights
            .iter()
            .map(|w| {
                if w.is_zero() {
                    return Some(None);
                }
                if !w.numer().is_one() {
                    return None;
                }
                let d = w.denom().to_biguint()?;
                let bits = d.bits();
                (d == BigUint::one() << (bits - 1)).then(|| Some((bits - 1) as u32))
            })
            .collect::<Option<Vec<_>>>()?;
        Some(DyadicMeasure::new(exps))
    }
}

/// Entropy of a (float) probability vector; zero terms contribute nothing.
pub fn entropy_of(ps: &[f64]) -> f64 {
    ps.iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Binary entropy `h(p)`.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// A measure whose weights are each `0` or `2^-a`.
///
/// Serves both as a dyadic distribution (total exactly 1) and as the dyadic
/// sub-distribution maintained by the randomized prolixity strategy.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DyadicMeasure {
    exponents: Vec<Option<u32>>,
}

impl DyadicMeasure {
    pub fn new(exponents: Vec<Option<u32>>) -> Self {
        DyadicMeasure { exponents }
    }

    /// A full-support measure from exponents `a_i`, i.e. weights `2^-a_i`.
    pub fn from_exponents(exps: &[u32]) -> Self {
        Self::new(exps.iter().map(|&a| Some(a)).collect())
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[Option<u32>] {
        &self.exponents
    }

    pub fn exponent(&self, i: usize) -> Option<u32> {
        self.exponents[i]
    }

    pub fn weight(&self, i: usize) -> BigRational {
        match self.exponents[i] {
            None => BigRational::zero(),
            Some(a) => BigRational::new(BigInt::one(), BigInt::one() << a),
        }
    }

    pub fn total(&self) -> BigRational {
        (0..self.n()).map(|i| self.weight(i)).sum()
    }

    pub fn is_distribution(&self) -> bool {
        self.total().is_one()
    }

    /// Not a point mass (a constant random variable).
    pub fn is_non_constant(&self) -> bool {
        self.support_size() >= 2
    }

    pub fn support_size(&self) -> usize {
        self.exponents.iter().filter(|e| e.is_some()).count()
    }

    pub fn max_exponent(&self) -> Option<u32> {
        self.exponents.iter().flatten().copied().max()
    }

    /// Integer masses at scale `2^scale`, i.e. `2^(scale - a_i)`.
    ///
    /// Returns `None` if some exponent exceeds `scale` or `scale >= 64`.
    pub fn masses_u64(&self, scale: u32) -> Option<Vec<u64>> {
        if scale >= 64 {
            return None;
        }
        self.exponents
            .iter()
            .map(|e| match e {
                None => Some(0),
                Some(a) if *a <= scale => Some(1u64 << (scale - a)),
                Some(_) => None,
            })
            .collect()
    }

    /// For a dyadic distribution, `H = sum a_i 2^-a_i` exactly.
    pub fn entropy_exact(&self) -> BigRational {
        (0..self.n())
            .map(|i| match self.exponents[i] {
                None => BigRational::zero(),
                Some(a) => self.weight(i) * BigRational::from_integer(BigInt::from(a)),
            })
            .sum()
    }

    pub fn to_distribution(&self) -> Result<Distribution> {
        Distribution::new((0..self.n()).map(|i| self.weight(i)).collect())
    }

    pub fn mass_of(&self, set: &ElementSet) -> BigRational {
        set.iter().map(|i| self.weight(i)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(ws: &[&str]) -> Distribution {
        Distribution::from_strs(ws).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert!((Distribution::uniform(4).entropy() - 2.0).abs() < 1e-12);
        assert!((d(&["1/2", "1/4", "1/4"]).entropy() - 1.5).abs() < 1e-12);
        // -0.9 log2 0.9 - 2 * 0.05 log2 0.05, evaluated independently
        let direct = -(0.9f64 * 0.9f64.log2()) - 2.0 * (0.05f64 * 0.05f64.log2());
        let h = d(&["9/10", "1/20", "1/20"]).entropy();
        assert!((h - direct).abs() < 1e-12);
        assert!((h - 0.5690).abs() < 5e-5);
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(Distribution::from_strs(&["1/2", "1/3"]).is_err());
        assert!(Distribution::from_strs(&["3/2", "-1/2"]).is_err());
        assert!(Distribution::from_strs::<&str>(&[]).is_err());
        assert!(Distribution::from_strs(&["1/0"]).is_err());
    }

    #[test]
    fn common_denominator() {
        let p = d(&["1/2", "1/3", "1/6"]);
        assert_eq!(p.denominator(), &BigUint::from(6u32));
        let nums: Vec<u32> = p.numerators().iter().map(|x| x.to_u32().unwrap()).collect();
        assert_eq!(nums, vec![3, 2, 1]);
    }

    #[test]
    fn dyadic_detection() {
        let mu = d(&["1/2", "0", "1/4", "1/4"]).as_dyadic().unwrap();
        assert_eq!(mu.exponents(), &[Some(1), None, Some(2), Some(2)]);
        assert!(mu.is_distribution());
        assert_eq!(mu.entropy_exact(), BigRational::new(3.into(), 2.into()));
        assert!(d(&["2/5", "3/5"]).as_dyadic().is_none());
        assert!(d(&["1/3", "2/3"]).as_dyadic().is_none());
    }

    #[test]
    fn rationalize_sums_to_one() {
        let p = Distribution::rationalize(&[0.1, 0.2, 0.7]).unwrap();
        let total: BigRational = p.weights().iter().sum();
        assert!(total.is_one());
        assert!((p.weights_f64()[2] - 0.7).abs() < 1e-9);
    }

    #[test]
    fn sub_distribution_total() {
        let m = DyadicMeasure::new(vec![Some(2), None, Some(3)]);
        assert_eq!(m.total(), BigRational::new(3.into(), 8.into()));
        assert!(!m.is_distribution());
        assert_eq!(m.masses_u64(3), Some(vec![2, 0, 1]));
        assert_eq!(m.masses_u64(2), None);
    }
}
