//! Floating-point calculus behind the threshold game and the exponent
//! of optimal question sets.

use std::f64::consts::LOG2_E;

use crate::dist::binary_entropy;
use crate::error::{Error, Result};

/// Revenue at the end of the game: `1 - h(p) - p`.
pub fn f(p: f64) -> f64 {
    1.0 - binary_entropy(p) - p
}

/// `1 - h(x)`.
pub fn s(x: f64) -> f64 {
    1.0 - binary_entropy(x)
}

/// `s((1 + x) / 2) / x`, by its power series for small `x` where the direct
/// formula cancels badly.
pub fn big_s(x: f64) -> f64 {
    if x > 0.5 {
        return s((1.0 + x) / 2.0) / x;
    }
    let x2 = x * x;
    let mut pow = x;
    let mut sum = 0.0;
    for k in 1..200 {
        let k = k as f64;
        let term = LOG2_E / (2.0 * k * (2.0 * k - 1.0)) * pow;
        sum += term;
        if term < 1e-20 * sum.max(f64::MIN_POSITIVE) {
            break;
        }
        pow *= x2;
    }
    sum
}

/// `f(x) / x`.
pub fn big_f(x: f64) -> f64 {
    f(x) / x
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GtBound {
    pub t: f64,
    pub terms: usize,
    /// Truncated series plus the endpoint term.
    pub value: f64,
    /// Rigorous bound on the omitted terms of the series.
    pub tail_bound: f64,
}

impl GtBound {
    /// Upper bound on the full expression.
    pub fn upper(&self) -> f64 {
        self.value + self.tail_bound
    }
}

/// The bound on the threshold game's revenue:
/// `sum_m S(t / (2^m (1-t) + t)) + max(F(t), F(2t / (1-t)))`.
pub fn gt_bound(t: f64, terms: usize) -> Result<GtBound> {
    if !(t > 0.0 && t <= 1.0 / 3.0 + 1e-15) {
        return Err(Error::PreconditionViolated(format!("t = {t} is outside (0, 1/3]")));
    }
    if terms == 0 {
        return Err(Error::PreconditionViolated("need at least one term".into()));
    }
    let x = |m: usize| t / ((1.0 - t) * 2f64.powi(m as i32) + t);
    let series: f64 = (0..terms).map(|m| big_s(x(m))).sum();
    let endpoint = big_f(t).max(big_f((2.0 * t / (1.0 - t)).min(1.0)));
    // S(x) <= (log2 e / 2) x / (1 - x^2), and the x_m shrink geometrically
    let xn = x(terms);
    let geometric = t / (1.0 - t) * 2f64.powi(1 - terms as i32);
    let tail_bound = LOG2_E / 2.0 / (1.0 - xn * xn) * geometric;
    Ok(GtBound {
        t,
        terms,
        value: series + endpoint,
        tail_bound,
    })
}

/// `h(eps) - 2 eps`; `2^g` is the growth rate of the hard distribution's
/// splitter density bound.
pub fn g(eps: f64) -> f64 {
    binary_entropy(eps) - 2.0 * eps
}

/// `max_l 2^g(beta / 2^l)`.
pub fn big_l(beta: f64) -> f64 {
    let mut best = f64::NEG_INFINITY;
    let mut b = beta;
    for _ in 0..64 {
        best = best.max(g(b));
        b /= 2.0;
    }
    2f64.powf(best)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentCalculus {
    pub eps_star: f64,
    /// `2^g(eps_star)`.
    pub value: f64,
    /// The crossing `g(beta) = g(beta / 2)` in `[1/4, 1/2]`.
    pub beta0: f64,
    pub l_beta0: f64,
}

fn bisect(mut lo: f64, mut hi: f64, positive_at_lo: impl Fn(f64) -> bool) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if positive_at_lo(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn exponent_calculus() -> ExponentCalculus {
    // g'(e) = log2((1 - e) / e) - 2, decreasing
    let eps_star = bisect(1e-12, 1.0 - 1e-12, |e| ((1.0 - e) / e).log2() > 2.0);
    let beta0 = bisect(0.25, 0.5, |b| g(b) > g(b / 2.0));
    ExponentCalculus {
        eps_star,
        value: 2f64.powf(g(eps_star)),
        beta0,
        l_beta0: 2f64.powf(g(beta0)),
    }
}
