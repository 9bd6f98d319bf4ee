//! `quiztree verify`: exact checks of the combinatorial and numeric facts
//! the strategies rest on. Each suite is a list of named checks.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use quiztree_core::analysis::numeric::f as revenue;
use quiztree_core::analysis::{
    enumerate_dyadic, exponent_calculus, gt_bound, hard_distribution, is_dyadic_hitter, min_dyadic_hitter, mrd,
    prolixity_lb_check, rho, sample_hitter, splitters, tail,
};
use quiztree_core::split::{dyadic_prefix_split, dyadic_suffix_split};
use quiztree_core::strategy::at::comparison_equality_family;
use quiztree_core::strategy::cone::{cone_optimal_tree, ConeFamily};
use quiztree_core::{huffman, parse_rational, Distribution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Neatsum,
    Hitter,
    Cone,
    Gt,
    Mrd,
    Tail,
    Lbfamily,
    Exponents,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Neatsum,
        Suite::Hitter,
        Suite::Cone,
        Suite::Gt,
        Suite::Mrd,
        Suite::Tail,
        Suite::Lbfamily,
        Suite::Exponents,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Neatsum => "neatsum",
            Suite::Hitter => "hitter",
            Suite::Cone => "cone",
            Suite::Gt => "gt",
            Suite::Mrd => "mrd",
            Suite::Tail => "tail",
            Suite::Lbfamily => "lbfamily",
            Suite::Exponents => "exponents",
        }
    }

    /// Largest n the enumeration-based checks use unless overridden.
    pub fn default_max_n(self) -> usize {
        match self {
            Suite::Neatsum => 8,
            Suite::Hitter => 8,
            Suite::Cone => 10,
            Suite::Tail | Suite::Mrd => 7,
            Suite::Lbfamily => 10,
            Suite::Gt | Suite::Exponents => 0,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "[{tag}] {}: {}", c.name, c.detail)?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        write!(f, "{}: {} checks, {failed} failed", self.suite, self.checks.len())
    }
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Collector(Vec<Check>);

impl Collector {
    fn run(&mut self, name: impl Into<String>, check: impl FnOnce() -> Outcome) {
        let (passed, detail) = match check() {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.0.push(Check {
            name: name.into(),
            passed,
            detail,
        });
    }
}

pub fn run(suite: Suite, max_n: Option<usize>) -> SuiteReport {
    let top = max_n.unwrap_or(suite.default_max_n());
    let mut c = Collector(Vec::new());
    match suite {
        Suite::Neatsum => {
            for n in 1..=top {
                c.run(format!("prefix and suffix splits, n = {n}"), || neatsum(n));
            }
        }
        Suite::Hitter => hitter(&mut c, top),
        Suite::Cone => {
            for n in 2..=top.min(10) {
                c.run(format!("cone family is a dyadic hitter, n = {n}"), || {
                    let r = is_dyadic_hitter(&ConeFamily::new(n), n).map_err(|e| e.to_string())?;
                    ensure(r.hits, || format!("misses {:?}", r.counterexample))?;
                    Ok("hits every non-constant dyadic distribution".into())
                });
            }
            c.run("cone tree cost equals Huffman cost", cone_vs_huffman);
        }
        Suite::Gt => {
            for (t, quoted) in [(0.3, -0.0312), (0.294, -0.0899)] {
                c.run(format!("series bound at t = {t}"), || {
                    let b = gt_bound(t, 64).map_err(|e| e.to_string())?;
                    ensure((b.value - quoted).abs() <= 5e-3, || format!("value {} vs {quoted}", b.value))?;
                    ensure(b.tail_bound <= 1e-9, || format!("tail bound {:e}", b.tail_bound))?;
                    Ok(format!("{:.7} (tail <= {:.1e})", b.value, b.tail_bound))
                });
            }
            c.run("f <= 0 on [0.23, 1]", || {
                let worst = (0..10_000)
                    .map(|i| revenue(0.23 + 0.77 * i as f64 / 9_999.0))
                    .fold(f64::NEG_INFINITY, f64::max);
                ensure(worst <= 1e-12, || format!("max f = {worst}"))?;
                Ok(format!("max f = {worst:.3e}"))
            });
        }
        Suite::Exponents => c.run("exponent calculus", || {
            let e = exponent_calculus();
            ensure((e.eps_star - 0.2).abs() <= 1e-9, || format!("eps* = {}", e.eps_star))?;
            ensure((e.value - 1.25).abs() <= 1e-12, || format!("value = {}", e.value))?;
            ensure((e.beta0 - 0.27052059413118146).abs() <= 1e-9, || format!("beta0 = {}", e.beta0))?;
            ensure((e.l_beta0 - 1.23214280723432).abs() <= 1e-9, || format!("L(beta0) = {}", e.l_beta0))?;
            Ok(format!(
                "eps* = {:.12}, value = {:.12}, beta0 = {:.15}, L(beta0) = {:.14}",
                e.eps_star, e.value, e.beta0, e.l_beta0
            ))
        }),
        Suite::Mrd => {
            c.run("hard distribution eps = 1/5, a = 2", || {
                let mu = hard_distribution(&parse_rational("1/5").expect("literal"), 2).map_err(|e| e.to_string())?;
                let s = splitters(&mu).map_err(|e| e.to_string())?;
                let sizes: Vec<u32> = s.masks().iter().map(|m| m.count_ones()).collect();
                let count = |k| sizes.iter().filter(|&&x| x == k).count();
                ensure(s.len() == 6 && count(2) == 3 && count(8) == 3, || format!("splitter sizes {sizes:?}"))?;
                let rep = mrd(&s);
                ensure(rep.max == parse_rational("1/15").expect("literal"), || format!("mrd = {}", rep.max))?;
                Ok(format!("6 splitters, mrd = {}", rep.max))
            });
            for n in 2..=top {
                c.run(format!("rho witness attains rho, n = {n}"), || {
                    let r = rho(n).map_err(|e| e.to_string())?;
                    let s = splitters(&r.witness).map_err(|e| e.to_string())?;
                    let m = mrd(&s).max;
                    ensure(m == r.rho, || format!("witness mrd {m} vs rho {}", r.rho))?;
                    Ok(format!("rho = {}", r.rho))
                });
            }
        }
        Suite::Tail => {
            for n in 2..=top {
                c.run(format!("tail containment and maximal antichain, n = {n}"), || tail_suite(n));
            }
        }
        Suite::Lbfamily => {
            for (k, n) in [(2u32, 5usize), (2, 6), (2, 7), (3, 9), (3, 10)] {
                if n > top {
                    continue;
                }
                c.run(format!("admissible first questions, k = {k}, n = {n}"), || {
                    let rep = prolixity_lb_check(k, n, None).map_err(|e| e.to_string())?;
                    ensure(rep.property_holds(), || format!("violating questions: {:?}", rep.admissible))?;
                    if let Some(b) = &rep.opt_brute {
                        ensure(b == &rep.opt, || format!("Huffman {} vs brute force {b}", rep.opt))?;
                    }
                    Ok(format!("{} of {} first questions admissible", rep.admissible.len(), rep.questions_checked))
                });
            }
        }
    }
    let passed = c.0.iter().all(|x| x.passed);
    SuiteReport {
        suite: suite.name().to_string(),
        passed,
        checks: c.0,
    }
}

/// Every sublist prefix of every sorted dyadic list splits as promised.
fn neatsum(n: usize) -> Outcome {
    let mut cases = 0usize;
    for mu in enumerate_dyadic(n, true).map_err(|e| e.to_string())? {
        let mut exps: Vec<u32> = mu.exponents().iter().flatten().copied().collect();
        exps.sort_unstable();
        let scale = *exps.last().expect("a distribution has support");
        let unit = |e: u32| 1u64 << (scale - e);
        for len in 1..=exps.len() {
            let list = &exps[..len];
            let total: u64 = list.iter().map(|&e| unit(e)).sum();
            for a in 0..=scale {
                let target = unit(a);
                if a <= list[0] && total >= target {
                    let m = dyadic_prefix_split(list, a).map_err(|e| format!("{list:?}, a = {a}: {e}"))?;
                    let got: u64 = list[..m].iter().map(|&e| unit(e)).sum();
                    ensure(got == target, || format!("{list:?}, a = {a}: prefix of mass {got}/{target}"))?;
                    cases += 1;
                }
                if total.is_multiple_of(target) && list[len - 1] >= a {
                    let s = dyadic_suffix_split(list, a).map_err(|e| format!("{list:?}, a = {a}: {e}"))?;
                    let got: u64 = list[s..].iter().map(|&e| unit(e)).sum();
                    ensure(got == target, || format!("{list:?}, a = {a}: suffix of mass {got}/{target}"))?;
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} splits"))
}

fn hitter(c: &mut Collector, top: usize) {
    for (n, want) in [(2usize, 1usize), (3, 3)] {
        c.run(format!("smallest hitter, n = {n}"), || {
            let (k, _) = min_dyadic_hitter(n).map_err(|e| e.to_string())?;
            ensure(k == want, || format!("found {k}, expected {want}"))?;
            Ok(format!("{k} questions"))
        });
    }
    for n in 2..=4.min(top) {
        c.run(format!("smallest hitter is at least 1/rho, n = {n}"), || {
            let (k, _) = min_dyadic_hitter(n).map_err(|e| e.to_string())?;
            let r = rho(n).map_err(|e| e.to_string())?.rho;
            let lower = BigRational::one() / &r;
            ensure(BigRational::from_integer(BigInt::from(k)) >= lower, || format!("{k} < {lower}"))?;
            Ok(format!("{k} >= {lower}"))
        });
    }
    for n in 2..=top.min(10) {
        // Informational: whether comparison and equality questions hit.
        c.run(format!("comparison and equality questions, n = {n}"), || {
            let r = is_dyadic_hitter(&comparison_equality_family(n), n).map_err(|e| e.to_string())?;
            Ok(match r.counterexample {
                None => "a dyadic hitter".into(),
                Some(mu) => format!("not a hitter; missed {:?}", mu.exponents()),
            })
        });
    }
    for n in 3..=top.min(7) {
        // A random family is a hitter only with high probability, so a few
        // seeds are tried before giving up.
        c.run(format!("random family of the sampled size hits, n = {n}"), || {
            for seed in 1..=5u64 {
                let s = sample_hitter(n, seed).map_err(|e| e.to_string())?;
                if s.report.hits {
                    return Ok(format!("seed {seed}: {} sets per size, M = {}", s.per_size, s.m));
                }
            }
            Err("no seed in 1..=5 produced a hitter".into())
        });
    }
}

fn cone_vs_huffman() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..200 {
        let n = rng.random_range(1..=64);
        let masses: Vec<u64> = (0..n).map(|_| rng.random_range(0..=1000)).collect();
        if masses.iter().all(|&m| m == 0) {
            continue;
        }
        let d = Distribution::from_u64_masses(&masses).map_err(|e| e.to_string())?;
        let cone = cone_optimal_tree(&d).cost(&d).map_err(|e| e.to_string())?;
        let opt = huffman(&d).opt_cost;
        ensure(cone == opt, || format!("n = {n}: cone {cone} vs Huffman {opt}"))?;
    }
    Ok("200 random distributions, exact equality".into())
}

fn tail_suite(n: usize) -> Outcome {
    let full = (1u64 << n) - 1;
    let mut count = 0usize;
    for mu in enumerate_dyadic(n, false).map_err(|e| e.to_string())? {
        let s = splitters(&mu).map_err(|e| e.to_string())?;
        let masks = s.masks();
        let t = tail(&mu);
        if !t.is_empty() {
            let tm = t.to_mask().expect("small n");
            ensure(masks.iter().all(|&m| m & tm == 0 || m & tm == tm), || {
                format!("a splitter cuts the tail of {:?}", mu.exponents())
            })?;
        }
        if mu.support_size() == n {
            let unit = mu.masses_u64(n as u32 - 1).expect("small n");
            let mass = |m: u64| (0..n).filter(|&i| m >> i & 1 == 1).map(|i| unit[i]).sum::<u64>();
            let half = 1u64 << (n - 2);
            for &a in masks {
                ensure(masks.binary_search(&(full ^ a)).is_ok(), || {
                    format!("not closed under complement: {:?}", mu.exponents())
                })?;
                ensure(masks.iter().all(|&b| a == b || a & b != a), || {
                    format!("not an antichain: {:?}", mu.exponents())
                })?;
            }
            for m in 0..=full {
                if mass(m) > half {
                    ensure(masks.iter().any(|&a| a & m == a), || format!("not maximal: {:?}", mu.exponents()))?;
                }
            }
        }
        count += 1;
    }
    Ok(format!("{count} distributions"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        for (s, n) in [(Suite::Neatsum, 5), (Suite::Tail, 4), (Suite::Mrd, 4), (Suite::Gt, 0), (Suite::Exponents, 0)] {
            let r = run(s, Some(n));
            assert!(r.passed, "{r}");
        }
    }
}
