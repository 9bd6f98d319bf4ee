mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use quiztree_core::analysis::{
    enumerate_dyadic, is_dyadic_hitter, min_dyadic_hitter, rho, sample_hitter, splitters, tail,
};
use quiztree_core::family::{ComparisonEquality, ExplicitFamily};
use quiztree_core::{parse_rational, DyadicMeasure, ElementSet, QuestionFamily};
use rand::Rng;
use serde_json::Value;

fn goldens() -> Value {
    let text = include_str!("goldens/analysis.json");
    serde_json::from_str(text).unwrap()
}

fn masks(mu: &DyadicMeasure) -> Vec<u64> {
    splitters(mu).unwrap().masks().to_vec()
}

#[test]
fn rho_goldens() {
    let g = goldens();
    for n in 2..=10 {
        let want = parse_rational(g["rho"][n.to_string()].as_str().unwrap()).unwrap();
        assert_eq!(rho(n).unwrap().rho, want, "n = {n}");
    }
}

#[test]
fn min_hitter_goldens_and_sandwich() {
    let g = goldens();
    for n in 2..=5 {
        let (k, fam) = min_dyadic_hitter(n).unwrap();
        assert_eq!(k as u64, g["min_dyadic_hitter"][n.to_string()].as_u64().unwrap());
        assert!(is_dyadic_hitter(&fam, n).unwrap().hits);
        if n <= 4 {
            let lower = BigRational::from_integer(BigInt::from(1)) / rho(n).unwrap().rho;
            assert!(BigRational::from_integer(BigInt::from(k)) >= lower, "n = {n}");
        }
    }
}

#[test]
fn comparison_equality_hitter_goldens() {
    let g = goldens();
    for n in 2..=10 {
        let r = is_dyadic_hitter(&ComparisonEquality::new(n), n).unwrap();
        assert_eq!(r.hits, g["comparison_equality_is_hitter"][n.to_string()].as_bool().unwrap(), "n = {n}");
        if let Some(mu) = r.counterexample {
            let s = splitters(&mu).unwrap();
            for m in ComparisonEquality::new(n).members().unwrap() {
                assert!(!s.contains(&m) && !s.contains(&m.complement()));
            }
        }
    }
}

#[test]
fn splitters_respect_the_tail() {
    for n in 2..=8 {
        for mu in enumerate_dyadic(n, false).unwrap() {
            let t = tail(&mu);
            if t.is_empty() {
                continue;
            }
            let tm = t.to_mask().unwrap();
            for m in masks(&mu) {
                assert!(m & tm == 0 || m & tm == tm, "{mu:?}");
            }
        }
    }
}

#[test]
fn splitters_form_a_maximal_antichain() {
    for n in 2..=7 {
        for mu in enumerate_dyadic(n, false).unwrap().filter(|m| m.support_size() == n) {
            let s = masks(&mu);
            let full = (1u64 << n) - 1;
            let unit = mu.masses_u64(n as u32 - 1).unwrap();
            let mass = |m: u64| (0..n).filter(|&i| m >> i & 1 == 1).map(|i| unit[i]).sum::<u64>();
            for &a in &s {
                assert!(s.binary_search(&(full ^ a)).is_ok());
                for &b in &s {
                    assert!(a == b || a & b != a, "{a:b} inside {b:b}");
                }
            }
            for m in 0..=full {
                if mass(m) > 1 << (n - 2) {
                    assert!(s.iter().any(|&a| a & m == a), "{mu:?}: {m:b} contains no splitter");
                }
            }
        }
    }
}

#[test]
fn full_support_distributions_suffice() {
    let mut rng = common::rng(40);
    for n in 3..=7 {
        let all: Vec<(bool, Vec<u64>)> = enumerate_dyadic(n, false)
            .unwrap()
            .map(|mu| (mu.support_size() == n, masks(&mu)))
            .collect();
        let mut seen = [false; 2];
        for trial in 0..60 {
            let size = 1 + trial % (2 * n);
            let fam: Vec<u64> = (0..size).map(|_| rng.random_range(1..(1u64 << n) - 1)).collect();
            let hits = |s: &[u64]| fam.iter().any(|f| s.binary_search(f).is_ok());
            let on_full = all.iter().filter(|(f, _)| *f).all(|(_, s)| hits(s));
            let on_all = all.iter().all(|(_, s)| hits(s));
            assert_eq!(on_full, on_all, "n = {n}, family {fam:?}");
            let explicit = ExplicitFamily::new(n, fam.iter().map(|&m| ElementSet::from_mask(n, m)));
            assert_eq!(is_dyadic_hitter(&explicit, n).unwrap().hits, on_all);
            seen[on_all as usize] = true;
        }
        assert!(seen[0], "n = {n}: no failing family drawn");
    }
}

#[test]
fn sampled_hitters_small_n() {
    for n in 2..=5 {
        let s = sample_hitter(n, 1).unwrap();
        assert!(s.report.hits, "n = {n}");
    }
}
