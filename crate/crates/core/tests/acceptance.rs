//! Acceptance criteria 1-12. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use quiztree_core::analysis::numeric::f as revenue;
use quiztree_core::analysis::{
    enumerate_dyadic, exponent_calculus, gt_bound, hard_distribution, is_dyadic_hitter, min_dyadic_hitter, mrd,
    prolixity_lb_check, rho, splitters, tail,
};
use quiztree_core::sample::{sample, zipf, SampleFamily};
use quiztree_core::strategy::at::{build_at_tree, comparison_equality_family, AtParams};
use quiztree_core::strategy::cone::{cone_optimal_tree, ConeFamily};
use quiztree_core::strategy::prolixity::{
    build_tr_tree_audited, check_record, trial_seed, CyclicFamily, ProlixityParams,
};
use quiztree_core::strategy::vector::{build_vector_tree, vector_family};
use quiztree_core::{brute_force_opt, huffman, parse_rational, Distribution, QuestionFamily};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn entropy(d: &Distribution) -> f64 {
    d.weights_f64().iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

fn cost_f64(t: &quiztree_core::DecisionTree, d: &Distribution) -> f64 {
    t.cost(d).unwrap().to_f64().unwrap()
}

fn random_masses(rng: &mut ChaCha8Rng, n: usize, max: u64) -> Distribution {
    loop {
        let ms: Vec<u64> = (0..n).map(|_| rng.random_range(0..=max)).collect();
        if ms.iter().any(|&m| m > 0) {
            return Distribution::from_u64_masses(&ms).unwrap();
        }
    }
}

fn at_harness(t: &str, slack: f64, seed: u64) -> Outcome {
    let params = AtParams::new(parse_rational(t).unwrap()).unwrap();
    let mut worst = f64::NEG_INFINITY;
    for (k, n) in [2usize, 3, 4, 8, 16, 64, 256].into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed + k as u64);
        let fam = comparison_equality_family(n);
        for j in 0..1000 {
            let family = if j % 2 == 0 { SampleFamily::UniformSimplex } else { SampleFamily::Zipf(1.0) };
            let d = sample(family, n, &mut rng).unwrap();
            let tree = build_at_tree(&d, &params);
            let report = tree.validate(&d, Some(&fam));
            ensure(report.is_valid(), || format!("n = {n}: invalid tree {:?}", report.violations))?;
            let red = cost_f64(&tree, &d) - entropy(&d);
            worst = worst.max(red);
            ensure(red <= slack + 1e-9, || format!("n = {n}: redundancy {red}"))?;
        }
    }
    Ok(format!("7000 trees, max redundancy {worst:.6}"))
}

fn ac1() -> Outcome {
    at_harness("3/10", 1.0, 100)
}

fn ac2() -> Outcome {
    at_harness("1", 2.0, 200)
}

fn ac3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(300);
    let mut brute = 0;
    for _ in 0..500 {
        let n = rng.random_range(1..=64);
        let d = random_masses(&mut rng, n, 1000);
        let tree = cone_optimal_tree(&d);
        ensure(tree.validate(&d, Some(&ConeFamily::new(n))).is_valid(), || format!("invalid cone tree for {d:?}"))?;
        let opt = huffman(&d).opt_cost;
        let cost = tree.cost(&d).unwrap();
        ensure(cost == opt, || format!("cone {cost} != huffman {opt}"))?;
        if n <= 6 {
            ensure(brute_force_opt(&d).unwrap() == opt, || format!("brute force disagrees on {d:?}"))?;
            brute += 1;
        }
    }
    Ok(format!("500 distributions exact, {brute} also brute-forced"))
}

fn ac4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(400);
    let mut worst = [f64::NEG_INFINITY; 2];
    for (ri, r) in [2.0f64, 3.0].into_iter().enumerate() {
        let k = r.floor() as usize;
        for n in [5usize, 16, 100, 1000] {
            let fam = vector_family(n, r).unwrap();
            let base = (1usize..).find(|&b| b.checked_pow(k as u32).is_none_or(|p| p >= n)).unwrap().max(2);
            let size = k * (2 * base - 3);
            ensure(fam.cardinality() == BigUint::from(size), || format!("family size at n = {n}, r = {r}"))?;
            ensure(size as f64 <= 2.0 * k as f64 * (n as f64).powf(1.0 / k as f64), || {
                format!("family too large at n = {n}, r = {r}")
            })?;
            for _ in 0..300 {
                let d = sample(SampleFamily::UniformSimplex, n, &mut rng).unwrap();
                let tree = build_vector_tree(&d, r).unwrap();
                ensure(tree.validate(&d, Some(&fam)).is_valid(), || format!("invalid vector tree, n = {n}"))?;
                let red = cost_f64(&tree, &d) - entropy(&d);
                worst[ri] = worst[ri].max(red);
                ensure(red <= k as f64 + 1e-9, || format!("n = {n}, r = {r}: redundancy {red}"))?;
            }
        }
    }
    Ok(format!("max redundancy {:.4} (r=2), {:.4} (r=3)", worst[0], worst[1]))
}

fn ac5() -> Outcome {
    let a = gt_bound(0.3, 64).unwrap();
    let b = gt_bound(0.294, 64).unwrap();
    ensure((a.value + 0.0312).abs() <= 5e-3, || format!("gt(0.3) = {}", a.value))?;
    ensure((b.value + 0.0899).abs() <= 5e-3, || format!("gt(0.294) = {}", b.value))?;
    ensure(a.tail_bound <= 1e-9 && b.tail_bound <= 1e-9, || "tail bound too loose".into())?;
    let worst = (0..10_000)
        .map(|i| revenue(0.23 + 0.77 * i as f64 / 9_999.0))
        .fold(f64::NEG_INFINITY, f64::max);
    ensure(worst <= 1e-12, || format!("f positive on the grid: {worst}"))?;
    Ok(format!("gt(0.3) = {:.7}, gt(0.294) = {:.7}, max f = {worst:.3e}", a.value, b.value))
}

fn ac6() -> Outcome {
    let e = exponent_calculus();
    ensure((e.eps_star - 0.2).abs() <= 1e-9, || format!("eps* = {}", e.eps_star))?;
    ensure((e.value - 1.25).abs() <= 1e-12, || format!("value = {}", e.value))?;
    ensure((e.beta0 - 0.27052059413118146).abs() <= 1e-9, || format!("beta0 = {}", e.beta0))?;
    ensure((e.l_beta0 - 1.23214280723432).abs() <= 1e-9, || format!("L(beta0) = {}", e.l_beta0))?;
    Ok(format!("eps* = {:.12}, beta0 = {:.15}, L = {:.14}", e.eps_star, e.beta0, e.l_beta0))
}

fn ac7() -> Outcome {
    let mu = hard_distribution(&parse_rational("1/5").unwrap(), 2).unwrap();
    ensure(mu.n() == 10, || "hard distribution is not on 10 points".into())?;
    let s = splitters(&mu).unwrap();
    let sizes: Vec<u32> = s.masks().iter().map(|m| m.count_ones()).collect();
    let twos = sizes.iter().filter(|&&k| k == 2).count();
    let eights = sizes.iter().filter(|&&k| k == 8).count();
    ensure(s.len() == 6 && twos == 3 && eights == 3, || format!("splitter sizes {sizes:?}"))?;
    let rep = mrd(&s);
    ensure(rep.max == parse_rational("1/15").unwrap(), || format!("mrd = {}", rep.max))?;
    Ok(format!("6 splitters (3 of size 2, 3 of size 8), mrd = {} at sizes {:?}", rep.max, rep.argmax))
}

fn ac8() -> Outcome {
    for n in 3..=10 {
        let r = is_dyadic_hitter(&ConeFamily::new(n), n).unwrap();
        ensure(r.hits, || format!("cone misses {:?} at n = {n}", r.counterexample))?;
    }
    let m2 = min_dyadic_hitter(2).unwrap().0;
    let m3 = min_dyadic_hitter(3).unwrap().0;
    ensure(m2 == 1 && m3 == 3, || format!("min hitters {m2}, {m3}"))?;
    for n in 2..=4 {
        let k = min_dyadic_hitter(n).unwrap().0;
        let lower = BigRational::one() / rho(n).unwrap().rho;
        ensure(BigRational::from_integer(BigInt::from(k)) >= lower, || format!("sandwich fails at n = {n}"))?;
    }
    Ok("cone hits for n = 3..10; min hitters 1, 3; sandwich holds for n = 2..4".into())
}

fn ac9() -> Outcome {
    let mut checked = 0usize;
    for n in 2..=7 {
        let full = (1u64 << n) - 1;
        for mu in enumerate_dyadic(n, false).unwrap() {
            let s = splitters(&mu).unwrap();
            let masks = s.masks();
            let t = tail(&mu);
            if !t.is_empty() {
                let tm = t.to_mask().unwrap();
                ensure(masks.iter().all(|&m| m & tm == 0 || m & tm == tm), || format!("tail split in {mu:?}"))?;
            }
            if mu.support_size() == n {
                let unit = mu.masses_u64(n as u32 - 1).unwrap();
                let mass = |m: u64| (0..n).filter(|&i| m >> i & 1 == 1).map(|i| unit[i]).sum::<u64>();
                for &a in masks {
                    ensure(masks.binary_search(&(full ^ a)).is_ok(), || format!("not closed in {mu:?}"))?;
                    ensure(masks.iter().all(|&b| a == b || a & b != a), || format!("not an antichain in {mu:?}"))?;
                }
                for m in 0..=full {
                    if mass(m) > 1 << (n - 2) {
                        ensure(masks.iter().any(|&a| a & m == a), || format!("not maximal in {mu:?}"))?;
                    }
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} distributions"))
}

fn ac10() -> Outcome {
    let n = 64;
    let k = 3;
    let d = zipf(n, 1.0).unwrap();
    let fam = CyclicFamily::new(n, k);
    let pi = d.weights_f64();
    let opt = huffman(&d).opt_cost.to_f64().unwrap();
    let r = 0.5f64.powi(k as i32);
    let trials = 10_000u64;
    let mut costs = Vec::with_capacity(trials as usize);
    let mut updates = 0usize;
    let mut bad: Option<String> = None;
    for j in 0..trials {
        let params = ProlixityParams::new(k, trial_seed(42, j)).unwrap();
        let tree = build_tr_tree_audited(&d, params, &mut |rec, scale| {
            updates += 1;
            if let Err(e) = check_record(rec, scale) {
                bad.get_or_insert(e);
            }
        })
        .unwrap();
        if let Some(e) = bad.take() {
            return Err(format!("trial {j}: {e}"));
        }
        let report = tree.validate(&d, Some(&fam));
        ensure(report.is_valid(), || format!("trial {j}: {:?}", report.violations))?;
        let depths = tree.depths();
        costs.push((0..n).map(|i| pi[i] * depths[i].unwrap() as f64).sum::<f64>());
    }
    let m = costs.len() as f64;
    let mean = costs.iter().sum::<f64>() / m;
    let se = (costs.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (m - 1.0) / m).sqrt();
    let bound = opt + r + r * r;
    ensure(mean <= bound + 3.0 * se, || format!("mean cost {mean} > {bound} + 3 * {se}"))?;
    Ok(format!("mean cost {mean:.4} (se {se:.4}) vs Opt + r + r^2 = {bound:.4}; {updates} updates audited"))
}

fn ac11() -> Outcome {
    let mut counts = Vec::new();
    for n in [5, 6] {
        let rep = prolixity_lb_check(2, n, None).unwrap();
        ensure(rep.property_holds(), || format!("n = {n}: {:?}", rep.admissible))?;
        ensure(rep.opt_brute.as_ref() == Some(&rep.opt), || format!("n = {n}: optima disagree"))?;
        counts.push(format!("n={n}: {}/{} admissible", rep.admissible.len(), rep.questions_checked));
    }
    Ok(counts.join(", "))
}

fn ac12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1200);
    for _ in 0..500 {
        let n = rng.random_range(1..=6);
        let d = random_masses(&mut rng, n, 500);
        let h = huffman(&d).opt_cost;
        let b = brute_force_opt(&d).unwrap();
        ensure(h == b, || format!("{d:?}: huffman {h} vs brute force {b}"))?;
    }
    Ok("500 distributions".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, fn() -> Outcome); 12] = [
        ("AC1", "A_3/10 redundancy at most 1", ac1),
        ("AC2", "weight balancing redundancy at most 2", ac2),
        ("AC3", "cone trees are exactly optimal", ac3),
        ("AC4", "vector strategy redundancy and family size", ac4),
        ("AC5", "threshold game numerics", ac5),
        ("AC6", "exponent calculus", ac6),
        ("AC7", "hard distribution splitters and density", ac7),
        ("AC8", "dyadic hitters", ac8),
        ("AC9", "tails and maximal antichains", ac9),
        ("AC10", "prolixity strategy", ac10),
        ("AC11", "first questions of near-optimal trees", ac11),
        ("AC12", "Huffman against brute force", ac12),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {id} {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id} {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
