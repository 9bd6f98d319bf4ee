mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use quiztree_core::question::QuestionKind;
use quiztree_core::split::dyadic_prefix_split;
use quiztree_core::strategy::at::{build_at_tree, AtParams};
use quiztree_core::strategy::cone::cone_optimal_tree;
use quiztree_core::strategy::vector::build_vector_tree;
use quiztree_core::tree::Node;
use quiztree_core::{huffman, Element, Question};
use rand::Rng;

#[test]
fn cost_at_least_entropy_and_simulation_matches_depths() {
    let mut rng = common::rng(1);
    for _ in 0..150 {
        let n = rng.random_range(1..=24);
        let d = common::random_masses(&mut rng, n, 50);
        let trees = [
            huffman(&d).tree,
            build_at_tree(&d, &AtParams::default()),
            cone_optimal_tree(&d),
            build_vector_tree(&d, 2.0).unwrap(),
        ];
        for t in &trees {
            assert!(t.validate(&d, None).is_valid());
            let cost = t.cost(&d).unwrap();
            assert_eq!(cost, common::cost_by_walk(t, &d));
            assert!(cost.to_f64().unwrap() >= common::entropy(&d) - 1e-9);
            let depths = t.depths();
            for x in d.support() {
                let tr = t.simulate(Element(x)).unwrap();
                assert_eq!(Some(tr.depth()), depths[x]);
                for s in &tr.steps {
                    assert_eq!(s.answer, s.question.resolve().contains(x));
                }
            }
        }
    }
}

#[test]
fn prefix_split_sums_exactly() {
    let mut rng = common::rng(2);
    let mut checked = 0;
    while checked < 1000 {
        let len = rng.random_range(1..=12);
        let mut exps: Vec<u32> = (0..len).map(|_| rng.random_range(1..=10)).collect();
        exps.sort_unstable();
        let a = rng.random_range(0..=exps[0]);
        let total: BigRational = exps.iter().map(|&e| BigRational::new(BigInt::one(), BigInt::one() << e)).sum();
        let target = BigRational::new(BigInt::one(), BigInt::one() << a);
        if total < target {
            assert!(dyadic_prefix_split(&exps, a).is_err());
            continue;
        }
        let m = dyadic_prefix_split(&exps, a).unwrap();
        let prefix: BigRational = exps[..m].iter().map(|&e| BigRational::new(BigInt::one(), BigInt::one() << e)).sum();
        assert_eq!(prefix, target, "{exps:?} a = {a}");
        checked += 1;
    }
}

#[test]
fn resolution_is_idempotent() {
    let mut rng = common::rng(3);
    for _ in 0..200 {
        let n = rng.random_range(2..=30);
        let d = common::random_masses(&mut rng, n, 9);
        let t = build_vector_tree(&d, 3.0).unwrap();
        let c = cone_optimal_tree(&d);
        for tree in [&t, &c] {
            for node in tree.nodes() {
                if let Node::Ask { question, .. } = node {
                    let once = question.resolve();
                    let again = Question::explicit(once.clone()).resolve();
                    assert_eq!(once, again);
                    assert!(!matches!(question.kind(), QuestionKind::Explicit(_)));
                    for x in 0..n {
                        assert_eq!(question.contains(x), once.contains(x));
                    }
                }
            }
        }
    }
}
