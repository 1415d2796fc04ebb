mod common;

use common::UnionFind;
use dsq_core::expansion::{edge_expansion_exact, edge_expansion_symmetric, subset_connected, ExpansionError};
use dsq_core::generators::{complete, cycle, random_consistent, random_regular, random_rotation_graph};
use dsq_core::rng::seeded;
use dsq_core::{BigInt, BigRational, RotationGraph};
use proptest::prelude::*;

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn enumerators_agree(n in 2usize..11, d in 1usize..4, seed in any::<u64>()) {
        let mut r = seeded(seed);
        for g in [random_rotation_graph(&mut r, n, d), random_consistent(&mut r, n, d)] {
            let exact = edge_expansion_exact(&g).unwrap();
            let (sym, _) = edge_expansion_symmetric(&g).unwrap();
            prop_assert_eq!(&exact.epsilon, &sym);
            prop_assert!(2 * exact.witness_set.len() <= n);
            prop_assert_eq!(exact.cut_size, dsq_core::expansion::cut_size(&g, &exact.witness_set));
        }
    }

    #[test]
    fn cut_test_matches_union_find(n in 2usize..11, seed in any::<u64>()) {
        let mut r = seeded(seed);
        // a 2-regular multigraph is a union of cycles, often several
        let y = random_regular(&mut r, n, 1);
        let g = RotationGraph::from_undirected(&y).unwrap();
        let mut uf = UnionFind::of_graph(&y);
        let root = uf.find(0);
        let one = (0..n).all(|v| uf.find(v) == root);
        prop_assert_eq!(subset_connected(&g).unwrap(), one);
        prop_assert_eq!(edge_expansion_exact(&g).unwrap().epsilon == rat(0, 1), !one);
    }
}

#[test]
fn frozen_values() {
    let c6 = RotationGraph::from_undirected(&cycle(6)).unwrap();
    assert_eq!(edge_expansion_exact(&c6).unwrap().epsilon, rat(1, 3));
    let k4 = RotationGraph::from_undirected(&complete(4)).unwrap();
    assert_eq!(edge_expansion_exact(&k4).unwrap().epsilon, rat(2, 3));
    let k5 = RotationGraph::from_undirected(&complete(5)).unwrap();
    assert_eq!(edge_expansion_exact(&k5).unwrap().epsilon, rat(3, 4));
}

#[test]
fn size_limits() {
    assert_eq!(edge_expansion_exact(&RotationGraph::single_vertex(2)), Err(ExpansionError::TooFewVertices));
    let big = RotationGraph::from_undirected(&cycle(25)).unwrap();
    assert!(matches!(edge_expansion_exact(&big), Err(ExpansionError::TooLargeForEnumeration { n: 25, .. })));
}
