mod common;

use common::{count_matrix, int_matmul};
use dsq_core::generators::{cycle, random_consistent, random_regular, random_rotation_graph};
use dsq_core::rng::seeded;
use dsq_core::{GraphError, RotationGraph, Violation};
use proptest::prelude::*;

fn int_power(c: &[Vec<i64>], k: u32) -> Vec<Vec<i64>> {
    let n = c.len();
    let mut acc: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..k {
        acc = int_matmul(c, &acc);
    }
    acc
}

proptest! {
    #[test]
    fn generated_graphs_are_proper(n in 1usize..12, d in 1usize..6, seed in any::<u64>()) {
        let mut r = seeded(seed);
        let g = random_rotation_graph(&mut r, n, d);
        prop_assert!(g.validate().is_ok());
        let mut hit = vec![false; n * d];
        for v in 0..n {
            for i in 0..d {
                let (u, b) = g.rotate(v, i);
                prop_assert!(!hit[u * d + b]);
                hit[u * d + b] = true;
            }
        }
        prop_assert!(random_consistent(&mut r, n, d).is_consistent());
    }

    #[test]
    fn power_counts_match_matrix_power(n in 1usize..8, d in 1usize..4, k in 1u32..4, seed in any::<u64>()) {
        let g = random_rotation_graph(&mut seeded(seed), n, d);
        let p = g.power(k).unwrap();
        prop_assert_eq!(p.degree(), d.pow(k));
        prop_assert!(p.validate().is_ok());
        prop_assert_eq!(count_matrix(&p), int_power(&count_matrix(&g), k));
    }

    #[test]
    fn undirected_rotation_is_an_involution(n in 1usize..10, h in 1usize..4, seed in any::<u64>()) {
        let y = random_regular(&mut seeded(seed), n, h);
        let g = RotationGraph::from_undirected(&y).unwrap();
        prop_assert!(g.is_undirected());
        for v in 0..n {
            for i in 0..g.degree() {
                let (u, b) = g.rotate(v, i);
                prop_assert_eq!(g.rotate(u, b), (v, i));
            }
        }
        let c = count_matrix(&g);
        for a in 0..n {
            for b in 0..n {
                prop_assert_eq!(c[a][b], c[b][a]);
            }
        }
    }

    #[test]
    fn added_loops_keep_labels_and_count(n in 1usize..8, d in 1usize..4, s in 0usize..4, seed in any::<u64>()) {
        let g = random_rotation_graph(&mut seeded(seed), n, d);
        let l = g.add_self_loops(s);
        prop_assert_eq!(l.degree(), d + s);
        prop_assert!(l.validate().is_ok());
        for v in 0..n {
            prop_assert_eq!(l.self_loop_counts()[v], g.self_loop_counts()[v] + s);
            for i in 0..d {
                prop_assert_eq!(l.out_map(v, i), g.out_map(v, i));
            }
        }
    }

    #[test]
    fn one_corrupted_in_label_is_caught(n in 2usize..8, d in 2usize..4, seed in any::<u64>(), slot in any::<prop::sample::Index>()) {
        let g = random_rotation_graph(&mut seeded(seed), n, d);
        let s = slot.index(n * d);
        let mut inl = g.in_table().to_vec();
        inl[s] = (inl[s] + 1) % d as u32;
        let bad = RotationGraph::new(n, d, g.out_table().to_vec(), inl, false);
        prop_assert!(bad.is_err());
    }
}

#[test]
fn cycle_squared() {
    let c4 = RotationGraph::from_undirected(&cycle(4)).unwrap();
    let c = count_matrix(&c4.power(2).unwrap());
    assert_eq!(c[0], vec![2, 0, 2, 0]);
    assert_eq!(c[1], vec![0, 2, 0, 2]);
}

#[test]
fn complete_with_loops_cubed() {
    let j = RotationGraph::complete_with_loops(2).power(3).unwrap();
    assert_eq!(j.degree(), 8);
    assert_eq!(count_matrix(&j), vec![vec![4, 4], vec![4, 4]]);
}

#[test]
fn construction_errors() {
    assert!(matches!(
        RotationGraph::new(2, 1, vec![0, 0], vec![0, 0], false),
        Err(GraphError::Improper(Violation::NotInRegular { vertex: 0, in_degree: 2 }))
    ));
    assert!(matches!(
        RotationGraph::new(2, 1, vec![0, 5], vec![0, 0], false),
        Err(GraphError::Improper(Violation::OutOfRange { vertex: 1, label: 0 }))
    ));
    assert_eq!(RotationGraph::new(0, 1, vec![], vec![], false), Err(GraphError::Empty));
    assert_eq!(RotationGraph::complete_with_loops(3).power(0), Err(GraphError::ZeroExponent));
}
