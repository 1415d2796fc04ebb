//! Seeded graph families used by the checks and tests.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::graph::{RotationGraph, UndirectedGraph};
use crate::rng::Rng;

/// Undirected cycle `C_n`, `n >= 3`.
pub fn cycle(n: usize) -> UndirectedGraph {
    UndirectedGraph::new(n, (0..n).map(|v| (v, (v + 1) % n)).collect()).expect("endpoints in range")
}

/// Undirected path on `n` vertices.
pub fn path(n: usize) -> UndirectedGraph {
    UndirectedGraph::new(n, (1..n).map(|v| (v - 1, v)).collect()).expect("endpoints in range")
}

/// Simple complete graph `K_n`.
pub fn complete(n: usize) -> UndirectedGraph {
    let mut e = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            e.push((a, b));
        }
    }
    UndirectedGraph::new(n, e).expect("endpoints in range")
}

/// Disjoint union; vertices of `b` are shifted by `a.n()`.
pub fn disjoint_union(a: &UndirectedGraph, b: &UndirectedGraph) -> UndirectedGraph {
    let off = a.n();
    let mut e = a.edges().to_vec();
    e.extend(b.edges().iter().map(|&(x, y)| (x + off, y + off)));
    UndirectedGraph::new(a.n() + b.n(), e).expect("endpoints in range")
}

/// `g` with `s` loops added at every vertex.
pub fn with_loops(g: &UndirectedGraph, s: usize) -> UndirectedGraph {
    let mut e = g.edges().to_vec();
    for v in 0..g.n() {
        e.extend(core::iter::repeat_n((v, v), s));
    }
    UndirectedGraph::new(g.n(), e).expect("endpoints in range")
}

/// Random `2h`-regular undirected multigraph: the union of `h` random
/// permutations, each contributing `{v, p(v)}`. A fixed point becomes two
/// loops so every permutation adds exactly 2 to each degree.
pub fn random_regular(rng: &mut Rng, n: usize, h: usize) -> UndirectedGraph {
    let mut e = Vec::with_capacity(n * h);
    let mut p: Vec<usize> = (0..n).collect();
    for _ in 0..h {
        p.shuffle(rng);
        for v in 0..n {
            if p[v] == v {
                e.push((v, v));
            }
            e.push((v, p[v]));
        }
    }
    UndirectedGraph::new(n, e).expect("endpoints in range")
}

/// Erdős–Rényi `G(n, p)`: simple, no loops.
pub fn random_gnp(rng: &mut Rng, n: usize, p: f64) -> UndirectedGraph {
    let mut e = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                e.push((a, b));
            }
        }
    }
    UndirectedGraph::new(n, e).expect("endpoints in range")
}

/// `d`-regular directed graph with a uniformly random bijection from
/// out-slots to in-slots. Generally neither consistent nor undirected.
pub fn random_rotation_graph(rng: &mut Rng, n: usize, d: usize) -> RotationGraph {
    let mut slots: Vec<u32> = (0..(n * d) as u32).collect();
    slots.shuffle(rng);
    let out = slots.iter().map(|&s| s / d as u32).collect();
    let inl = slots.iter().map(|&s| s % d as u32).collect();
    RotationGraph::new(n, d, out, inl, false).expect("a slot bijection is a proper labeling")
}

/// Consistently labeled `d`-regular digraph: label `i` follows the random
/// permutation `p_i` and arrives with label `i`.
pub fn random_consistent(rng: &mut Rng, n: usize, d: usize) -> RotationGraph {
    let mut out = vec![0u32; n * d];
    let mut p: Vec<u32> = (0..n as u32).collect();
    for i in 0..d {
        p.shuffle(rng);
        for v in 0..n {
            out[v * d + i] = p[v];
        }
    }
    let inl = (0..n * d).map(|s| (s % d) as u32).collect();
    RotationGraph::new(n, d, out, inl, false).expect("permutations give a proper labeling")
}

/// Consistent digraph whose label 0 is a loop at every vertex.
pub fn random_consistent_with_loop(rng: &mut Rng, n: usize, d: usize) -> RotationGraph {
    let base = random_consistent(rng, n, d);
    let mut out = base.out_table().to_vec();
    for v in 0..n {
        out[v * d] = v as u32;
    }
    RotationGraph::new(n, d, out, base.in_table().to_vec(), false).expect("identity is a permutation")
}

/// Random simple graph with `n` vertices and no isolated vertex: a `G(n,p)`
/// sample where each isolated vertex is joined to a random other vertex.
pub fn random_simple_no_isolated(rng: &mut Rng, n: usize, p: f64) -> UndirectedGraph {
    let g = random_gnp(rng, n, p);
    let mut e = g.edges().to_vec();
    let mut deg = g.degrees();
    for v in 0..n {
        if deg[v] == 0 && n > 1 {
            let mut w = rng.gen_range(0..n - 1);
            if w >= v {
                w += 1;
            }
            e.push((v, w));
            deg[v] += 1;
            deg[w] += 1;
        }
    }
    UndirectedGraph::new(n, e).expect("endpoints in range")
}
