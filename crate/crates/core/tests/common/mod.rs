//! Oracles written independently of the library routines they check.

#![allow(dead_code)]

use dsq_core::graph::{RotationGraph, UndirectedGraph};

pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    pub fn of_graph(g: &UndirectedGraph) -> Self {
        let mut uf = Self::new(g.n());
        for &(a, b) in g.edges() {
            uf.union(a, b);
        }
        uf
    }
}

/// Vertices reachable from `s` along out-edges, by breadth-first search
/// over the raw out-table.
pub fn bfs_component(g: &RotationGraph, s: usize) -> Vec<bool> {
    let d = g.degree();
    let out = g.out_table();
    let mut seen = vec![false; g.n()];
    let mut queue = std::collections::VecDeque::from([s]);
    seen[s] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &out[v * d..(v + 1) * d] {
            let w = w as usize;
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

pub fn bfs_connected(g: &RotationGraph) -> bool {
    bfs_component(g, 0).iter().all(|&b| b)
}

/// Edge-count matrix `c[i][j]` = number of edges `j -> i`, from the raw
/// out-table.
pub fn count_matrix(g: &RotationGraph) -> Vec<Vec<i64>> {
    let (n, d) = (g.n(), g.degree());
    let mut c = vec![vec![0i64; n]; n];
    for v in 0..n {
        for i in 0..d {
            c[g.out_map(v, i)][v] += 1;
        }
    }
    c
}

pub fn int_matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    (0..n).map(|i| (0..m).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect()).collect()
}

/// `sqrt` of the top eigenvalue of `M^T M` restricted to the complement of
/// the all-ones vector, by a dense symmetric eigensolve.
pub fn dense_mixing_ratio(g: &RotationGraph) -> f64 {
    let n = g.n();
    if n == 1 {
        return 0.0;
    }
    let c = count_matrix(g);
    let d = g.degree() as f64;
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| c[i][j] as f64 / d);
    let p = nalgebra::DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 } - 1.0 / n as f64);
    let a = &p * m.transpose() * &m * &p;
    let eig = nalgebra::SymmetricEigen::new(a);
    eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max).max(0.0).sqrt()
}

/// Every `(n, d)` rotation graph built from `d` seeded permutations of a
/// cyclic shift family, used when a test wants a deterministic sweep.
pub fn shift_graph(n: usize, d: usize) -> RotationGraph {
    let out = (0..n).flat_map(|v| (0..d).map(move |i| ((v + i * i + i) % n) as u32)).collect();
    let inl = (0..n * d).map(|s| (s % d) as u32).collect();
    RotationGraph::new(n, d, out, inl, false).unwrap()
}
