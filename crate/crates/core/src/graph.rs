//! Regular multigraphs with proper labelings, stored as rotation maps.
//!
//! Slot `(v, i)` holds the head `v[i]` of the `i`-th outgoing edge of `v` and
//! the label that edge carries on arrival. A labeling is proper when every
//! `(w, j)` is the arrival slot of exactly one `(v, i)`.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::rational::RationalMatrix;

/// Default cap on `n * d` for explicitly stored graphs and on `n * n` for
/// dense matrices.
pub const DEFAULT_MAX_SLOTS: usize = 1 << 22;

/// First violated labeling invariant found by [`RotationGraph::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Slot `(vertex, label)` points at a vertex `>= n` or carries an
    /// in-label `>= d`.
    OutOfRange { vertex: usize, label: usize },
    /// `vertex` receives `in_degree != d` edges.
    NotInRegular { vertex: usize, in_degree: usize },
    /// Two edges arrive at `vertex` with the same in-label.
    InLabelCollision { vertex: usize, label: usize },
    /// The graph claims to be undirected but `(vertex, label)` is not
    /// mapped back to itself by two rotations.
    NotInvolution { vertex: usize, label: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OutOfRange { vertex, label } => {
                write!(f, "slot ({vertex},{label}) is out of range")
            }
            Violation::NotInRegular { vertex, in_degree } => {
                write!(f, "vertex {vertex} has in-degree {in_degree}")
            }
            Violation::InLabelCollision { vertex, label } => {
                write!(f, "in-label {label} used twice at vertex {vertex}")
            }
            Violation::NotInvolution { vertex, label } => {
                write!(f, "rotation is not an involution at ({vertex},{label})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("vertex {vertex} has degree {degree}, expected {expected}")]
    NotRegular { vertex: usize, degree: usize, expected: usize },
    #[error("endpoint {vertex} out of range for {n} vertices")]
    EndpointOutOfRange { vertex: usize, n: usize },
    #[error("table length {found} does not match n*d = {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("exponent must be at least 1")]
    ZeroExponent,
    #[error("degree {d}^{k} exceeds the materialization bound of {bound} slots")]
    DegreeOverflow { d: usize, k: u32, bound: usize },
    #[error("{requested} entries exceed the materialization bound of {bound}")]
    MaterializationBound { requested: u128, bound: usize },
    #[error("improper labeling: {0}")]
    Improper(Violation),
}

/// A `d`-regular directed multigraph on `0..n` with a proper labeling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationGraph {
    n: usize,
    d: usize,
    out: Vec<u32>,
    inl: Vec<u32>,
    undirected: bool,
}

impl RotationGraph {
    /// Builds a graph from its out-map and in-label tables (row-major by
    /// vertex) and validates it.
    pub fn new(n: usize, d: usize, out: Vec<u32>, in_label: Vec<u32>, undirected: bool) -> Result<Self, GraphError> {
        let g = Self::from_raw(n, d, out, in_label, undirected)?;
        g.validate().map_err(GraphError::Improper)?;
        Ok(g)
    }

    /// Same as [`RotationGraph::new`] without the labeling check. Table
    /// lengths are still enforced; use [`RotationGraph::validate`] afterwards.
    pub fn from_raw(
        n: usize,
        d: usize,
        out: Vec<u32>,
        in_label: Vec<u32>,
        undirected: bool,
    ) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if d == 0 {
            return Err(GraphError::ZeroDegree);
        }
        let slots = n
            .checked_mul(d)
            .filter(|&s| s <= u32::MAX as usize)
            .ok_or(GraphError::MaterializationBound { requested: n as u128 * d as u128, bound: u32::MAX as usize })?;
        for len in [out.len(), in_label.len()] {
            if len != slots {
                return Err(GraphError::LengthMismatch { expected: slots, found: len });
            }
        }
        Ok(Self { n, d, out, inl: in_label, undirected })
    }

    /// Each vertex has one edge to every vertex, `v[j] = j`. Adjacency `J_n`.
    pub fn complete_with_loops(n: usize) -> Self {
        let mut out = Vec::with_capacity(n * n);
        let mut inl = Vec::with_capacity(n * n);
        for v in 0..n {
            for j in 0..n {
                out.push(j as u32);
                inl.push(v as u32);
            }
        }
        Self { n, d: n, out, inl, undirected: true }
    }

    /// One vertex carrying `d` self-loops.
    pub fn single_vertex(d: usize) -> Self {
        Self { n: 1, d, out: vec![0; d], inl: (0..d as u32).collect(), undirected: true }
    }

    /// Converts a regular undirected multigraph. At each vertex the incident
    /// edges are sorted by (neighbor, position in the edge list) and labeled
    /// in that order; a loop is one incident edge and labels itself.
    pub fn from_undirected(g: &UndirectedGraph) -> Result<Self, GraphError> {
        let n = g.n();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let incident = g.incidence();
        let d = incident[0].len();
        for (v, list) in incident.iter().enumerate() {
            if list.len() != d {
                return Err(GraphError::NotRegular { vertex: v, degree: list.len(), expected: d });
            }
        }
        if d == 0 {
            return Err(GraphError::ZeroDegree);
        }
        // label of edge e at each endpoint
        let mut label_at: Vec<[u32; 2]> = vec![[u32::MAX; 2]; g.edges().len()];
        for (v, list) in incident.iter().enumerate() {
            for (pos, &(_, e)) in list.iter().enumerate() {
                let (a, _) = g.edges()[e];
                let side = if a == v { 0 } else { 1 };
                label_at[e][side] = pos as u32;
            }
        }
        let mut out = vec![0u32; n * d];
        let mut inl = vec![0u32; n * d];
        for (v, list) in incident.iter().enumerate() {
            for (pos, &(w, e)) in list.iter().enumerate() {
                let (a, b) = g.edges()[e];
                out[v * d + pos] = w as u32;
                inl[v * d + pos] = if a == b {
                    pos as u32
                } else if a == v {
                    label_at[e][1]
                } else {
                    label_at[e][0]
                };
            }
        }
        Ok(Self { n, d, out, inl, undirected: true })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// Whether the graph was built from an undirected one (the rotation map is
    /// then an involution).
    pub fn is_undirected(&self) -> bool {
        self.undirected
    }

    /// `v[i]`.
    #[inline]
    pub fn out_map(&self, v: usize, i: usize) -> usize {
        self.out[v * self.d + i] as usize
    }

    /// The label edge `(v, i)` carries at its head.
    #[inline]
    pub fn in_label(&self, v: usize, i: usize) -> usize {
        self.inl[v * self.d + i] as usize
    }

    /// `(v[i], in_label(v, i))`.
    #[inline]
    pub fn rotate(&self, v: usize, i: usize) -> (usize, usize) {
        let s = v * self.d + i;
        (self.out[s] as usize, self.inl[s] as usize)
    }

    /// Raw out-map table, row-major by vertex.
    pub fn out_table(&self) -> &[u32] {
        &self.out
    }

    /// Raw in-label table, row-major by vertex.
    pub fn in_table(&self) -> &[u32] {
        &self.inl
    }

    /// True when every edge keeps its label on arrival, i.e. each label class
    /// is a permutation of the vertices.
    pub fn is_consistent(&self) -> bool {
        (0..self.n * self.d).all(|s| self.inl[s] as usize == s % self.d)
    }

    /// Number of self-loops at each vertex.
    pub fn self_loop_counts(&self) -> Vec<usize> {
        (0..self.n).map(|v| (0..self.d).filter(|&i| self.out_map(v, i) == v).count()).collect()
    }

    /// Checks table ranges, in-regularity, distinct in-labels and, for
    /// undirected graphs, the involution property, in that order.
    pub fn validate(&self) -> Result<(), Violation> {
        let (n, d) = (self.n, self.d);
        for v in 0..n {
            for i in 0..d {
                let (w, j) = self.rotate(v, i);
                if w >= n || j >= d {
                    return Err(Violation::OutOfRange { vertex: v, label: i });
                }
            }
        }
        let mut indeg = vec![0usize; n];
        for &w in &self.out {
            indeg[w as usize] += 1;
        }
        if let Some((w, &k)) = indeg.iter().enumerate().find(|(_, &k)| k != d) {
            return Err(Violation::NotInRegular { vertex: w, in_degree: k });
        }
        let mut seen = vec![false; n * d];
        for s in 0..n * d {
            let t = self.out[s] as usize * d + self.inl[s] as usize;
            if seen[t] {
                return Err(Violation::InLabelCollision { vertex: t / d, label: t % d });
            }
            seen[t] = true;
        }
        if self.undirected {
            for v in 0..n {
                for i in 0..d {
                    let (w, j) = self.rotate(v, i);
                    if self.rotate(w, j) != (v, i) {
                        return Err(Violation::NotInvolution { vertex: v, label: i });
                    }
                }
            }
        }
        Ok(())
    }

    /// [`RotationGraph::validate`] as a report; a violation is the witness.
    pub fn validate_report(&self) -> crate::report::CheckReport {
        let mut rep = crate::report::CheckReport::new("validate");
        let res = self.validate();
        rep.require(res.is_ok(), || crate::report::Witness::Violation(res.clone().unwrap_err()));
        rep.fact("n", self.n).fact("degree", self.d);
        rep
    }

    /// Appends `s` self-loops with labels `d..d+s`, each arriving with its own
    /// label.
    pub fn add_self_loops(&self, s: usize) -> Self {
        let nd = self.d + s;
        let mut out = Vec::with_capacity(self.n * nd);
        let mut inl = Vec::with_capacity(self.n * nd);
        for v in 0..self.n {
            let row = v * self.d..(v + 1) * self.d;
            out.extend_from_slice(&self.out[row.clone()]);
            inl.extend_from_slice(&self.inl[row]);
            for l in self.d..nd {
                out.push(v as u32);
                inl.push(l as u32);
            }
        }
        Self { n: self.n, d: nd, out, inl, undirected: self.undirected }
    }

    /// `G^k` under the default slot bound.
    pub fn power(&self, k: u32) -> Result<Self, GraphError> {
        self.power_bounded(k, DEFAULT_MAX_SLOTS)
    }

    /// `G^k`: label `i_1 + d*i_2 + ... + d^(k-1)*i_k` walks `i_1` first; the
    /// in-label packs the per-step in-labels in reverse order, so the
    /// rotation of `G^k` is the step-wise rotation read backwards.
    pub fn power_bounded(&self, k: u32, max_slots: usize) -> Result<Self, GraphError> {
        if k == 0 {
            return Err(GraphError::ZeroExponent);
        }
        let overflow = GraphError::DegreeOverflow { d: self.d, k, bound: max_slots };
        let dk = self.d.checked_pow(k).ok_or(overflow.clone())?;
        if self.n.checked_mul(dk).is_none_or(|s| s > max_slots) {
            return Err(overflow);
        }
        let mut cur = self.clone();
        for _ in 1..k {
            cur = cur.then_step(self);
        }
        Ok(cur)
    }

    /// Walk in `self` (degree `a`) then one step in `step` (degree `b`); label
    /// `l + a*i`, in-label `j + b*l_in`.
    fn then_step(&self, step: &RotationGraph) -> Self {
        let (a, b) = (self.d, step.d);
        let nd = a * b;
        let mut out = vec![0u32; self.n * nd];
        let mut inl = vec![0u32; self.n * nd];
        for v in 0..self.n {
            for i in 0..b {
                for l in 0..a {
                    let (u, lin) = self.rotate(v, l);
                    let (w, j) = step.rotate(u, i);
                    let s = v * nd + l + a * i;
                    out[s] = w as u32;
                    inl[s] = (j + b * lin) as u32;
                }
            }
        }
        Self { n: self.n, d: nd, out, inl, undirected: self.undirected && step.undirected }
    }

    /// Unnormalized adjacency counts: entry `[i*n + j]` is the number of
    /// edges `j -> i`.
    pub fn adjacency_counts(&self) -> Vec<u64> {
        let n = self.n;
        let mut a = vec![0u64; n * n];
        for v in 0..n {
            for i in 0..self.d {
                a[self.out_map(v, i) * n + v] += 1;
            }
        }
        a
    }

    /// Adjacency matrix under the default bound; entry `(i, j)` counts edges
    /// `j -> i`, divided by `d` when `normalized`.
    pub fn to_adjacency(&self, normalized: bool) -> Result<RationalMatrix, GraphError> {
        self.to_adjacency_bounded(normalized, DEFAULT_MAX_SLOTS)
    }

    pub fn to_adjacency_bounded(&self, normalized: bool, max_entries: usize) -> Result<RationalMatrix, GraphError> {
        let n = self.n;
        if n.checked_mul(n).is_none_or(|s| s > max_entries) {
            return Err(GraphError::MaterializationBound { requested: n as u128 * n as u128, bound: max_entries });
        }
        let d = BigInt::from(self.d);
        let entries = self
            .adjacency_counts()
            .into_iter()
            .map(|c| {
                if normalized {
                    BigRational::new(BigInt::from(c), d.clone())
                } else {
                    BigRational::from_integer(BigInt::from(c))
                }
            })
            .collect();
        Ok(RationalMatrix::from_entries(n, n, entries).expect("square adjacency"))
    }

    /// Vertices reachable from `x` along directed edges.
    pub fn reachable_from(&self, x: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([x]);
        seen[x] = true;
        while let Some(v) = queue.pop_front() {
            for i in 0..self.d {
                let w = self.out_map(v, i);
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Strong connectivity; for regular digraphs this coincides with weak
    /// connectivity.
    pub fn is_connected(&self) -> bool {
        self.reachable_from(0).iter().all(|&b| b)
    }
}

/// An undirected multigraph given as an edge list; `(v, v)` is a loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl UndirectedGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        for &(a, b) in &edges {
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::EndpointOutOfRange { vertex: v, n });
                }
            }
        }
        Ok(Self { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Degree of each vertex; a loop counts once.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            if a != b {
                deg[b] += 1;
            }
        }
        deg
    }

    /// Per vertex, `(neighbor, edge index)` pairs in label order.
    pub(crate) fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut inc = vec![Vec::new(); self.n];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            inc[a].push((b, e));
            if a != b {
                inc[b].push((a, e));
            }
        }
        for list in &mut inc {
            list.sort_unstable();
        }
        inc
    }

    /// Sorted neighbor lists, repeated for parallel edges.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        self.incidence().into_iter().map(|l| l.into_iter().map(|(w, _)| w).collect()).collect()
    }

    /// First loop, if any.
    pub fn find_self_loop(&self) -> Option<usize> {
        self.edges.iter().find(|(a, b)| a == b).map(|&(a, _)| a)
    }

    /// First pair joined by two or more edges, if any.
    pub fn find_multiedge(&self) -> Option<(usize, usize)> {
        let mut keys: Vec<(usize, usize)> = self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        keys.sort_unstable();
        keys.windows(2).find(|w| w[0] == w[1]).map(|w| w[0])
    }

    /// Vertex-induced subgraph on the vertices with `keep[v]`, renumbered in
    /// increasing order. Returns the subgraph and the old index of each new
    /// vertex.
    pub fn induced(&self, keep: &[bool]) -> (UndirectedGraph, Vec<usize>) {
        let mut new_id = vec![usize::MAX; self.n];
        let mut old = Vec::new();
        for v in 0..self.n {
            if keep[v] {
                new_id[v] = old.len();
                old.push(v);
            }
        }
        let edges =
            self.edges.iter().filter(|&&(a, b)| keep[a] && keep[b]).map(|&(a, b)| (new_id[a], new_id[b])).collect();
        (UndirectedGraph { n: old.len(), edges }, old)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> UndirectedGraph {
        UndirectedGraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn triangle_conversion() {
        let g = RotationGraph::from_undirected(&triangle()).unwrap();
        assert_eq!((g.n(), g.degree()), (3, 2));
        assert!(g.validate().is_ok());
        assert_eq!(g.out_map(0, 0), 1);
        assert_eq!(g.out_map(0, 1), 2);
    }

    #[test]
    fn single_loop_conversion() {
        let g = RotationGraph::from_undirected(&UndirectedGraph::new(1, vec![(0, 0)]).unwrap()).unwrap();
        assert_eq!(g.rotate(0, 0), (0, 0));
    }

    #[test]
    fn path_is_not_regular() {
        let p3 = UndirectedGraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            RotationGraph::from_undirected(&p3),
            Err(GraphError::NotRegular { vertex: 1, degree: 2, expected: 1 })
        ));
    }

    #[test]
    fn collision_is_reported() {
        // in-degrees stay 2 but vertex 2 sees in-label 0 twice
        let out = vec![2, 1, 2, 0, 0, 1];
        let inl = vec![0, 0, 0, 1, 0, 1];
        let g = RotationGraph::from_raw(3, 2, out, inl, false).unwrap();
        assert_eq!(g.validate(), Err(Violation::InLabelCollision { vertex: 2, label: 0 }));
    }

    #[test]
    fn in_degree_deficit_is_reported() {
        let out = vec![1, 1, 1, 0];
        let inl = vec![0, 1, 0, 1];
        let g = RotationGraph::from_raw(2, 2, out, inl, false).unwrap();
        assert_eq!(g.validate(), Err(Violation::NotInRegular { vertex: 0, in_degree: 1 }));
    }

    #[test]
    fn loops_extend_labels() {
        let g = RotationGraph::single_vertex(1).add_self_loops(1);
        assert_eq!(g.degree(), 2);
        assert_eq!(g.rotate(0, 1), (0, 1));
        let h = RotationGraph::from_undirected(&triangle()).unwrap();
        assert_eq!(h.add_self_loops(0), h);
    }

    #[test]
    fn power_one_is_identity() {
        let g = RotationGraph::from_undirected(&triangle()).unwrap();
        assert_eq!(g.power(1).unwrap(), g);
        assert!(g.power(3).unwrap().validate().is_ok());
    }

    #[test]
    fn power_respects_bound() {
        let g = RotationGraph::complete_with_loops(4);
        assert!(matches!(g.power_bounded(3, 100), Err(GraphError::DegreeOverflow { .. })));
    }

    #[test]
    fn directed_three_cycle_adjacency() {
        let g = RotationGraph::new(3, 1, vec![1, 2, 0], vec![0, 0, 0], false).unwrap();
        let a = g.to_adjacency(true).unwrap();
        assert!(a.is_permutation());
        assert!(a.is_stochastic());
    }

    #[test]
    fn induced_renumbers() {
        let g = UndirectedGraph::new(4, vec![(0, 2), (2, 3)]).unwrap();
        let (h, old) = g.induced(&[true, false, true, true]);
        assert_eq!(old, vec![0, 2, 3]);
        assert_eq!(h.edges(), &[(0, 1), (1, 2)]);
    }
}
