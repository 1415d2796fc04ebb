//! Exact edge expansion by subset enumeration, and the inequalities tying
//! expansion to the mixing ratio.
//!
//! `E(U, Ū)` counts directed edges leaving `U`. In a regular digraph as many
//! edges leave `U` as enter it, so the minimum over `|U| <= n/2` equals the
//! minimum over all proper subsets of `|E(U,Ū)| / (d min(|U|, |Ū|))`; the two
//! enumerators below compute these two forms independently.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::graph::{RotationGraph, UndirectedGraph};
use crate::rational::RationalVector;
use crate::report::{CheckReport, Witness};
use crate::spectral::{graph_mixing_ratio, MixingOptions, SpectralError, StochasticOperator};

/// Largest vertex count accepted by the enumerators.
pub const ENUMERATION_BOUND: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExpansionError {
    #[error("{n} vertices exceed the enumeration bound {bound}")]
    TooLargeForEnumeration { n: usize, bound: usize },
    #[error("edge expansion needs at least two vertices")]
    TooFewVertices,
    #[error("graph is not connected")]
    NotConnected,
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error("degree {d} is odd")]
    OddDegree { d: usize },
    #[error("vertex {vertex} has {loops} self-loops, needs {required}")]
    SelfLoopDeficit { vertex: usize, loops: usize, required: usize },
    #[error("vertex {vertex} has no self-loop")]
    NoSelfLoop { vertex: usize },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Minimizing subset together with its exact ratio.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionCertificate {
    pub epsilon: BigRational,
    pub witness_set: Vec<usize>,
    pub cut_size: u64,
}

fn check_size(g: &RotationGraph) -> Result<(), ExpansionError> {
    if g.n() > ENUMERATION_BOUND {
        return Err(ExpansionError::TooLargeForEnumeration { n: g.n(), bound: ENUMERATION_BOUND });
    }
    Ok(())
}

fn members(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Sources of the edges entering each vertex, with multiplicity.
fn in_sources(g: &RotationGraph) -> Vec<Vec<u32>> {
    let mut src = vec![Vec::with_capacity(g.degree()); g.n()];
    for v in 0..g.n() {
        for i in 0..g.degree() {
            src[g.out_map(v, i)].push(v as u32);
        }
    }
    src
}

/// Walks all nonzero masks in Gray-code order and hands `(mask, size, cut)`
/// to `visit`, keeping the cut current with `O(d)` work per flip.
fn gray_walk(g: &RotationGraph, mut visit: impl FnMut(u32, usize, u64)) {
    let n = g.n();
    let d = g.degree();
    let src = in_sources(g);
    let (mut mask, mut size, mut cut) = (0u32, 0usize, 0i64);
    for k in 1u64..(1u64 << n) {
        let v = k.trailing_zeros() as usize;
        let bit = 1u32 << v;
        // edges v -> outside and inside -> v, excluding loops at v
        let mut out_ext = 0i64;
        for i in 0..d {
            let w = g.out_map(v, i);
            if w != v && mask & (1 << w) == 0 {
                out_ext += 1;
            }
        }
        let in_int = src[v].iter().filter(|&&u| u as usize != v && mask & (1 << u) != 0).count() as i64;
        if mask & bit == 0 {
            mask |= bit;
            size += 1;
            cut += out_ext - in_int;
        } else {
            mask &= !bit;
            size -= 1;
            cut += in_int - out_ext;
        }
        visit(mask, size, cut as u64);
    }
}

/// `min |E(U,Ū)| / (d |U|)` over nonempty `U` with `|U| <= n/2`; ties go to
/// the numerically smallest bitmask.
pub fn edge_expansion_exact(g: &RotationGraph) -> Result<ExpansionCertificate, ExpansionError> {
    check_size(g)?;
    let n = g.n();
    if n < 2 {
        return Err(ExpansionError::TooFewVertices);
    }
    let half = n / 2;
    let mut best: Option<(u64, usize, u32)> = None;
    gray_walk(g, |mask, size, cut| {
        if size == 0 || size > half {
            return;
        }
        let better = match best {
            None => true,
            Some((bc, bs, bm)) => {
                let (l, r) = (cut as u128 * bs as u128, bc as u128 * size as u128);
                l < r || (l == r && mask < bm)
            }
        };
        if better {
            best = Some((cut, size, mask));
        }
    });
    let (cut, size, mask) = best.expect("n >= 2 admits a subset");
    Ok(ExpansionCertificate {
        epsilon: BigRational::new(BigInt::from(cut), BigInt::from(g.degree() * size)),
        witness_set: members(mask, n),
        cut_size: cut,
    })
}

/// Number of edges leaving `set`, counted directly.
pub fn cut_size(g: &RotationGraph, set: &[usize]) -> u64 {
    let mut inside = vec![false; g.n()];
    for &v in set {
        inside[v] = true;
    }
    let mut cut = 0;
    for &v in set {
        for i in 0..g.degree() {
            if !inside[g.out_map(v, i)] {
                cut += 1;
            }
        }
    }
    cut
}

/// `min |E(U,Ū)| / (d min(|U|,|Ū|))` over all proper nonempty `U`, by direct
/// counting. Returns the value and the smallest minimizing mask's members.
pub fn edge_expansion_symmetric(g: &RotationGraph) -> Result<(BigRational, Vec<usize>), ExpansionError> {
    check_size(g)?;
    let n = g.n();
    if n < 2 {
        return Err(ExpansionError::TooFewVertices);
    }
    let d = g.degree();
    let mut best: Option<(BigRational, u32)> = None;
    for mask in 1u32..((1u32 << n) - 1) {
        let mut cut = 0u64;
        for v in 0..n {
            if mask >> v & 1 == 1 {
                cut += (0..d).filter(|&i| mask >> g.out_map(v, i) & 1 == 0).count() as u64;
            }
        }
        let size = mask.count_ones() as usize;
        let ratio = BigRational::new(BigInt::from(cut), BigInt::from(d * size.min(n - size)));
        if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
            best = Some((ratio, mask));
        }
    }
    let (ratio, mask) = best.expect("n >= 2 admits a proper subset");
    Ok((ratio, members(mask, n)))
}

/// True iff every proper nonempty subset has an edge leaving it.
pub fn subset_connected(g: &RotationGraph) -> Result<bool, ExpansionError> {
    check_size(g)?;
    let full = if g.n() == 32 { u32::MAX } else { (1u32 << g.n()) - 1 };
    let mut ok = true;
    gray_walk(g, |mask, _, cut| {
        if mask != full && cut == 0 {
            ok = false;
        }
    });
    Ok(ok)
}

/// Exact check of `epsilon >= 2/(d n)` for a connected graph.
pub fn check_connected_expansion_bound(g: &RotationGraph) -> Result<CheckReport, ExpansionError> {
    if !subset_connected(g)? {
        return Err(ExpansionError::NotConnected);
    }
    let cert = edge_expansion_exact(g)?;
    let bound = BigRational::new(BigInt::from(2), BigInt::from(g.degree() * g.n()));
    let mut rep = CheckReport::new("expansion-lower-bound");
    rep.require(cert.epsilon >= bound, || Witness::Vertices(cert.witness_set.clone()));
    rep.fact("epsilon", cert.epsilon.clone()).fact("bound", bound);
    Ok(rep)
}

/// Result of the constructive bound `lambda >= 1 - 2 alpha` whenever some
/// subset expands by less than `alpha`.
#[derive(Clone, Debug)]
pub struct CheegerWitness {
    /// `chi_U - (|U|/n) 1`.
    pub vector: RationalVector,
    pub report: CheckReport,
}

/// Applies [`cheeger_witness_for_subset`] to the certificate's set.
pub fn cheeger_upper_witness(
    g: &RotationGraph,
    cert: &ExpansionCertificate,
    alpha: &BigRational,
) -> Result<CheegerWitness, ExpansionError> {
    cheeger_witness_for_subset(g, &cert.witness_set, alpha)
}

/// For `U` with `|E(U,Ū)|/(d|U|) < alpha <= 1/2`, `|U| <= n/2`, and `G`
/// undirected, checks `||M v||^2 >= (1 - 2 alpha)^2 ||v||^2` exactly for
/// `v = chi_U - (|U|/n) 1`.
pub fn cheeger_witness_for_subset(
    g: &RotationGraph,
    set: &[usize],
    alpha: &BigRational,
) -> Result<CheegerWitness, ExpansionError> {
    let n = g.n();
    if !g.is_undirected() {
        return Err(ExpansionError::PreconditionViolated("graph must be undirected"));
    }
    if set.is_empty() || 2 * set.len() > n || set.iter().any(|&v| v >= n) {
        return Err(ExpansionError::PreconditionViolated("need 0 < |U| <= n/2"));
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if !alpha.is_positive() || *alpha > half {
        return Err(ExpansionError::PreconditionViolated("need 0 < alpha <= 1/2"));
    }
    let cut = cut_size(g, set);
    let ratio = BigRational::new(BigInt::from(cut), BigInt::from(g.degree() * set.len()));
    if ratio >= *alpha {
        return Err(ExpansionError::PreconditionViolated("subset expansion is not below alpha"));
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != set.len() {
        return Err(ExpansionError::PreconditionViolated("subset has repeated vertices"));
    }
    let v = RationalVector::indicator(n, set).project_perp_uniform();
    let mv = g.apply_exact(&v);
    let k = BigRational::from_integer(BigInt::from(set.len()));
    let expect_norm = &k * (BigRational::one() - &k / BigRational::from_integer(BigInt::from(n)));
    let factor = BigRational::one() - alpha * BigRational::from_integer(BigInt::from(2));
    let (lhs, rhs) = (mv.norm_sq(), &factor * &factor * v.norm_sq());
    let mut rep = CheckReport::new("cheeger-a");
    rep.require(v.sum().is_zero(), || Witness::Vector(v.clone()));
    rep.require(v.norm_sq() == expect_norm, || Witness::Vector(v.clone()));
    rep.require(lhs >= rhs, || Witness::Vector(v.clone()));
    rep.fact("subset_ratio", ratio).fact("norm_sq_mv", lhs).fact("bound", rhs);
    rep.attach(Witness::Vector(v.clone()));
    Ok(CheegerWitness { vector: v, report: rep })
}

/// With `d` even and at least `d/2` loops per vertex, checks
/// `1 - lambda_upper >= epsilon^2 / 2 - tol`.
pub fn cheeger_mihail_check(g: &RotationGraph, opts: &MixingOptions) -> Result<CheckReport, ExpansionError> {
    if !g.is_undirected() {
        return Err(ExpansionError::PreconditionViolated("graph must be undirected"));
    }
    let d = g.degree();
    if d % 2 == 1 {
        return Err(ExpansionError::OddDegree { d });
    }
    for (v, loops) in g.self_loop_counts().into_iter().enumerate() {
        if 2 * loops < d {
            return Err(ExpansionError::SelfLoopDeficit { vertex: v, loops, required: d / 2 });
        }
    }
    let cert = edge_expansion_exact(g)?;
    let est = graph_mixing_ratio(g, opts)?;
    let eps = cert.epsilon.to_f64().unwrap_or(0.0);
    let mut rep = CheckReport::new("cheeger-mihail").with_tol(opts.tol).with_seed(opts.seed);
    rep.require(1.0 - est.upper >= eps * eps / 2.0 - opts.tol, || Witness::Vector(est.witness.clone()));
    rep.fact("epsilon", cert.epsilon).fact("lambda_upper", est.upper).fact("lambda_lower", est.lower);
    Ok(rep)
}

/// The undirected graph whose normalized adjacency is `M^T M`: one edge per
/// ordered pair of edges sharing a head, a loop when the tails agree.
pub fn common_head_graph(g: &RotationGraph) -> UndirectedGraph {
    let src = in_sources(g);
    let mut edges = Vec::with_capacity(g.n() * g.degree() * g.degree());
    for tails in &src {
        for &x in tails {
            for &y in tails {
                if x == y {
                    edges.push((x as usize, x as usize));
                } else if x < y {
                    edges.push((x as usize, y as usize));
                }
            }
        }
    }
    UndirectedGraph::new(g.n(), edges).expect("endpoints in range")
}

/// For a connected digraph with a loop at every vertex, checks
/// `lambda <= 1 - 1/(d^4 n^2)` and cross-checks `lambda(G)^2` against the
/// mixing ratio of the common-head graph.
pub fn check_directed_mixing_bound(g: &RotationGraph, opts: &MixingOptions) -> Result<CheckReport, ExpansionError> {
    let loops = g.self_loop_counts();
    if let Some(v) = loops.iter().position(|&k| k == 0) {
        return Err(ExpansionError::NoSelfLoop { vertex: v });
    }
    if !g.is_connected() {
        return Err(ExpansionError::NotConnected);
    }
    let (n, d) = (g.n() as f64, g.degree() as f64);
    let est = graph_mixing_ratio(g, opts)?;
    let h = RotationGraph::from_undirected(&common_head_graph(g)).expect("common-head graph is regular");
    let h_est = graph_mixing_ratio(&h, opts)?;
    let h_loops = h.self_loop_counts().into_iter().min().unwrap_or(0);
    let bound = 1.0 - 1.0 / (d * d * d * d * n * n);
    let mut rep = CheckReport::new("directed-mixing-bound").with_tol(opts.tol).with_seed(opts.seed);
    rep.require(est.upper <= bound + opts.tol, || Witness::Vector(est.witness.clone()));
    let close =
        est.lower * est.lower <= h_est.upper + 4.0 * opts.tol && h_est.lower <= est.upper * est.upper + 4.0 * opts.tol;
    rep.require(close, || Witness::Vector(h_est.witness.clone()));
    rep.fact("lambda_upper", est.upper)
        .fact("bound", bound)
        .fact("h_lambda_upper", h_est.upper)
        .fact("h_min_loops", h_loops)
        .fact("h_degree", h.degree())
        .fact("h_half_loops", 2 * h_loops >= h.degree());
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn und(n: usize, edges: &[(usize, usize)]) -> RotationGraph {
        RotationGraph::from_undirected(&UndirectedGraph::new(n, edges.to_vec()).unwrap()).unwrap()
    }

    fn cycle(n: usize) -> RotationGraph {
        und(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
    }

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn k4() -> RotationGraph {
        und(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    }

    fn two_triangles() -> RotationGraph {
        und(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    }

    #[test]
    fn expansion_examples() {
        let c = edge_expansion_exact(&k4()).unwrap();
        assert_eq!((c.epsilon, c.witness_set.len()), (r(2, 3), 2));
        let c = edge_expansion_exact(&cycle(8)).unwrap();
        assert_eq!(c.epsilon, r(1, 4));
        assert_eq!(c.witness_set, vec![0, 1, 2, 3]);
        let c = edge_expansion_exact(&two_triangles()).unwrap();
        assert_eq!((c.epsilon, c.witness_set), (r(0, 1), vec![0, 1, 2]));
    }

    #[test]
    fn symmetric_form_agrees() {
        for g in [k4(), cycle(8), cycle(5), two_triangles()] {
            assert_eq!(edge_expansion_exact(&g).unwrap().epsilon, edge_expansion_symmetric(&g).unwrap().0);
        }
    }

    #[test]
    fn connectivity() {
        assert!(subset_connected(&cycle(8)).unwrap());
        assert!(!subset_connected(&two_triangles()).unwrap());
        assert!(subset_connected(&RotationGraph::single_vertex(2)).unwrap());
        assert!(matches!(check_connected_expansion_bound(&two_triangles()), Err(ExpansionError::NotConnected)));
        assert!(check_connected_expansion_bound(&cycle(8)).unwrap().ok());
    }

    #[test]
    fn cheeger_a_examples() {
        let t = two_triangles();
        let w = cheeger_witness_for_subset(&t, &[0, 1, 2], &r(1, 10)).unwrap();
        assert!(w.report.ok());
        assert_eq!(t.apply_exact(&w.vector), w.vector);
        assert!(cheeger_witness_for_subset(&cycle(8), &[0, 1, 2, 3], &r(1, 3)).unwrap().report.ok());
        for set in [vec![0], vec![0, 1], vec![1, 3]] {
            assert!(matches!(
                cheeger_witness_for_subset(&k4(), &set, &r(1, 2)),
                Err(ExpansionError::PreconditionViolated(_))
            ));
        }
    }

    #[test]
    fn mihail_examples() {
        let k4_loops = k4().add_self_loops(2);
        assert!(matches!(
            cheeger_mihail_check(&k4_loops, &MixingOptions::default()),
            Err(ExpansionError::OddDegree { d: 5 })
        ));
        let c6 = cycle(6).add_self_loops(2);
        assert!(cheeger_mihail_check(&c6, &MixingOptions::default()).unwrap().ok());
        assert!(matches!(
            cheeger_mihail_check(&cycle(6), &MixingOptions::default()),
            Err(ExpansionError::SelfLoopDeficit { .. })
        ));
    }

    #[test]
    fn directed_bound_examples() {
        let one = RotationGraph::single_vertex(3);
        let rep = check_directed_mixing_bound(&one, &MixingOptions::default()).unwrap();
        assert!(rep.ok());
        // directed 2-cycle with a loop at each vertex
        let g = RotationGraph::new(2, 2, vec![1, 0, 0, 1], vec![0, 1, 0, 1], false).unwrap();
        let rep = check_directed_mixing_bound(&g, &MixingOptions::default()).unwrap();
        assert!(rep.ok());
        assert!(matches!(
            check_directed_mixing_bound(&cycle(4), &MixingOptions::default()),
            Err(ExpansionError::NoSelfLoop { vertex: 0 })
        ));
    }
}
