//! The derandomized square `X ⓢ G`.
//!
//! `X` is `K`-regular on `N` vertices and `G` is `D`-regular on `[K]`. Edge
//! `(i, j)` of `X ⓢ G` at `v` takes the `X` edge `i` to `w`, moves the label
//! it arrived with along the `G` edge `j`, and takes the resulting `X` edge
//! out of `w`. The in-label records the two in-labels met on the way back
//! (`X` first), which makes the result properly labeled for any proper
//! inputs. When `X` is consistently labeled (every edge arrives with the label
//! it left with) the target is `(v[i])[i[j]]`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::graph::{GraphError, RotationGraph, Violation, DEFAULT_MAX_SLOTS};
use crate::rational::{RationalMatrix, RationalVector};
use crate::report::{CheckReport, Witness};
use crate::spectral::{graph_mixing_ratio, MixingOptions, SpectralError, StochasticOperator};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DerandError {
    #[error("X has degree {k_x} but G has {n_g} vertices")]
    DegreeMismatch { k_x: usize, n_g: usize },
    #[error("improper labeling: {0}")]
    ImproperLabeling(Violation),
    #[error("argument outside [0, 1]")]
    OutOfRange,
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error("vector is not a witness: {0}")]
    NotAWitness(&'static str),
    #[error("neither branch qualifies, so mu does not bound G")]
    MuDoesNotBoundG,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Edge label `(i, j)` of `X ⓢ G`, packed as `i + K*j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DSLabel {
    pub i: usize,
    pub j: usize,
}

impl DSLabel {
    pub fn pack(self, k: usize) -> usize {
        self.i + k * self.j
    }

    pub fn unpack(label: usize, k: usize) -> Self {
        Self { i: label % k, j: label / k }
    }
}

/// `X ⓢ G` under the default slot bound.
pub fn dsquare(x: &RotationGraph, g: &RotationGraph) -> Result<RotationGraph, DerandError> {
    dsquare_bounded(x, g, DEFAULT_MAX_SLOTS)
}

pub fn dsquare_bounded(x: &RotationGraph, g: &RotationGraph, max_slots: usize) -> Result<RotationGraph, DerandError> {
    let k = x.degree();
    if g.n() != k {
        return Err(DerandError::DegreeMismatch { k_x: k, n_g: g.n() });
    }
    x.validate().map_err(DerandError::ImproperLabeling)?;
    g.validate().map_err(DerandError::ImproperLabeling)?;
    let dd = g.degree();
    let kd = k * dd;
    let slots = x.n() as u128 * kd as u128;
    if slots > max_slots as u128 {
        return Err(GraphError::MaterializationBound { requested: slots, bound: max_slots }.into());
    }
    let mut out = vec![0u32; x.n() * kd];
    let mut inl = vec![0u32; x.n() * kd];
    for v in 0..x.n() {
        for i in 0..k {
            let (w, i_in) = x.rotate(v, i);
            for j in 0..dd {
                let (kk, j_in) = g.rotate(i_in, j);
                let (u, b) = x.rotate(w, kk);
                let s = v * kd + DSLabel { i, j }.pack(k);
                out[s] = u as u32;
                inl[s] = DSLabel { i: b, j: j_in }.pack(k) as u32;
            }
        }
    }
    let undirected = x.is_undirected() && g.is_undirected();
    let res = RotationGraph::from_raw(x.n(), kd, out, inl, undirected)?;
    res.validate().map_err(DerandError::ImproperLabeling)?;
    Ok(res)
}

fn in_unit(x: &BigRational) -> bool {
    !x.is_negative() && *x <= BigRational::one()
}

/// `f(lambda, mu) = mu + (1 - mu) lambda^2`.
pub fn f_bound(lambda: &BigRational, mu: &BigRational) -> Result<BigRational, DerandError> {
    if !in_unit(lambda) || !in_unit(mu) {
        return Err(DerandError::OutOfRange);
    }
    Ok(mu + (BigRational::one() - mu) * lambda * lambda)
}

fn f_float(lambda: f64, mu: f64) -> f64 {
    mu + (1.0 - mu) * lambda * lambda
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Properties of `f` for `lambda, mu` in `(0,1)` and `gamma` in `[0,1]`:
/// (a) `1 - f(1-gamma, mu) >= 3/2 gamma` when `gamma <= 1/4`, `mu <= 1/100`
/// (skipped otherwise); (b) `f(lambda, mu) < lambda^2 + mu`; (c) `f` is
/// monotone on the `k/16` grid and around the given point.
pub fn f_props_check(gamma: &BigRational, mu: &BigRational, lambda: &BigRational) -> Result<CheckReport, DerandError> {
    let open = |x: &BigRational| x.is_positive() && *x < BigRational::one();
    if !open(lambda) || !open(mu) || !in_unit(gamma) {
        return Err(DerandError::PreconditionViolated("need lambda, mu in (0,1) and gamma in [0,1]"));
    }
    let mut rep = CheckReport::new("f-properties");
    let part_a = *gamma <= rat(1, 4) && *mu <= rat(1, 100);
    if part_a {
        let gap = BigRational::one() - f_bound(&(BigRational::one() - gamma), mu)?;
        let want = rat(3, 2) * gamma;
        rep.require(gap >= want, || Witness::Rational(gap.clone()));
        rep.fact("a_gap", gap);
    }
    rep.fact("a_checked", part_a);
    let f = f_bound(lambda, mu)?;
    rep.require(f < lambda * lambda + mu, || Witness::Rational(f.clone()));
    rep.fact("f", f);
    let mut grid: Vec<BigRational> = (0..=16).map(|k| rat(k, 16)).collect();
    grid.extend([lambda.clone(), mu.clone()]);
    grid.sort();
    grid.dedup();
    let mut monotone = true;
    for a in grid.windows(2) {
        for b in &grid {
            monotone &= f_bound(&a[0], b)? <= f_bound(&a[1], b)?;
            monotone &= f_bound(b, &a[0])? <= f_bound(b, &a[1])?;
        }
    }
    rep.require(monotone, || Witness::Note("f decreases somewhere on the grid".into()));
    Ok(rep)
}

/// Checks `lambda(X ⓢ G).lower <= f(lambda(X).upper, mu(G).upper) + tol`.
pub fn verify_dsquare_mixing(
    x: &RotationGraph,
    g: &RotationGraph,
    opts: &MixingOptions,
) -> Result<CheckReport, DerandError> {
    let xs = dsquare(x, g)?;
    let lx = graph_mixing_ratio(x, opts)?;
    let mg = graph_mixing_ratio(g, opts)?;
    let ls = graph_mixing_ratio(&xs, opts)?;
    let bound = f_float(lx.upper.min(1.0), mg.upper.min(1.0));
    let mut rep = CheckReport::new("dsquare-mixing").with_tol(opts.tol).with_seed(opts.seed);
    rep.require(ls.lower <= bound + opts.tol, || Witness::Vector(ls.witness.clone()));
    rep.fact("lambda_x", lx.upper)
        .fact("mu_g", mg.upper)
        .fact("lambda_xs_lower", ls.lower)
        .fact("lambda_xs_upper", ls.upper)
        .fact("f", bound);
    Ok(rep)
}

/// Which branch of the back-propagation produced the witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `u = v`.
    V,
    /// `u = A v`.
    Av,
}

#[derive(Clone, Debug)]
pub struct Backprop {
    pub u: RationalVector,
    pub side: Side,
    /// Whether the branch not taken also qualifies.
    pub both: bool,
}

/// From `v ⟂ 1` with `||M v||^2 > f(lambda, mu)^2 ||v||^2` for `M` the
/// adjacency of `X ⓢ G`, returns `u` in `{v, A v}` with
/// `||A u||^2 > lambda^2 ||u||^2`, preferring `u = v`. If neither qualifies
/// then `mu` does not bound the mixing ratio of `G`.
pub fn witness_backprop(
    x: &RotationGraph,
    g: &RotationGraph,
    v: &RationalVector,
    lambda: &BigRational,
    mu: &BigRational,
) -> Result<Backprop, DerandError> {
    if v.len() != x.n() {
        return Err(DerandError::NotAWitness("length differs from the vertex count"));
    }
    if !v.sum().is_zero() || v.is_zero() {
        return Err(DerandError::NotAWitness("v must be nonzero and orthogonal to the uniform vector"));
    }
    let f = f_bound(lambda, mu)?;
    let xs = dsquare(x, g)?;
    if xs.apply_exact(v).norm_sq() <= &f * &f * v.norm_sq() {
        return Err(DerandError::NotAWitness("||Mv|| does not exceed f(lambda, mu) ||v||"));
    }
    let l2 = lambda * lambda;
    let av = x.apply_exact(v);
    let first = av.norm_sq() > &l2 * v.norm_sq();
    let aav = x.apply_exact(&av);
    let second = !av.is_zero() && aav.norm_sq() > &l2 * av.norm_sq();
    match (first, second) {
        (true, _) => Ok(Backprop { u: v.clone(), side: Side::V, both: second }),
        (false, true) => Ok(Backprop { u: av, side: Side::Av, both: false }),
        (false, false) => Err(DerandError::MuDoesNotBoundG),
    }
}

/// Ã: the permutation of `[N] x [K]` sending `(v, i)` to the arrival slot of
/// edge `i` at `v`; index `(v, i) -> v*K + i`.
pub fn label_shift_matrix(x: &RotationGraph) -> RationalMatrix {
    let k = x.degree();
    let nk = x.n() * k;
    let mut target = vec![0usize; nk];
    for v in 0..x.n() {
        for i in 0..k {
            let (w, j) = x.rotate(v, i);
            target[v * k + i] = w * k + j;
        }
    }
    RationalMatrix::from_fn(nk, nk, |r, c| if target[c] == r { BigRational::one() } else { BigRational::zero() })
}

/// Checks `M = P Ã (I_N ⊗ B) Ã L` entrywise, that Ã is a permutation, that
/// `P Ã L = A`, and the split `M = (1/2) A^2 + (1/2) P Ã (I_N ⊗ C) Ã L` with
/// `C = 2B - J_K`.
pub fn five_step_identity_check(x: &RotationGraph, g: &RotationGraph) -> Result<CheckReport, DerandError> {
    five_step_identity_check_bounded(x, g, DEFAULT_MAX_SLOTS)
}

pub fn five_step_identity_check_bounded(
    x: &RotationGraph,
    g: &RotationGraph,
    max_entries: usize,
) -> Result<CheckReport, DerandError> {
    let (n, k) = (x.n(), x.degree());
    let nk = n * k;
    if (nk as u128) * (nk as u128) > max_entries as u128 {
        return Err(GraphError::MaterializationBound { requested: (nk * nk) as u128, bound: max_entries }.into());
    }
    let m = dsquare(x, g)?.to_adjacency(true)?;
    let a = x.to_adjacency(true)?;
    let b = g.to_adjacency(true)?;
    let inv_k = BigRational::new(BigInt::one(), BigInt::from(k));
    let l = RationalMatrix::from_fn(nk, n, |r, c| if r / k == c { inv_k.clone() } else { BigRational::zero() });
    let p = RationalMatrix::from_fn(n, nk, |r, c| if c / k == r { BigRational::one() } else { BigRational::zero() });
    let at = label_shift_matrix(x);
    let sandwich = |inner: &RationalMatrix| -> Result<RationalMatrix, DerandError> {
        let t = p.mul(&at).map_err(SpectralError::from)?;
        let t = t.mul(&inner.kron_identity(n)).map_err(SpectralError::from)?;
        let t = t.mul(&at).map_err(SpectralError::from)?;
        Ok(t.mul(&l).map_err(SpectralError::from)?)
    };
    let mut rep = CheckReport::new("five-step");
    rep.require(at.is_permutation(), || Witness::Note("Ã is not a permutation".into()));
    let prod = sandwich(&b)?;
    if let Some(pos) = prod.entries().iter().zip(m.entries()).position(|(a, b)| a != b) {
        rep.require(false, || Witness::Slot { vertex: pos / n, label: pos % n });
    }
    let pal = p.mul(&at).and_then(|t| t.mul(&l)).map_err(SpectralError::from)?;
    rep.require(pal == a, || Witness::Note("P Ã L differs from A".into()));
    let half = rat(1, 2);
    let c = b.scale(&rat(2, 1)).sub(&RationalMatrix::uniform(k)).map_err(SpectralError::from)?;
    let a2 = a.mul(&a).map_err(SpectralError::from)?;
    let split = a2.scale(&half).add(&sandwich(&c)?.scale(&half)).map_err(SpectralError::from)?;
    rep.require(split == m, || Witness::Note("the mu = 1/2 split differs from M".into()));
    rep.fact("dimension", nk);
    Ok(rep)
}

/// Float view of an exact rational, for reporting.
pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
