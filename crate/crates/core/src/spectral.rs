//! Mixing ratios and exact norm inequalities.
//!
//! The mixing ratio of a doubly stochastic `M` is the operator norm of `M` on
//! the complement of the uniform vector. It is bracketed by power iteration
//! on `w -> M^T M w` with exact deflation at every step. The lower end is the
//! exact Rayleigh quotient of a rational witness; the upper end is the
//! residual bound `sqrt(rho + |r|)`, capped by the exact Frobenius norm of
//! `M - J` and by 1.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::graph::RotationGraph;
use crate::rational::{LinAlgError, RationalMatrix, RationalVector};
use crate::report::{CheckReport, Witness};
use crate::rng;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SpectralError {
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error("matrix is not doubly stochastic")]
    NotStochastic,
    #[error("power iteration did not converge within {max_iters} iterations")]
    NonConvergence { max_iters: u32 },
    #[error("eta must lie in (0, 1]")]
    EtaOutOfRange,
    #[error("entry {index} of the denominator vector is not positive")]
    NonPositiveDenominatorEntry { index: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
}

pub fn matvec(m: &RationalMatrix, v: &RationalVector) -> Result<RationalVector, LinAlgError> {
    m.matvec(v)
}

pub fn project_perp_uniform(v: &RationalVector) -> RationalVector {
    v.project_perp_uniform()
}

pub fn norm_sq(v: &RationalVector) -> BigRational {
    v.norm_sq()
}

pub fn inner(u: &RationalVector, v: &RationalVector) -> Result<BigRational, LinAlgError> {
    u.inner(v)
}

pub fn lift(v: &RationalVector, n: usize) -> Result<RationalVector, LinAlgError> {
    v.lift(n)
}

pub fn project(w: &RationalVector, m: usize, n: usize) -> Result<RationalVector, LinAlgError> {
    w.project(m, n)
}

/// A doubly stochastic operator usable by [`mixing_ratio_op`].
pub trait StochasticOperator {
    fn dim(&self) -> usize;
    /// `y = M x`.
    fn apply(&self, x: &[f64], y: &mut [f64]);
    /// `y = M^T x`.
    fn apply_transpose(&self, x: &[f64], y: &mut [f64]);
    /// Exact `M v`.
    fn apply_exact(&self, v: &RationalVector) -> RationalVector;
    /// `||M - J||_F^2`, an upper bound on the squared mixing ratio.
    fn deflated_frobenius_sq(&self) -> BigRational;
}

/// Dense matrix view with a cached floating copy.
pub struct DenseOperator<'a> {
    m: &'a RationalMatrix,
    f: Vec<f64>,
}

impl<'a> DenseOperator<'a> {
    /// Refuses matrices that are not doubly stochastic.
    pub fn new(m: &'a RationalMatrix) -> Result<Self, SpectralError> {
        if !m.is_stochastic() {
            return Err(SpectralError::NotStochastic);
        }
        Ok(Self { m, f: m.to_f64() })
    }
}

impl StochasticOperator for DenseOperator<'_> {
    fn dim(&self) -> usize {
        self.m.rows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.dim();
        for (r, yr) in y.iter_mut().enumerate() {
            *yr = self.f[r * n..(r + 1) * n].iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        let n = self.dim();
        y.iter_mut().for_each(|v| *v = 0.0);
        for (r, &xr) in x.iter().enumerate() {
            for (c, yc) in y.iter_mut().enumerate() {
                *yc += self.f[r * n + c] * xr;
            }
        }
    }

    fn apply_exact(&self, v: &RationalVector) -> RationalVector {
        self.m.matvec(v).expect("square operator")
    }

    fn deflated_frobenius_sq(&self) -> BigRational {
        let j = BigRational::new(BigInt::one(), BigInt::from(self.dim()));
        self.m
            .entries()
            .iter()
            .map(|x| {
                let d = x - &j;
                &d * &d
            })
            .sum()
    }
}

impl StochasticOperator for RotationGraph {
    fn dim(&self) -> usize {
        self.n()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let inv = 1.0 / self.degree() as f64;
        y.iter_mut().for_each(|v| *v = 0.0);
        let d = self.degree();
        for (s, &w) in self.out_table().iter().enumerate() {
            y[w as usize] += x[s / d] * inv;
        }
    }

    fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        let d = self.degree();
        let inv = 1.0 / d as f64;
        for (v, yv) in y.iter_mut().enumerate() {
            *yv = self.out_table()[v * d..(v + 1) * d].iter().map(|&w| x[w as usize]).sum::<f64>() * inv;
        }
    }

    fn apply_exact(&self, v: &RationalVector) -> RationalVector {
        let d = self.degree();
        let mut num = vec![BigInt::zero(); self.n()];
        for (s, &w) in self.out_table().iter().enumerate() {
            num[w as usize] += &v.numerators()[s / d];
        }
        RationalVector::new(num, v.denominator() * BigInt::from(d)).expect("positive length")
    }

    fn deflated_frobenius_sq(&self) -> BigRational {
        let d = self.degree();
        let mut sq = BigInt::zero();
        let mut row: Vec<u32> = Vec::with_capacity(d);
        for v in 0..self.n() {
            row.clear();
            row.extend_from_slice(&self.out_table()[v * d..(v + 1) * d]);
            row.sort_unstable();
            let mut k = 0;
            while k < d {
                let mut e = k;
                while e < d && row[e] == row[k] {
                    e += 1;
                }
                let m = (e - k) as u64;
                sq += BigInt::from(m * m);
                k = e;
            }
        }
        BigRational::new(sq, BigInt::from(d * d)) - BigRational::one()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixingOptions {
    pub tol: f64,
    pub max_iters: u32,
    pub seed: u64,
}

impl Default for MixingOptions {
    fn default() -> Self {
        Self { tol: 1e-9, max_iters: 100_000, seed: rng::DEFAULT_SEED }
    }
}

impl MixingOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

/// Certified bracket `lower <= mixing ratio <= upper`.
#[derive(Clone, Debug, PartialEq)]
pub struct MixingEstimate {
    pub lower: f64,
    pub upper: f64,
    /// Exactly orthogonal to the uniform vector, with
    /// `||M w||^2 >= lower^2 ||w||^2` exactly.
    pub witness: RationalVector,
    pub iterations: u32,
}

/// Mixing ratio of a dense doubly stochastic matrix.
pub fn mixing_ratio(m: &RationalMatrix, tol: f64) -> Result<MixingEstimate, SpectralError> {
    mixing_ratio_op(&DenseOperator::new(m)?, &MixingOptions::with_tol(tol))
}

/// Mixing ratio of a graph's normalized adjacency (sparse evaluation).
pub fn graph_mixing_ratio(g: &RotationGraph, opts: &MixingOptions) -> Result<MixingEstimate, SpectralError> {
    mixing_ratio_op(g, opts)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn deflate(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= mean);
}

fn normalize(x: &mut [f64]) -> f64 {
    let nrm = libm::sqrt(dot(x, x));
    if nrm > 0.0 {
        x.iter_mut().for_each(|v| *v /= nrm);
    }
    nrm
}

/// Largest float whose square does not exceed `r` (`r >= 0`).
pub fn sqrt_down(r: &BigRational) -> f64 {
    if !r.is_positive() {
        return 0.0;
    }
    let mut f = libm::sqrt(r.to_f64().unwrap_or(0.0));
    while f > 0.0 && square_of(f) > *r {
        f = f.next_down();
    }
    f
}

/// Smallest float whose square is at least `r` (`r >= 0`).
pub fn sqrt_up(r: &BigRational) -> f64 {
    if !r.is_positive() {
        return 0.0;
    }
    let mut f = libm::sqrt(r.to_f64().unwrap_or(f64::MAX));
    while square_of(f) < *r {
        f = f.next_up();
    }
    f
}

fn square_of(f: f64) -> BigRational {
    let x = BigRational::from_float(f).expect("finite");
    &x * &x
}

fn exact_witness(x: &[f64]) -> RationalVector {
    let scale = (1u64 << 52) as f64;
    let num: Vec<BigInt> = x.iter().map(|&v| BigInt::from(libm::round(v * scale) as i64)).collect();
    let w = RationalVector::new(num, BigInt::one()).expect("positive length").project_perp_uniform();
    if w.is_zero() {
        RationalVector::basis(x.len(), 0).project_perp_uniform()
    } else {
        w
    }
}

/// Power iteration bracket for any doubly stochastic operator.
pub fn mixing_ratio_op(op: &impl StochasticOperator, opts: &MixingOptions) -> Result<MixingEstimate, SpectralError> {
    use rand::Rng as _;
    let n = op.dim();
    if n == 1 {
        return Ok(MixingEstimate { lower: 0.0, upper: 0.0, witness: RationalVector::zeros(1), iterations: 0 });
    }
    let cap = sqrt_up(&op.deflated_frobenius_sq()).min(1.0);
    let guard = 16.0 * f64::EPSILON * libm::sqrt(n as f64);
    let mut r = rng::seeded(opts.seed);
    let mut x: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
    deflate(&mut x);
    normalize(&mut x);
    let (mut y, mut z) = (vec![0.0; n], vec![0.0; n]);
    let mut target = opts.tol / 2.0;
    for it in 1..=opts.max_iters {
        op.apply(&x, &mut y);
        op.apply_transpose(&y, &mut z);
        deflate(&mut z);
        let rho = dot(&x, &z).max(0.0);
        let res = libm::sqrt(z.iter().zip(&x).map(|(a, b)| (a - rho * b) * (a - rho * b)).sum());
        let upper = libm::sqrt(rho + res + guard).min(cap);
        let lower = libm::sqrt(rho);
        if (upper - lower <= target && it >= 3) || cap <= target {
            let witness = exact_witness(&x);
            let ratio = op.apply_exact(&witness).norm_sq() / witness.norm_sq();
            let lo = sqrt_down(&ratio).min(cap);
            let hi = upper.max(lo);
            if hi - lo <= opts.tol || cap <= target {
                return Ok(MixingEstimate { lower: lo.min(hi), upper: hi, witness, iterations: it });
            }
            target /= 2.0;
        }
        if normalize(&mut z) == 0.0 {
            // x lies in the kernel; the Frobenius cap is the only bound left
            return Err(SpectralError::NonConvergence { max_iters: it });
        }
        core::mem::swap(&mut x, &mut z);
    }
    Err(SpectralError::NonConvergence { max_iters: opts.max_iters })
}

/// Samples `trials` seeded rational vectors and checks `||Mv||^2 <= ||v||^2`.
pub fn check_norm_one(m: &RationalMatrix, trials: usize, seed: u64) -> Result<CheckReport, SpectralError> {
    if !m.is_stochastic() {
        return Err(SpectralError::NotStochastic);
    }
    let mut rep = CheckReport::new("norm-one").with_seed(seed);
    let mut r = rng::seeded(seed);
    let mut equalities = 0usize;
    for _ in 0..trials {
        let v = rng::rational_vector(&mut r, m.cols());
        let (lhs, rhs) = (m.matvec(&v)?.norm_sq(), v.norm_sq());
        if lhs == rhs {
            equalities += 1;
        }
        if !rep.require(lhs <= rhs, || Witness::Vector(v.clone())) {
            break;
        }
    }
    rep.fact("trials", trials).fact("equalities", equalities);
    Ok(rep)
}

/// For stochastic `M`: `M 1 = 1`, and on seeded samples distributions map to
/// distributions and `v ⟂ 1` maps to `M v ⟂ 1`, all exactly.
pub fn check_stochastic_action(m: &RationalMatrix, trials: usize, seed: u64) -> Result<CheckReport, SpectralError> {
    if !m.is_stochastic() {
        return Err(SpectralError::NotStochastic);
    }
    let n = m.cols();
    let mut rep = CheckReport::new("stochastic-action").with_seed(seed);
    let ones = RationalVector::ones(n);
    let m1 = m.matvec(&ones)?;
    rep.require(m1 == ones, || Witness::Vector(m1.clone()));
    let mut r = rng::seeded(seed);
    for _ in 0..trials {
        let p = rng::positive_vector(&mut r, n);
        let p = p.scale(&(BigRational::one() / p.sum()));
        let mp = m.matvec(&p)?;
        let dist = mp.sum().is_one() && mp.to_rationals().iter().all(|x| !x.is_negative());
        if !rep.require(dist, || Witness::Vector(p.clone())) {
            break;
        }
        let v = rng::rational_vector(&mut r, n).project_perp_uniform();
        let mv = m.matvec(&v)?;
        if !rep.require(mv.sum().is_zero(), || Witness::Vector(v.clone())) {
            break;
        }
    }
    rep.fact("trials", trials);
    Ok(rep)
}

/// `M = (1-eta) J + eta C` and `M = J + eta D`.
#[derive(Clone, Debug)]
pub struct JdDecomposition {
    pub c: RationalMatrix,
    pub d: RationalMatrix,
    pub report: CheckReport,
}

/// Builds `C` and `D`, checks the zero line sums of `D` exactly and samples
/// `||Cv|| <= ||v||`, `||Dv|| <= ||v||` on canonical and seeded vectors. The
/// norm claims hold whenever `eta` bounds the mixing ratio of `M`.
pub fn jd_decompose(
    m: &RationalMatrix,
    eta: &BigRational,
    trials: usize,
    seed: u64,
) -> Result<JdDecomposition, SpectralError> {
    if !eta.is_positive() || *eta > BigRational::one() {
        return Err(SpectralError::EtaOutOfRange);
    }
    if !m.is_stochastic() {
        return Err(SpectralError::NotStochastic);
    }
    let n = m.rows();
    let j = RationalMatrix::uniform(n);
    let inv = eta.recip();
    let c = m.sub(&j.scale(&(BigRational::one() - eta)))?.scale(&inv);
    let d = m.sub(&j)?.scale(&inv);
    let mut rep = CheckReport::new("jd-decomposition").with_seed(seed);
    let zero_sums = d.row_sums().iter().chain(d.col_sums().iter()).all(Zero::is_zero);
    rep.require(zero_sums, || Witness::Note("D has a nonzero line sum".into()));
    let mut samples: Vec<RationalVector> = (0..n).map(|u| RationalVector::basis(n, u)).collect();
    samples.push(RationalVector::ones(n));
    let mut r = rng::seeded(seed);
    samples.extend((0..trials).map(|_| rng::rational_vector(&mut r, n)));
    for v in &samples {
        let nv = v.norm_sq();
        let ok = c.matvec(v)?.norm_sq() <= nv && d.matvec(v)?.norm_sq() <= nv;
        if !rep.require(ok, || Witness::Vector(v.clone())) {
            break;
        }
    }
    rep.fact("samples", samples.len()).fact("eta", eta.clone());
    Ok(JdDecomposition { c, d, report: rep })
}

/// Engel form of Cauchy-Schwarz, `sum u_i^2/v_i >= (sum u_i)^2 / sum v_i`,
/// with the sum-of-squares certificate
/// `sum_{i<j} (u_i v_j - u_j v_i)^2 / (v_i v_j)`,
/// which equals `lhs * sum v - (sum u)^2`.
pub fn sedrakyan_check(u: &RationalVector, v: &RationalVector) -> Result<CheckReport, SpectralError> {
    if u.len() != v.len() {
        return Err(LinAlgError::DimensionMismatch { expected: u.len(), found: v.len() }.into());
    }
    let (us, vs) = (u.to_rationals(), v.to_rationals());
    if let Some(i) = vs.iter().position(|x| !x.is_positive()) {
        return Err(SpectralError::NonPositiveDenominatorEntry { index: i });
    }
    let lhs: BigRational = us.iter().zip(&vs).map(|(a, b)| a * a / b).sum();
    let su: BigRational = us.iter().sum();
    let sv: BigRational = vs.iter().sum();
    let rhs = &su * &su / &sv;
    let mut cert = BigRational::zero();
    for i in 0..us.len() {
        for j in i + 1..us.len() {
            let t = &us[i] * &vs[j] - &us[j] * &vs[i];
            cert += &t * &t / (&vs[i] * &vs[j]);
        }
    }
    let identity = &lhs * &sv - &su * &su;
    let mut rep = CheckReport::new("sedrakyan");
    rep.require(cert == identity, || Witness::Rational(cert.clone() - &identity));
    rep.require(!cert.is_negative(), || Witness::Rational(cert.clone()));
    rep.require(lhs >= rhs, || Witness::Vector(u.clone()));
    rep.fact("lhs", lhs).fact("rhs", rhs).fact("certificate", cert);
    Ok(rep)
}

/// `<u,v>^2 <= ||u||^2 ||v||^2`.
pub fn cauchy_schwarz_check(u: &RationalVector, v: &RationalVector) -> Result<CheckReport, SpectralError> {
    let ip = u.inner(v)?;
    let (lhs, rhs) = (&ip * &ip, u.norm_sq() * v.norm_sq());
    let mut rep = CheckReport::new("cauchy-schwarz");
    rep.require(lhs <= rhs, || Witness::Vector(u.clone()));
    rep.fact("equality", lhs == rhs);
    Ok(rep)
}

/// `||u||^2 <= a^2` and `||v||^2 <= b^2` imply `||u+v||^2 <= (a+b)^2`.
pub fn triangle_sq_check(
    u: &RationalVector,
    v: &RationalVector,
    a: &BigRational,
    b: &BigRational,
) -> Result<CheckReport, SpectralError> {
    if a.is_negative() || b.is_negative() {
        return Err(SpectralError::PreconditionViolated("a and b must be nonnegative"));
    }
    if u.norm_sq() > a * a || v.norm_sq() > b * b {
        return Err(SpectralError::PreconditionViolated("norm bound on u or v fails"));
    }
    let s = u.add(v)?;
    let ab = a + b;
    let mut rep = CheckReport::new("triangle-sq");
    rep.require(s.norm_sq() <= &ab * &ab, || Witness::Vector(s.clone()));
    rep.fact("norm_sq_sum", s.norm_sq());
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::UndirectedGraph;

    fn cycle(n: usize) -> RotationGraph {
        let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
        RotationGraph::from_undirected(&UndirectedGraph::new(n, edges).unwrap()).unwrap()
    }

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn complete_graph_mixes_instantly() {
        let est = mixing_ratio(&RationalMatrix::uniform(5), 1e-9).unwrap();
        assert!(est.upper <= 1e-9);
        assert_eq!(est.lower, 0.0);
    }

    #[test]
    fn cycle_brackets() {
        let c8 = graph_mixing_ratio(&cycle(8), &MixingOptions::default()).unwrap();
        assert!(c8.lower <= 1.0 && c8.upper >= 1.0 - 1e-9 && c8.upper - c8.lower <= 1e-9);
        let c5 = mixing_ratio(&cycle(5).to_adjacency(true).unwrap(), 1e-9).unwrap();
        let expect = 0.809_016_994_374_947_4;
        assert!(c5.lower <= expect + 1e-12 && expect <= c5.upper + 1e-12);
    }

    #[test]
    fn dense_and_sparse_agree() {
        let g = cycle(7).add_self_loops(1);
        let a = mixing_ratio(&g.to_adjacency(true).unwrap(), 1e-9).unwrap();
        let b = graph_mixing_ratio(&g, &MixingOptions::default()).unwrap();
        assert!((a.upper - b.upper).abs() < 2e-9);
    }

    #[test]
    fn not_stochastic() {
        let m = RationalMatrix::identity(2).scale(&r(2, 1));
        assert_eq!(check_norm_one(&m, 3, 1).unwrap_err(), SpectralError::NotStochastic);
        assert!(mixing_ratio(&m, 1e-9).is_err());
    }

    #[test]
    fn permutation_preserves_norm() {
        let p = RationalMatrix::from_integers(3, 3, &[0, 1, 0, 0, 0, 1, 1, 0, 0]).unwrap();
        let rep = check_norm_one(&p, 20, 3).unwrap();
        assert!(rep.ok());
        assert_eq!(rep.get("equalities"), Some(&crate::report::Fact::Int(20)));
    }

    #[test]
    fn jd_of_complete() {
        let j = RationalMatrix::uniform(4);
        let dec = jd_decompose(&j, &r(1, 1), 5, 1).unwrap();
        assert_eq!(dec.c, j);
        assert_eq!(dec.d, RationalMatrix::zeros(4, 4));
        let half = jd_decompose(&j, &r(1, 2), 5, 1).unwrap();
        assert_eq!(half.d, RationalMatrix::zeros(4, 4));
        assert_eq!(jd_decompose(&j, &r(0, 1), 5, 1).unwrap_err(), SpectralError::EtaOutOfRange);
    }

    #[test]
    fn sedrakyan_examples() {
        let one = RationalVector::from_integers(&[1, 1]).unwrap();
        let rep = sedrakyan_check(&one, &one).unwrap();
        assert!(rep.ok());
        assert_eq!(rep.get("certificate"), Some(&crate::report::Fact::Rational(r(0, 1))));
        let u = RationalVector::from_integers(&[1, 2]).unwrap();
        let rep = sedrakyan_check(&u, &one).unwrap();
        assert_eq!(rep.get("lhs"), Some(&crate::report::Fact::Rational(r(5, 1))));
        assert_eq!(rep.get("rhs"), Some(&crate::report::Fact::Rational(r(9, 2))));
        let bad = RationalVector::from_integers(&[1, 0]).unwrap();
        assert!(matches!(sedrakyan_check(&u, &bad), Err(SpectralError::NonPositiveDenominatorEntry { index: 1 })));
    }

    #[test]
    fn triangle_examples() {
        let u = RationalVector::from_integers(&[1, 0]).unwrap();
        let v = RationalVector::from_integers(&[0, 1]).unwrap();
        let rep = triangle_sq_check(&u, &v, &r(1, 1), &r(1, 1)).unwrap();
        assert!(rep.ok());
        assert!(triangle_sq_check(&u, &v, &r(1, 2), &r(1, 1)).is_err());
        assert!(cauchy_schwarz_check(&u, &u).unwrap().get("equality") == Some(&crate::report::Fact::Bool(true)));
    }
}
