use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{Mode, PipelineError, PipelineParams};
use crate::generators::random_consistent;
use crate::graph::{GraphError, RotationGraph};
use crate::rng::derived;
use crate::spectral::{graph_mixing_ratio, MixingOptions};

#[derive(Clone, Debug, PartialEq)]
pub enum CertMethod {
    /// `J_Q`, mixing ratio exactly 0.
    Complete,
    /// Seeded rejection search; `attempts` candidates were tried.
    Search { attempts: u32 },
    /// `K^k` for a searched `K` whose certified ratio is `base_upper`.
    Power { k: u32, base_upper: f64, attempts: u32 },
}

/// Receipt for one base expander `H_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyCert {
    pub level: usize,
    pub vertices: usize,
    pub degree: usize,
    pub mu_lower: f64,
    pub mu_upper: f64,
    pub method: CertMethod,
}

/// Base expanders `H_1 .. H_h` (each `Q^i` vertices, degree `Q`) and the
/// auxiliary graphs `G_t` derived from them: `G_t = H_t` for `t <= m0` and
/// `G_{m0+j} = H_{m0+2^j-1}^(2^j)`.
#[derive(Clone, Debug)]
pub struct ExpanderFamily {
    q: usize,
    m0: u32,
    graphs: Vec<RotationGraph>,
    certs: Vec<FamilyCert>,
}

impl ExpanderFamily {
    pub fn big_q(&self) -> usize {
        self.q
    }

    pub fn m0(&self) -> u32 {
        self.m0
    }

    /// Number of materialized base expanders.
    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    /// `H_i`, 1-based.
    pub fn h(&self, i: usize) -> Option<&RotationGraph> {
        i.checked_sub(1).and_then(|k| self.graphs.get(k))
    }

    pub fn certs(&self) -> &[FamilyCert] {
        &self.certs
    }

    /// Base expander index and walk length behind `G_t`.
    pub fn g_source(&self, t: usize) -> (usize, usize) {
        source(self.m0, t)
    }

    /// Deepest `t` for which `G_t` is available.
    pub fn max_g_level(&self) -> usize {
        let mut t = 0;
        while self.g_source(t + 1).0 <= self.graphs.len() {
            t += 1;
        }
        t
    }

    /// Certified bound on the mixing ratio of `G_t`: `mu(H)^(2^j)`.
    pub fn g_mu_upper(&self, t: usize) -> Option<f64> {
        let (h, k) = self.g_source(t);
        let c = self.certs.get(h.checked_sub(1)?)?;
        Some(libm::pow(c.mu_upper, k as f64).min(1.0))
    }

    /// Materializes `G_t` under a slot bound.
    pub fn g_graph(&self, t: usize, max_slots: usize) -> Result<RotationGraph, PipelineError> {
        let (h, k) = self.g_source(t);
        let base = self.h(h).ok_or(PipelineError::Range("level beyond the built family"))?;
        Ok(base.power_bounded(k as u32, max_slots)?)
    }
}

pub(crate) fn source(m0: u32, t: usize) -> (usize, usize) {
    let m0 = m0 as usize;
    if t <= m0 {
        (t, 1)
    } else {
        let j = t - m0;
        (m0 + (1usize << j) - 1, 1usize << j)
    }
}

/// Builds `H_1 .. H_h` with `h` large enough for `G_1 .. G_{m1}`.
pub fn build_expander_family(params: &PipelineParams, n: usize) -> Result<ExpanderFamily, PipelineError> {
    params.validate()?;
    if params.mode == Mode::Faithful {
        let (m0, _) = super::faithful_constants(n.max(2) as u64);
        return Err(PipelineError::FaithfulNotMaterializable { m0 });
    }
    build_family_to_level(params, params.m1() as usize)
}

/// Builds enough base expanders for `G_1 .. G_depth`.
pub fn build_family_to_level(params: &PipelineParams, depth: usize) -> Result<ExpanderFamily, PipelineError> {
    params.validate()?;
    let q = params.big_q()?;
    let top = if depth == 0 { 0 } else { source(params.m0, depth).0 };
    let mut fam = ExpanderFamily { q, m0: params.m0, graphs: Vec::new(), certs: Vec::new() };
    let opts = MixingOptions { tol: params.tol, max_iters: 100_000, seed: params.seed };
    let target = params.mu_target.to_f64().unwrap_or(0.0);
    let k = params.power_k;
    let base_deg = integer_root(q, k).ok_or(PipelineError::InvalidParams("Q is not a perfect power_k-th power"))?;
    if params.base_self_loops > base_deg {
        return Err(PipelineError::InvalidParams("more base loops than base degree"));
    }
    for i in 1..=top {
        let vertices = q
            .checked_pow(i as u32)
            .filter(|&v| (v as u128) * (q as u128) <= params.max_slots as u128)
            .ok_or(GraphError::MaterializationBound {
                requested: (q as u128).saturating_pow(i as u32 + 1),
                bound: params.max_slots,
            })?;
        if i == 1 && k == 1 {
            let g = RotationGraph::complete_with_loops(q);
            fam.certs.push(FamilyCert {
                level: 1,
                vertices,
                degree: q,
                mu_lower: 0.0,
                mu_upper: 0.0,
                method: CertMethod::Complete,
            });
            fam.graphs.push(g);
            continue;
        }
        let mut found = None;
        for attempt in 0..params.search_attempts {
            let mut rng = derived(params.seed, ((i as u64) << 32) | attempt as u64);
            let cand = with_loop_labels(random_consistent(&mut rng, vertices, base_deg), params.base_self_loops);
            let est = graph_mixing_ratio(&cand, &opts)?;
            let bound = libm::pow(est.upper, k as f64);
            if bound <= target && BigRational::from_float(bound).is_some_and(|b| b <= params.mu_target) {
                found = Some((cand, est, attempt + 1));
                break;
            }
        }
        let (base, est, attempts) =
            found.ok_or(PipelineError::SearchExhausted { level: i, attempts: params.search_attempts })?;
        let (g, method, lo, up) = if k == 1 {
            (base, CertMethod::Search { attempts }, est.lower, est.upper)
        } else {
            let up = libm::pow(est.upper, k as f64);
            let g = base.power_bounded(k, params.max_slots)?;
            (g, CertMethod::Power { k, base_upper: est.upper, attempts }, 0.0, up)
        };
        fam.certs.push(FamilyCert { level: i, vertices, degree: q, mu_lower: lo, mu_upper: up, method });
        fam.graphs.push(g);
    }
    Ok(fam)
}

fn integer_root(q: usize, k: u32) -> Option<usize> {
    (1..=q).find(|b| (*b as u128).checked_pow(k) == Some(q as u128))
}

/// Turns labels `0..s` into loops. A consistent graph stays consistent since
/// every label class is a permutation.
fn with_loop_labels(g: RotationGraph, s: usize) -> RotationGraph {
    if s == 0 {
        return g;
    }
    let d = g.degree();
    let mut out = g.out_table().to_vec();
    for v in 0..g.n() {
        for l in 0..s {
            out[v * d + l] = v as u32;
        }
    }
    RotationGraph::new(g.n(), d, out, g.in_table().to_vec(), false).expect("loops keep labels proper")
}

/// Rotation map of `G_t`: a vertex and an edge label (little-endian base
/// `Q` walk for powered levels) to the head and its in-label.
pub fn aux_graph_rotate(fam: &ExpanderFamily, t: usize, w: u64, a: u64) -> Result<(u64, u64), PipelineError> {
    if t == 0 {
        return Err(PipelineError::Range("auxiliary levels start at 1"));
    }
    let (h, k) = fam.g_source(t);
    let g = fam.h(h).ok_or(PipelineError::Range("level beyond the built family"))?;
    let q = fam.q as u64;
    if w >= g.n() as u64 {
        return Err(PipelineError::Range("vertex"));
    }
    if (k as u32 as usize) != k || (a as u128) >= (q as u128).pow(k as u32) {
        return Err(PipelineError::Range("label"));
    }
    let mut v = w as usize;
    let mut rest = a;
    let mut back = 0u64;
    for _ in 0..k {
        let (u, b) = g.rotate(v, (rest % q) as usize);
        rest /= q;
        v = u;
        back = back * q + b as u64;
    }
    Ok((v as u64, back))
}

/// Head of edge `a` at `w` in `G_t`.
pub fn aux_graph_access(fam: &ExpanderFamily, t: usize, w: u64, a: u64) -> Result<u64, PipelineError> {
    aux_graph_rotate(fam, t, w, a).map(|r| r.0)
}
