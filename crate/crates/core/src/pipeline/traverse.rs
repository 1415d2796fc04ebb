//! Implicit edge traversal in the iterated square.
//!
//! An edge of `X_{m+1}` is named by `m + 1` registers `<z, a_1, .., a_m>`
//! stored as one little-endian vector of base-`Q` digits: `z` is one digit,
//! `a_t` has `w_t` digits (`1` for `t <= m0`, `2^(t-m0)` above). The prefix
//! holding `z .. a_{t-1}` is at once an edge label of `X_t` and a vertex of
//! `G_t`.
//!
//! Unfolding the recursion `S(t) = S(t-1), G_t, S(t-1)` gives the ruler
//! sequence: `2^m` base walks separated by auxiliary steps, the `k`-th
//! auxiliary step being at level `1 + trailing_zeros(k)`. Each step rewrites
//! its slice of the register file in place with the matching in-label, so
//! after a traversal the registers hold the in-label at the head and the only
//! control state is the `m`-bit counter `k`.

use alloc::vec;
use alloc::vec::Vec;

use super::family::source;
use super::schedule::ceil_log2;
use super::{ExpanderFamily, PipelineError, PipelineParams};
use crate::graph::RotationGraph;
use crate::report::{CheckReport, Witness};

/// Register widths in digits, `w_0 = 1` for `z` then `w_1 .. w_depth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexLayout {
    q: usize,
    base_degree: usize,
    q_exp: u32,
    m0: u32,
    widths: Vec<usize>,
    prefix: Vec<usize>,
}

impl IndexLayout {
    pub fn new(params: &PipelineParams, depth: usize) -> Result<Self, PipelineError> {
        params.validate()?;
        let q = params.big_q()?;
        let widths: Vec<usize> = (0..=depth).map(|t| if t == 0 { 1 } else { source(params.m0, t).1 }).collect();
        let mut prefix = Vec::with_capacity(depth + 1);
        let mut acc = 0;
        for w in &widths {
            acc += w;
            prefix.push(acc);
        }
        Ok(Self { q, base_degree: params.variant.degree(), q_exp: params.q, m0: params.m0, widths, prefix })
    }

    pub fn big_q(&self) -> usize {
        self.q
    }

    pub fn depth(&self) -> usize {
        self.widths.len() - 1
    }

    /// Width of register `a_t` (`t = 0` is `z`) in digits.
    pub fn width(&self, t: usize) -> usize {
        self.widths[t]
    }

    /// Digits naming an edge of `X_{t+1}`.
    pub fn len(&self, t: usize) -> usize {
        self.prefix[t]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `ceil(log2 Q)`.
    pub fn digit_bits(&self) -> u64 {
        ceil_log2(self.q as u64)
    }

    /// Out-degree of `X_{t+1}`, if it fits.
    pub fn degree(&self, t: usize) -> Option<u128> {
        (self.q as u128).checked_pow(self.len(t) as u32)
    }

    pub fn register_bits(&self, t: usize) -> u64 {
        self.widths[t] as u64 * self.digit_bits()
    }

    fn scratch_bits(&self, width: usize) -> u64 {
        if width > 1 {
            ceil_log2(width as u64) + self.digit_bits()
        } else {
            0
        }
    }
}

/// Edge name for `X_{m+1}` as base-`Q` digits, least significant first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeIndex {
    digits: Vec<u32>,
}

impl EdgeIndex {
    pub fn from_digits(layout: &IndexLayout, m: usize, digits: Vec<u32>) -> Result<Self, PipelineError> {
        if m > layout.depth() {
            return Err(PipelineError::Range("level beyond the layout"));
        }
        if digits.len() != layout.len(m) {
            return Err(PipelineError::Range("edge index has the wrong number of digits"));
        }
        if digits.iter().any(|&d| d as usize >= layout.q) {
            return Err(PipelineError::Range("digit not below Q"));
        }
        Ok(Self { digits })
    }

    pub fn from_packed(layout: &IndexLayout, m: usize, mut w: u128) -> Result<Self, PipelineError> {
        if m > layout.depth() {
            return Err(PipelineError::Range("level beyond the layout"));
        }
        if layout.degree(m).is_some_and(|d| w >= d) {
            return Err(PipelineError::Range("edge index exceeds the degree"));
        }
        let q = layout.q as u128;
        let digits = (0..layout.len(m))
            .map(|_| {
                let d = (w % q) as u32;
                w /= q;
                d
            })
            .collect();
        Ok(Self { digits })
    }

    pub fn to_packed(&self, q: usize) -> u128 {
        self.digits.iter().rev().fold(0u128, |acc, &d| acc * q as u128 + d as u128)
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// Register `a_t` (`t = 0` is `z`).
    pub fn register(&self, layout: &IndexLayout, t: usize) -> &[u32] {
        let lo = if t == 0 { 0 } else { layout.len(t - 1) };
        &self.digits[lo..layout.len(t)]
    }
}

/// Live-bit and step accounting for traversals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WorkspaceLedger {
    pub peak_bits: u64,
    /// Base-graph steps.
    pub steps: u64,
    /// Steps in base expanders.
    pub aux_steps: u64,
    pub traversals: u64,
}

impl WorkspaceLedger {
    pub fn merge(&mut self, other: &WorkspaceLedger) {
        self.peak_bits = self.peak_bits.max(other.peak_bits);
        self.steps += other.steps;
        self.aux_steps += other.aux_steps;
        self.traversals += other.traversals;
    }

    fn live(&mut self, bits: u64) {
        self.peak_bits = self.peak_bits.max(bits);
    }
}

/// Base graph, family and layout bundled for repeated traversals.
#[derive(Clone, Copy, Debug)]
pub struct Traverser<'a> {
    x: &'a RotationGraph,
    fam: &'a ExpanderFamily,
    layout: &'a IndexLayout,
}

impl<'a> Traverser<'a> {
    pub fn new(x: &'a RotationGraph, fam: &'a ExpanderFamily, layout: &'a IndexLayout) -> Result<Self, PipelineError> {
        if x.degree() != layout.base_degree {
            return Err(PipelineError::Range("base graph degree differs from the layout"));
        }
        if fam.big_q() != layout.q || fam.m0() != layout.m0 {
            return Err(PipelineError::Range("family and layout disagree on Q or m0"));
        }
        if layout.depth() > fam.max_g_level() {
            return Err(PipelineError::Range("family too shallow for the layout"));
        }
        Ok(Self { x, fam, layout })
    }

    pub fn layout(&self) -> &IndexLayout {
        self.layout
    }

    pub fn base(&self) -> &RotationGraph {
        self.x
    }

    /// Rotation of `X_{m+1}` in place: `regs` (length `len(m)`) becomes the
    /// in-label at the returned head. `visit` sees every base vertex passed.
    pub fn rotate_in_place(
        &self,
        start: usize,
        regs: &mut [u32],
        m: usize,
        ledger: &mut WorkspaceLedger,
        mut visit: Option<&mut dyn FnMut(usize)>,
    ) -> usize {
        let l = self.layout;
        debug_assert_eq!(regs.len(), l.len(m));
        let vertex_bits = ceil_log2(self.x.n() as u64).max(1);
        let fixed = vertex_bits + l.len(m) as u64 * l.digit_bits() + m as u64;
        let x_scratch = l.scratch_bits(l.q_exp as usize);
        ledger.live(fixed + x_scratch);
        ledger.traversals += 1;
        let mut v = start;
        if let Some(f) = visit.as_mut() {
            f(v);
        }
        for k in 0u64..1u64 << m {
            if k > 0 {
                let t = 1 + k.trailing_zeros() as usize;
                ledger.live(fixed + l.scratch_bits(l.width(t)));
                self.aux_step(t, &mut regs[..l.len(t)], ledger);
            }
            v = self.base_walk(v, &mut regs[0], ledger, &mut visit);
        }
        v
    }

    /// One `X_1 = X^q` step on digit `z`.
    fn base_walk(
        &self,
        mut v: usize,
        z: &mut u32,
        ledger: &mut WorkspaceLedger,
        visit: &mut Option<&mut dyn FnMut(usize)>,
    ) -> usize {
        let d = self.layout.base_degree as u32;
        let mut rest = *z;
        let mut back = 0u32;
        for _ in 0..self.layout.q_exp {
            let (u, b) = self.x.rotate(v, (rest % d) as usize);
            rest /= d;
            back = back * d + b as u32;
            v = u;
            if let Some(f) = visit.as_mut() {
                f(v);
            }
        }
        *z = back;
        ledger.steps += u64::from(self.layout.q_exp);
        v
    }

    /// Rotation of `G_t` on `regs[..len(t)]`: the prefix is the vertex, the
    /// last `w_t` digits the walk in the base expander.
    fn aux_step(&self, t: usize, regs: &mut [u32], ledger: &mut WorkspaceLedger) {
        let (h, k) = source(self.layout.m0, t);
        let g = self.fam.h(h).expect("checked against max_g_level");
        let q = self.layout.q;
        let split = regs.len() - k;
        let (vert, walk) = regs.split_at_mut(split);
        let mut v = vert.iter().rev().fold(0usize, |acc, &d| acc * q + d as usize);
        for a in walk.iter_mut() {
            let (u, b) = g.rotate(v, *a as usize);
            *a = b as u32;
            v = u;
        }
        walk.reverse();
        for d in vert.iter_mut() {
            *d = (v % q) as u32;
            v /= q;
        }
        ledger.aux_steps += k as u64;
    }
}

/// Head of edge `w` at `x` in `X_{m+1}`.
pub fn traverse_edge(
    x: &RotationGraph,
    fam: &ExpanderFamily,
    layout: &IndexLayout,
    start: usize,
    w: &EdgeIndex,
    m: usize,
    ledger: &mut WorkspaceLedger,
) -> Result<usize, PipelineError> {
    traverse_rotation(x, fam, layout, start, w, m, ledger).map(|r| r.0)
}

/// Head and in-label of edge `w` at `x` in `X_{m+1}`.
pub fn traverse_rotation(
    x: &RotationGraph,
    fam: &ExpanderFamily,
    layout: &IndexLayout,
    start: usize,
    w: &EdgeIndex,
    m: usize,
    ledger: &mut WorkspaceLedger,
) -> Result<(usize, EdgeIndex), PipelineError> {
    if start >= x.n() {
        return Err(PipelineError::Range("start vertex"));
    }
    let w = EdgeIndex::from_digits(layout, m, w.digits.clone())?;
    let tr = Traverser::new(x, fam, layout)?;
    let mut regs = w.digits;
    let y = tr.rotate_in_place(start, &mut regs, m, ledger, None);
    Ok((y, EdgeIndex { digits: regs }))
}

/// Advances little-endian base-`q` digits; false after the last value.
pub(crate) fn increment(digits: &mut [u32], q: u32) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < q {
            return true;
        }
        *d = 0;
    }
    false
}

/// Every base vertex passed by some traversal of depth `layout.depth()`
/// from `start`, compared with the component of `start` in `X^q`.
pub fn universal_traversal_check(
    x: &RotationGraph,
    fam: &ExpanderFamily,
    layout: &IndexLayout,
    start: usize,
) -> Result<CheckReport, PipelineError> {
    if start >= x.n() {
        return Err(PipelineError::Range("start vertex"));
    }
    let m = layout.depth();
    let tr = Traverser::new(x, fam, layout)?;
    let mut touched = vec![false; x.n()];
    let mut ledger = WorkspaceLedger::default();
    let mut regs = vec![0u32; layout.len(m)];
    let mut scratch = regs.clone();
    loop {
        scratch.copy_from_slice(&regs);
        let mut mark = |v: usize| touched[v] = true;
        tr.rotate_in_place(start, &mut scratch, m, &mut ledger, Some(&mut mark));
        if !increment(&mut regs, layout.q as u32) {
            break;
        }
    }
    let x1 = x.power(layout.q_exp)?;
    let comp = x1.reachable_from(start);
    let set = |b: &[bool]| b.iter().enumerate().filter(|p| *p.1).map(|p| p.0).collect::<Vec<_>>();
    let mut rep = CheckReport::new("universal-traversal");
    let diff: Vec<usize> = (0..x.n()).filter(|&v| touched[v] != comp[v]).collect();
    rep.require(diff.is_empty(), || Witness::Vertices(diff.clone()));
    rep.fact("start", start)
        .fact("depth", m)
        .fact("touched", set(&touched).len())
        .fact("component", set(&comp).len())
        .fact("traversals", ledger.traversals)
        .fact("peak_bits", ledger.peak_bits);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::family::build_family_to_level;

    #[test]
    fn layout_widths() {
        let p = PipelineParams::desk();
        let l = IndexLayout::new(&p, 6).unwrap();
        assert_eq!((0..=6).map(|t| l.width(t)).collect::<Vec<_>>(), vec![1, 1, 1, 1, 1, 2, 4]);
        assert_eq!(l.len(5), 7);
        assert_eq!(l.degree(5), Some(4u128.pow(7)));
    }

    #[test]
    fn packing_round_trip() {
        let l = IndexLayout::new(&PipelineParams::desk(), 5).unwrap();
        let w = EdgeIndex::from_packed(&l, 5, 12345).unwrap();
        assert_eq!(w.to_packed(4), 12345);
        assert!(EdgeIndex::from_packed(&l, 5, 1 << 14).is_err());
        assert_eq!(w.register(&l, 5).len(), 2);
    }

    #[test]
    fn level_zero_is_a_base_step() {
        let p = PipelineParams { m0: 2, ell: 0, ..PipelineParams::desk() };
        let fam = build_family_to_level(&p, 2).unwrap();
        let l = IndexLayout::new(&p, 2).unwrap();
        let x = RotationGraph::complete_with_loops(4);
        let mut led = WorkspaceLedger::default();
        for z in 0..4 {
            let w = EdgeIndex::from_packed(&l, 0, z).unwrap();
            assert_eq!(traverse_edge(&x, &fam, &l, 1, &w, 0, &mut led).unwrap(), z as usize);
        }
        assert_eq!(led.steps, 4);
    }
}
