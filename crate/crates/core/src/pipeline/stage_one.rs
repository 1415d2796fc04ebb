use alloc::vec;
use alloc::vec::Vec;

use super::{PipelineError, StageOneVariant};
use crate::graph::{RotationGraph, UndirectedGraph};

/// Output of [`stage_one`]: the directed graph, the vertex of `Y` each of its
/// vertices came from, and where each fiber starts.
#[derive(Clone, Debug)]
pub struct StageOne {
    pub graph: RotationGraph,
    pub origin: Vec<usize>,
    /// `fiber_start[v]` is `<v, 0>`; fibers are contiguous.
    pub fiber_start: Vec<usize>,
}

impl StageOne {
    pub fn fiber(&self, v: usize) -> core::ops::Range<usize> {
        let end = self.fiber_start.get(v + 1).copied().unwrap_or(self.origin.len());
        self.fiber_start[v]..end
    }
}

/// Replaces each vertex `v` of degree `d` by the cycle `<v,0> .. <v,d-1>`.
/// From `<v,i>`: label 0 goes to `<v,i-1>`, label 1 to `<v,i+1>`, label 2
/// crosses to `<w,j>` where `w` is the `i`-th neighbor of `v` and `v` the
/// `j`-th neighbor of `w`, label 3 is a loop. Every edge keeps its label on
/// arrival. `Star16` adds loops with labels 4..15.
pub fn stage_one(y: &UndirectedGraph, variant: StageOneVariant) -> Result<StageOne, PipelineError> {
    if let Some(v) = y.find_self_loop() {
        return Err(PipelineError::HasSelfLoop { vertex: v });
    }
    if let Some((u, v)) = y.find_multiedge() {
        return Err(PipelineError::HasMultiedge { u, v });
    }
    let nbrs = y.neighbors();
    if let Some(v) = nbrs.iter().position(|l| l.is_empty()) {
        return Err(PipelineError::IsolatedVertex { vertex: v });
    }
    let mut fiber_start = Vec::with_capacity(y.n());
    let mut origin = Vec::new();
    for (v, l) in nbrs.iter().enumerate() {
        fiber_start.push(origin.len());
        origin.extend(core::iter::repeat_n(v, l.len()));
    }
    let n = origin.len();
    let mut out = vec![0u32; n * 4];
    let mut inl = vec![0u32; n * 4];
    for (v, l) in nbrs.iter().enumerate() {
        let d = l.len();
        for i in 0..d {
            let s = (fiber_start[v] + i) * 4;
            let w = l[i];
            let j = nbrs[w].binary_search(&v).expect("neighbor lists are symmetric");
            let targets = [
                fiber_start[v] + (i + d - 1) % d,
                fiber_start[v] + (i + 1) % d,
                fiber_start[w] + j,
                fiber_start[v] + i,
            ];
            for (lab, t) in targets.into_iter().enumerate() {
                out[s + lab] = t as u32;
                inl[s + lab] = lab as u32;
            }
        }
    }
    let mut graph = RotationGraph::new(n, 4, out, inl, false)?;
    if variant == StageOneVariant::Star16 {
        graph = graph.add_self_loops(12);
    }
    Ok(StageOne { graph, origin, fiber_start })
}
