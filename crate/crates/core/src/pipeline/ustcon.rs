use alloc::vec;
use alloc::vec::Vec;

use super::family::build_family_to_level;
use super::traverse::increment;
use super::{
    stage_one, ExpanderFamily, IndexLayout, PipelineError, PipelineParams, StageOne, Traverser, WorkspaceLedger,
};
use crate::graph::UndirectedGraph;

/// Answer of one query plus the work it took.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub connected: bool,
    /// Index `i` of the graph `X_i` whose edges were scanned.
    pub level: u32,
    pub ledger: WorkspaceLedger,
}

/// Family and layout for `X_{m1}`, reusable across input graphs.
#[derive(Clone, Debug)]
pub struct UstconSolver {
    params: PipelineParams,
    fam: ExpanderFamily,
    layout: IndexLayout,
}

impl UstconSolver {
    pub fn new(params: &PipelineParams) -> Result<Self, PipelineError> {
        if params.mode == super::Mode::Faithful {
            return Err(PipelineError::FaithfulNotMaterializable { m0: u64::from(params.m0) });
        }
        let depth = params.m1() as usize - 1;
        let fam = build_family_to_level(params, depth)?;
        let layout = IndexLayout::new(params, depth)?;
        Ok(Self { params: params.clone(), fam, layout })
    }

    pub fn family(&self) -> &ExpanderFamily {
        &self.fam
    }

    pub fn layout(&self) -> &IndexLayout {
        &self.layout
    }

    /// Stage one on `y` without its isolated vertices.
    pub fn prepare<'s>(&'s self, y: &UndirectedGraph) -> Result<Prepared<'s>, PipelineError> {
        let deg = y.degrees();
        let keep: Vec<bool> = deg.iter().map(|&d| d > 0).collect();
        let (core, old) = y.induced(&keep);
        let mut new_id = vec![usize::MAX; y.n()];
        for (k, &o) in old.iter().enumerate() {
            new_id[o] = k;
        }
        let stage = if core.n() == 0 { None } else { Some(stage_one(&core, self.params.variant)?) };
        Ok(Prepared { solver: self, n: y.n(), new_id, stage })
    }
}

/// An input graph after stage one.
#[derive(Clone, Debug)]
pub struct Prepared<'s> {
    solver: &'s UstconSolver,
    n: usize,
    new_id: Vec<usize>,
    stage: Option<StageOne>,
}

impl Prepared<'_> {
    pub fn stage(&self) -> Option<&StageOne> {
        self.stage.as_ref()
    }

    fn level(&self) -> u32 {
        self.solver.params.m1()
    }

    /// Scans the edges of `X_{m1}` at `<s, 0>` in ascending order and stops
    /// at the first head in the fiber of `t`.
    pub fn query(&self, s: usize, t: usize) -> Result<Verdict, PipelineError> {
        if s >= self.n || t >= self.n {
            return Err(PipelineError::Range("query vertex"));
        }
        let mut ledger = WorkspaceLedger::default();
        let trivial = |c| Ok(Verdict { connected: c, level: self.level(), ledger });
        if s == t {
            return trivial(true);
        }
        let (a, b) = (self.new_id[s], self.new_id[t]);
        let Some(st) = self.stage.as_ref().filter(|_| a != usize::MAX && b != usize::MAX) else {
            return trivial(false);
        };
        let l = &self.solver.layout;
        let m = l.depth();
        let tr = Traverser::new(&st.graph, &self.solver.fam, l)?;
        let x = st.fiber_start[a];
        let mut regs = vec![0u32; l.len(m)];
        let mut scratch = regs.clone();
        loop {
            scratch.copy_from_slice(&regs);
            let y = tr.rotate_in_place(x, &mut scratch, m, &mut ledger, None);
            if st.origin[y] == b {
                return Ok(Verdict { connected: true, level: self.level(), ledger });
            }
            if !increment(&mut regs, l.big_q() as u32) {
                return Ok(Verdict { connected: false, level: self.level(), ledger });
            }
        }
    }

    pub fn connected(&self, s: usize, t: usize) -> Result<bool, PipelineError> {
        self.query(s, t).map(|v| v.connected)
    }

    /// Vertices of `Y` whose fiber holds the head of some `X_{m1}` edge at
    /// `<s, 0>`, plus `s` itself.
    pub fn reach_set(&self, s: usize) -> Result<Vec<bool>, PipelineError> {
        if s >= self.n {
            return Err(PipelineError::Range("query vertex"));
        }
        let mut out = vec![false; self.n];
        out[s] = true;
        let a = self.new_id[s];
        let Some(st) = self.stage.as_ref().filter(|_| a != usize::MAX) else {
            return Ok(out);
        };
        let mut old = vec![0usize; st.fiber_start.len()];
        for (o, &k) in self.new_id.iter().enumerate() {
            if k != usize::MAX {
                old[k] = o;
            }
        }
        let l = &self.solver.layout;
        let m = l.depth();
        let tr = Traverser::new(&st.graph, &self.solver.fam, l)?;
        let mut ledger = WorkspaceLedger::default();
        let mut regs = vec![0u32; l.len(m)];
        let mut scratch = regs.clone();
        loop {
            scratch.copy_from_slice(&regs);
            let y = tr.rotate_in_place(st.fiber_start[a], &mut scratch, m, &mut ledger, None);
            out[old[st.origin[y]]] = true;
            if !increment(&mut regs, l.big_q() as u32) {
                return Ok(out);
            }
        }
    }
}

/// Whether `s` and `t` are connected in `y`, decided by one edge scan.
pub fn ustcon(y: &UndirectedGraph, s: usize, t: usize, params: &PipelineParams) -> Result<bool, PipelineError> {
    UstconSolver::new(params)?.prepare(y)?.connected(s, t)
}
