//! Connectivity through iterated derandomized squaring.
//!
//! An undirected graph `Y` becomes a 4-regular (or 16-regular) directed graph
//! `X` by [`stage_one`]. Then `X_1 = X^q` and `X_{i+1} = X_i ⓢ G_i`, where the
//! auxiliary graphs `G_i` come from an [`ExpanderFamily`]. Edges of the last
//! graph are never materialized: [`traverse_edge`] walks them with a fixed
//! register file and a [`WorkspaceLedger`] counts the bits it keeps live.
//!
//! Two parameter sets exist. Faithful parameters derive `m0` and `ℓ` from `N`
//! and are only used symbolically ([`compute_schedule`]); desk parameters are
//! small enough to run.

mod claims;
mod family;
mod schedule;
mod stage_one;
mod traverse;
mod ustcon;

pub use claims::{complete_adjacency_check, materialize_levels, verify_claim8};
pub use family::{
    aux_graph_access, aux_graph_rotate, build_expander_family, build_family_to_level, CertMethod, ExpanderFamily,
    FamilyCert,
};
pub use schedule::{ceil_log2, compute_schedule, faithful_constants, ParamInequalities, PipelineSchedule, ScheduleRow};
pub use stage_one::{stage_one, StageOne};
pub use traverse::{
    traverse_edge, traverse_rotation, universal_traversal_check, EdgeIndex, IndexLayout, Traverser, WorkspaceLedger,
};
pub use ustcon::{ustcon, Prepared, UstconSolver, Verdict};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::derand::DerandError;
use crate::graph::{GraphError, DEFAULT_MAX_SLOTS};
use crate::rng::DEFAULT_SEED;
use crate::spectral::SpectralError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Desk,
    Faithful,
}

/// Degree-4 reduction, or the same graph with twelve extra loops per vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StageOneVariant {
    Classic4,
    Star16,
}

impl StageOneVariant {
    pub fn degree(self) -> usize {
        match self {
            StageOneVariant::Classic4 => 4,
            StageOneVariant::Star16 => 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineParams {
    pub mode: Mode,
    pub variant: StageOneVariant,
    /// `X_1 = X^q`, so `Q = deg(X)^q`.
    pub q: u32,
    pub m0: u32,
    pub ell: u32,
    /// Every base expander must certify a mixing ratio at most this.
    pub mu_target: BigRational,
    /// Loops placed on labels `0..base_self_loops` of each searched graph.
    pub base_self_loops: usize,
    /// Base expanders are searched at degree `Q^(1/power_k)` and powered.
    pub power_k: u32,
    pub seed: u64,
    pub search_attempts: u32,
    pub tol: f64,
    pub max_slots: usize,
}

impl PipelineParams {
    /// Runnable defaults: `Q = 4`, `m0 = 4`, `ℓ = 2`.
    pub fn desk() -> Self {
        Self {
            mode: Mode::Desk,
            variant: StageOneVariant::Classic4,
            q: 1,
            m0: 4,
            ell: 2,
            mu_target: BigRational::new(BigInt::from(19), BigInt::from(20)),
            base_self_loops: 0,
            power_k: 1,
            seed: DEFAULT_SEED,
            search_attempts: 64,
            tol: 1e-6,
            max_slots: DEFAULT_MAX_SLOTS,
        }
    }

    /// Constants as in the analysis: `Q = 16^q`, `μ = 1/100`; `m0` and `ℓ`
    /// are derived from `N` by [`faithful_constants`].
    pub fn faithful() -> Self {
        Self {
            mode: Mode::Faithful,
            variant: StageOneVariant::Star16,
            mu_target: BigRational::new(BigInt::one(), BigInt::from(100)),
            ..Self::desk()
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.q == 0 {
            return Err(PipelineError::InvalidParams("q must be at least 1"));
        }
        if self.m0 == 0 {
            return Err(PipelineError::InvalidParams("m0 must be at least 1"));
        }
        if self.mu_target <= BigRational::zero() || self.mu_target >= BigRational::one() {
            return Err(PipelineError::InvalidParams("mu_target must lie in (0, 1)"));
        }
        if self.power_k == 0 {
            return Err(PipelineError::InvalidParams("power_k must be at least 1"));
        }
        if self.ell > 16 {
            return Err(PipelineError::InvalidParams("ell above 16 is not supported"));
        }
        Ok(())
    }

    /// `Q = deg(X)^q`.
    pub fn big_q(&self) -> Result<usize, PipelineError> {
        (self.variant.degree() as u64)
            .checked_pow(self.q)
            .filter(|&x| x <= u32::MAX as u64)
            .map(|x| x as usize)
            .ok_or(PipelineError::InvalidParams("Q does not fit in 32 bits"))
    }

    pub fn m1(&self) -> u32 {
        self.m0 + self.ell
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum PipelineError {
    #[error("invalid parameters: {0}")]
    InvalidParams(&'static str),
    #[error("input graph has a self-loop at {vertex}")]
    HasSelfLoop { vertex: usize },
    #[error("input graph has parallel edges between {u} and {v}")]
    HasMultiedge { u: usize, v: usize },
    #[error("vertex {vertex} is isolated")]
    IsolatedVertex { vertex: usize },
    #[error("no base expander for level {level} within {attempts} attempts")]
    SearchExhausted { level: usize, attempts: u32 },
    #[error("faithful constants (m0 = {m0}) give graphs too large to materialize")]
    FaithfulNotMaterializable { m0: u64 },
    #[error("out of range: {0}")]
    Range(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Derand(#[from] DerandError),
}
