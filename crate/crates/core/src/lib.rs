//! Derandomized squaring of rotation-map graphs and an exact verification
//! toolkit for the spectral and combinatorial bounds around it.
//!
//! The crate is `no_std` (it needs `alloc`). Graphs are stored as rotation
//! maps, linear algebra is exact over arbitrary-precision rationals, and the
//! only floating point lives inside power iteration, whose output is
//! re-certified in rational arithmetic.
//!
//! Module map:
//!
//! * [`graph`]: [`RotationGraph`], [`UndirectedGraph`], powering, validation.
//! * [`codec`]: the `rotg` and `ug` text formats.
//! * [`rational`]: [`RationalVector`] and [`RationalMatrix`].
//! * [`spectral`]: mixing ratios and the norm inequalities.
//! * [`expansion`]: exact edge expansion and the Cheeger-type checks.
//! * [`derand`]: the derandomized square and its mixing bound.
//! * [`pipeline`]: the connectivity algorithm built on iterated squaring.
//! * [`report`]: the pass/fail record shared by every check.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod codec;
pub mod derand;
pub mod expansion;
pub mod generators;
pub mod graph;
pub mod pipeline;
pub mod rational;
pub mod report;
pub mod rng;
pub mod spectral;

pub use derand::{dsquare, f_bound, DSLabel};
pub use expansion::{edge_expansion_exact, ExpansionCertificate};
pub use graph::{GraphError, RotationGraph, UndirectedGraph, Violation};
pub use pipeline::{PipelineParams, StageOneVariant};
pub use rational::{RationalMatrix, RationalVector};
pub use report::{CheckReport, Fact, Witness};
pub use spectral::{mixing_ratio, MixingEstimate, MixingOptions};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
