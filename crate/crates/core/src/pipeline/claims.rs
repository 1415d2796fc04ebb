use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{ExpanderFamily, PipelineError};
use crate::derand::dsquare_bounded;
use crate::graph::{GraphError, RotationGraph};
use crate::report::{CheckReport, Witness};
use crate::spectral::{graph_mixing_ratio, MixingOptions};

/// `X_1 = x^q, X_2, ..` by explicit squaring, stopping after `levels` graphs
/// or at the first level that would exceed `max_slots`.
pub fn materialize_levels(
    x: &RotationGraph,
    fam: &ExpanderFamily,
    q: u32,
    levels: usize,
    max_slots: usize,
) -> Result<Vec<RotationGraph>, PipelineError> {
    let mut out = Vec::new();
    if levels == 0 {
        return Ok(out);
    }
    out.push(x.power_bounded(q, max_slots)?);
    for t in 1..levels {
        if t > fam.max_g_level() {
            break;
        }
        let cur = out.last().expect("nonempty");
        let slots = cur.n() as u128 * cur.degree() as u128 * (fam.big_q() as u128).pow(fam.g_source(t).1 as u32);
        if slots > max_slots as u128 {
            break;
        }
        let g = match fam.g_graph(t, max_slots) {
            Ok(g) => g,
            Err(PipelineError::Graph(GraphError::DegreeOverflow { .. })) => break,
            Err(e) => return Err(e),
        };
        out.push(dsquare_bounded(cur, &g, max_slots)?);
    }
    Ok(out)
}

fn f(lambda: f64, mu: f64) -> f64 {
    mu + (1.0 - mu) * lambda * lambda
}

/// Per-level check of `λ(X_{i+1}) <= f(λ(X_i), μ(G_i))` on the materialized
/// levels, plus spectral-gap growth by `3/2` wherever the gap is at most
/// `1/4` and `μ(G_i) <= 1/100`.
pub fn verify_claim8(
    x: &RotationGraph,
    fam: &ExpanderFamily,
    q: u32,
    levels: usize,
    opts: &MixingOptions,
    max_slots: usize,
) -> Result<CheckReport, PipelineError> {
    let xs = materialize_levels(x, fam, q, levels, max_slots)?;
    let mut rep = CheckReport::new("level-gap").with_tol(opts.tol).with_seed(opts.seed);
    let mut prev = graph_mixing_ratio(&xs[0], opts)?;
    rep.fact("levels", xs.len());
    rep.fact("lambda_1", prev.upper);
    let mut growth_checked = 0usize;
    for (i, next) in xs.iter().enumerate().skip(1) {
        let mu = fam.g_mu_upper(i).unwrap_or(1.0);
        let est = graph_mixing_ratio(next, opts)?;
        let bound = f(prev.upper.min(1.0), mu);
        let lvl = i + 1;
        rep.require(est.lower <= bound + opts.tol, || Witness::Vector(est.witness.clone()));
        let gamma = 1.0 - prev.upper;
        if gamma <= 0.25 && mu <= 0.01 {
            growth_checked += 1;
            let ok = 1.0 - est.upper >= 1.5 * gamma - opts.tol;
            rep.require(ok, || Witness::Note(format!("gap did not grow at level {lvl}")));
        }
        rep.fact(&format!("mu_{i}"), mu)
            .fact(&format!("f_{i}"), bound)
            .fact(&format!("lambda_{lvl}"), est.upper)
            .fact(&format!("lambda_{lvl}_lower"), est.lower);
        prev = est;
    }
    rep.fact("growth_checks", growth_checked);
    rep.fact("lambda_last", prev.upper);
    Ok(rep)
}

/// If `λ_upper(g) < 1/n^2`, every adjacency entry is at least
/// `1/n - 1/n^2`; checked exactly on the edge counts. A graph that misses
/// the premise passes vacuously with `premise_met = false`.
pub fn complete_adjacency_check(g: &RotationGraph, opts: &MixingOptions) -> Result<CheckReport, PipelineError> {
    let n = g.n();
    let est = graph_mixing_ratio(g, opts)?;
    let mut rep = CheckReport::new("complete-adjacency").with_tol(opts.tol).with_seed(opts.seed);
    let premise = est.upper < 1.0 / (n as f64 * n as f64);
    let counts = g.adjacency_counts();
    let (pos, &min) = counts.iter().enumerate().min_by_key(|p| *p.1).expect("n >= 1");
    let d = g.degree() as u128;
    let nn = n as u128;
    if premise {
        let ok = min as u128 * nn * nn >= d * (nn - 1);
        rep.require(ok && min >= 1, || Witness::Vertices(alloc::vec![pos % n, pos / n]));
    }
    rep.fact("premise_met", premise)
        .fact("lambda_upper", est.upper)
        .fact("min_entry", BigRational::new(BigInt::from(min), BigInt::from(g.degree())))
        .fact("n", n);
    Ok(rep)
}
