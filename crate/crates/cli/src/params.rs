use std::path::Path;

use dsq_core::pipeline::{Mode, PipelineParams, StageOneVariant};
use dsq_core::BigRational;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::CliError;

/// Optional overrides read from `--params-file`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub mode: Option<String>,
    pub variant: Option<String>,
    pub q: Option<u32>,
    pub m0: Option<u32>,
    pub ell: Option<u32>,
    pub mu_target: Option<String>,
    pub base_self_loops: Option<usize>,
    pub power_k: Option<u32>,
    pub seed: Option<u64>,
    pub search_attempts: Option<u32>,
    pub tol: Option<f64>,
}

pub fn parse_mode(s: &str) -> Result<Mode, CliError> {
    match s {
        "desk" => Ok(Mode::Desk),
        "faithful" => Ok(Mode::Faithful),
        _ => Err(CliError::Usage(format!("unknown mode {s:?}, expected desk or faithful"))),
    }
}

fn parse_variant(s: &str) -> Result<StageOneVariant, CliError> {
    match s {
        "classic4" => Ok(StageOneVariant::Classic4),
        "star16" => Ok(StageOneVariant::Star16),
        _ => Err(CliError::Usage(format!("unknown variant {s:?}, expected classic4 or star16"))),
    }
}

/// Mode defaults, then the file, then explicit flags.
pub fn resolve(
    default_mode: Mode,
    mode_flag: Option<&str>,
    file: Option<&Path>,
    seed: Option<u64>,
    tol: Option<f64>,
) -> Result<PipelineParams, CliError> {
    let pf = match file {
        Some(path) => {
            let text = crate::read(path)?;
            serde_json::from_str::<ParamsFile>(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => ParamsFile::default(),
    };
    let mode = match mode_flag.or(pf.mode.as_deref()) {
        Some(m) => parse_mode(m)?,
        None => default_mode,
    };
    let mut p = match mode {
        Mode::Desk => PipelineParams::desk(),
        Mode::Faithful => PipelineParams::faithful(),
    };
    if let Some(v) = &pf.variant {
        p.variant = parse_variant(v)?;
    }
    if let Some(mu) = &pf.mu_target {
        p.mu_target = mu.parse::<BigRational>().map_err(|_| CliError::Usage(format!("mu_target {mu:?} is not p/q")))?;
    }
    p.q = pf.q.unwrap_or(p.q);
    p.m0 = pf.m0.unwrap_or(p.m0);
    p.ell = pf.ell.unwrap_or(p.ell);
    p.base_self_loops = pf.base_self_loops.unwrap_or(p.base_self_loops);
    p.power_k = pf.power_k.unwrap_or(p.power_k);
    p.search_attempts = pf.search_attempts.unwrap_or(p.search_attempts);
    p.seed = seed.or(pf.seed).unwrap_or(p.seed);
    p.tol = tol.or(pf.tol).unwrap_or(p.tol);
    p.validate()?;
    Ok(p)
}

pub fn to_json(p: &PipelineParams) -> Value {
    json!({
        "mode": match p.mode { Mode::Desk => "desk", Mode::Faithful => "faithful" },
        "variant": match p.variant { StageOneVariant::Classic4 => "classic4", StageOneVariant::Star16 => "star16" },
        "q": p.q,
        "m0": p.m0,
        "ell": p.ell,
        "mu_target": crate::json::rational(&p.mu_target),
        "base_self_loops": p.base_self_loops,
        "power_k": p.power_k,
        "seed": p.seed,
        "search_attempts": p.search_attempts,
        "tol": p.tol,
    })
}
