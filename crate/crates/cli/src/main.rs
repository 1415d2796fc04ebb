//! `dsq`: connectivity through derandomized squaring, from the shell.
//!
//! Exit codes: 0 and 1 are verdicts (connected or not, checks passed or
//! not), 2 is an error. JSON goes to stdout, human-readable tables to stderr.

mod json;
mod params;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use dsq_core::codec::{emit_rotation_map, parse_edge_list, parse_rotation_map, ParseError};
use dsq_core::derand::DerandError;
use dsq_core::pipeline::{compute_schedule, Mode, PipelineError, UstconSolver};
use dsq_core::{dsquare, CheckReport, RotationGraph, Witness};
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Derand(#[from] DerandError),
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

#[derive(Parser)]
#[command(name = "dsq", version, about = "Derandomized squaring and undirected connectivity")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct ParamFlags {
    /// JSON object overriding pipeline parameters.
    #[arg(long)]
    params_file: Option<PathBuf>,
    #[arg(long, value_parser = ["desk", "faithful"])]
    mode: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    InLabel,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether s and t are connected in an edge-list graph.
    Ustcon {
        file: PathBuf,
        s: usize,
        t: usize,
        #[command(flatten)]
        params: ParamFlags,
    },
    /// Derandomized square of two rotation-map graphs.
    Dsquare {
        x: PathBuf,
        g: PathBuf,
        /// Write the result here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Validate the result, re-read it, and compare with X^2 when G is complete.
        #[arg(long)]
        check: bool,
    },
    /// Run the inequality suite.
    Verify {
        /// Restrict to these checks (repeatable).
        #[arg(long)]
        suite: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum)]
        inject_fault: Option<FaultArg>,
        /// Print the available suite names.
        #[arg(long)]
        list: bool,
    },
    /// Level table and parameter inequalities for N vertices.
    Schedule {
        n: u64,
        #[command(flatten)]
        params: ParamFlags,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            println!("{}", json!({ "error": e.to_string() }));
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Cmd) -> Result<u8, CliError> {
    match cmd {
        Cmd::Ustcon { file, s, t, params } => cmd_ustcon(&file, s, t, &params),
        Cmd::Dsquare { x, g, out, check } => cmd_dsquare(&x, &g, out.as_deref(), check),
        Cmd::Verify { suite, seed, tol, inject_fault, list } => {
            if list {
                for s in verify::SUITES {
                    println!("{s}");
                }
                return Ok(0);
            }
            let fault = inject_fault.map(|FaultArg::InLabel| verify::Fault::InLabel);
            cmd_verify(&suite, seed, tol, fault)
        }
        Cmd::Schedule { n, params } => cmd_schedule(n, &params),
    }
}

fn resolve(default: Mode, f: &ParamFlags) -> Result<dsq_core::PipelineParams, CliError> {
    params::resolve(default, f.mode.as_deref(), f.params_file.as_deref(), f.seed, f.tol)
}

fn cmd_ustcon(file: &Path, s: usize, t: usize, flags: &ParamFlags) -> Result<u8, CliError> {
    let p = resolve(Mode::Desk, flags)?;
    let y = parse_edge_list(&read(file)?).map_err(|source| CliError::Parse { path: file.to_path_buf(), source })?;
    if s >= y.n() || t >= y.n() {
        return Err(CliError::Usage(format!("query vertex out of range for {} vertices", y.n())));
    }
    let solver = UstconSolver::new(&p)?;
    let v = solver.prepare(&y)?.query(s, t)?;
    let out = json!({
        "connected": v.connected,
        "level": v.level,
        "ledger": {
            "peak_bits": v.ledger.peak_bits,
            "steps": v.ledger.steps,
            "aux_steps": v.ledger.aux_steps,
            "traversals": v.ledger.traversals,
        },
        "params": params::to_json(&p),
        "seed": p.seed,
    });
    println!("{out}");
    eprintln!(
        "{s} and {t}: {} (X_{} scan, {} traversals, peak {} bits)",
        if v.connected { "connected" } else { "not connected" },
        v.level,
        v.ledger.traversals,
        v.ledger.peak_bits
    );
    Ok(if v.connected { 0 } else { 1 })
}

fn load_rotg(path: &Path) -> Result<RotationGraph, CliError> {
    parse_rotation_map(&read(path)?).map_err(|source| CliError::Parse { path: path.to_path_buf(), source })
}

fn dsquare_checks(x: &RotationGraph, g: &RotationGraph, sq: &RotationGraph, text: &str) -> Vec<CheckReport> {
    let mut out = vec![sq.validate_report()];
    let mut rt = CheckReport::new("round-trip");
    let back = parse_rotation_map(text);
    let same = back.as_ref().is_ok_and(|b| b.out_table() == sq.out_table() && b.in_table() == sq.in_table());
    rt.require(same, || Witness::Note(String::from("re-read graph differs")));
    out.push(rt);
    let mut sqc = CheckReport::new("complete-square");
    let complete = *g == RotationGraph::complete_with_loops(g.n());
    sqc.fact("applicable", complete);
    if complete {
        let want = x.power(2).map(|p| p.adjacency_counts());
        let ok = want.as_ref().is_ok_and(|w| *w == sq.adjacency_counts());
        sqc.require(ok, || Witness::Note(String::from("adjacency differs from X^2")));
    }
    out.push(sqc);
    out
}

fn cmd_dsquare(xp: &Path, gp: &Path, out: Option<&Path>, check: bool) -> Result<u8, CliError> {
    let x = load_rotg(xp)?;
    let g = load_rotg(gp)?;
    let sq = dsquare(&x, &g)?;
    let text = emit_rotation_map(&sq);
    match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?
        }
        None => print!("{text}"),
    }
    eprintln!(
        "X: {} vertices, degree {}; G: {} vertices, degree {}; result degree {}",
        x.n(),
        x.degree(),
        g.n(),
        g.degree(),
        sq.degree()
    );
    if !check {
        return Ok(0);
    }
    let reports = dsquare_checks(&x, &g, &sq, &text);
    let ok = reports.iter().all(CheckReport::ok);
    let summary = json!({
        "n": sq.n(),
        "degree": sq.degree(),
        "ok": ok,
        "checks": reports.iter().map(|r| json::report(r, None)).collect::<Vec<_>>(),
    });
    // stdout carries the graph unless it went to a file
    if out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    for r in &reports {
        eprintln!("  {:<16} {}", r.check(), if r.ok() { "ok" } else { "FAILED" });
    }
    Ok(if ok { 0 } else { 1 })
}

fn cmd_verify(
    suites: &[String],
    seed: Option<u64>,
    tol: Option<f64>,
    fault: Option<verify::Fault>,
) -> Result<u8, CliError> {
    let names: Vec<&str> = if suites.is_empty() {
        verify::SUITES.to_vec()
    } else {
        for s in suites {
            if !verify::SUITES.contains(&s.as_str()) {
                return Err(CliError::Usage(format!("unknown suite {s:?}; see `dsq verify --list`")));
            }
        }
        suites.iter().map(String::as_str).collect()
    };
    let seed = seed.unwrap_or(dsq_core::rng::DEFAULT_SEED);
    let tol = tol.unwrap_or(1e-9);
    let mut ctx = verify::Ctx::new(seed, tol, fault);
    let mut reports = Vec::new();
    let mut failed = 0usize;
    for name in &names {
        let t0 = Instant::now();
        let rep = verify::run(name, &mut ctx);
        let dt = t0.elapsed();
        eprintln!("{:<22} {:<6} {:>8.1} ms", name, if rep.ok() { "ok" } else { "FAILED" }, dt.as_secs_f64() * 1e3);
        failed += usize::from(!rep.ok());
        reports.push(json::report(&rep, Some(dt)));
    }
    let out = json!({
        "seed": seed,
        "tol": tol,
        "fault": fault.map(|_| "in-label"),
        "passed": reports.len() - failed,
        "failed": failed,
        "reports": reports,
    });
    println!("{out}");
    Ok(if failed == 0 { 0 } else { 1 })
}

fn cmd_schedule(n: u64, flags: &ParamFlags) -> Result<u8, CliError> {
    if n < 2 {
        return Err(CliError::Usage(String::from("N must be at least 2")));
    }
    let p = resolve(Mode::Faithful, flags)?;
    let s = compute_schedule(&p, n);
    let rows: Vec<Value> = s
        .rows
        .iter()
        .map(|r| {
            let mut v = json!({
                "i": r.i,
                "label": r.label,
                "x_vertices": r.x_vertices,
                "x_degree": r.x_degree,
                "g_vertices": r.g_vertices,
                "g_degree": r.g_degree,
                "mu_bound": r.mu_bound,
            });
            if let (Some(xd), Some(gd), Some(mu)) = (&r.x_degree_value, &r.g_degree_value, &r.mu_value) {
                v["x_degree_value"] = json!(xd.to_string());
                v["g_degree_value"] = json!(gd.to_string());
                v["mu_value"] = json::rational(mu);
            }
            v
        })
        .collect();
    let lemma = s.inequalities.as_ref().map(|l| json!({ "a": l.a, "b": l.b }));
    let out = json!({
        "mode": if s.mode == Mode::Desk { "desk" } else { "faithful" },
        "n": s.n,
        "m0": s.m0,
        "ell": s.ell,
        "m1": s.m1(),
        "inequalities": lemma,
        "rows": rows,
        "params": params::to_json(&p),
        "seed": p.seed,
    });
    println!("{out}");
    eprintln!("N = {n}, m0 = {}, l = {}", s.m0, s.ell);
    eprintln!("{:>6} {:>8} {:>14} {:>14} {:>10} {:>14}", "i", "label", "deg X_i", "|V(G_i)|", "deg G_i", "mu(G_i)");
    for r in &s.rows {
        if r.i <= 6 || r.i + 2 >= s.m0 {
            eprintln!(
                "{:>6} {:>8} {:>14} {:>14} {:>10} {:>14}",
                r.i, r.label, r.x_degree, r.g_vertices, r.g_degree, r.mu_bound
            );
        } else if r.i == 7 {
            eprintln!("{:>6}", "...");
        }
    }
    if let Some(l) = &s.inequalities {
        eprintln!("16^4 N^2 < (3/2)^m0: {}\nN^2 < (8/7)^(2^l): {}", l.a, l.b);
    }
    Ok(0)
}
