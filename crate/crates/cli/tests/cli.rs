use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dsq_core::codec::{emit_rotation_map, parse_rotation_map};
use dsq_core::generators::{complete, cycle};
use dsq_core::RotationGraph;
use serde_json::Value;

fn dsq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dsq")).args(args).output().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn temp(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dsq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn ustcon_triangle_connected() {
    let f = temp("tri.ug", "ug 3\n0 1\n1 2\n2 0\n");
    let o = dsq(&["ustcon", s(&f), "0", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["connected"], true);
    assert_eq!(v["params"]["mode"], "desk");
    assert!(v["ledger"]["peak_bits"].as_u64().unwrap() > 0);
}

#[test]
fn ustcon_separate_components() {
    let f = temp("two.ug", "ug 4\n0 1\n2 3\n");
    let o = dsq(&["ustcon", s(&f), "0", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let v = stdout_json(&o);
    assert_eq!(v["connected"], false);
    assert_eq!(v["ledger"]["traversals"], 1u64 << 14);
    let o = dsq(&["ustcon", s(&f), "2", "3"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn ustcon_malformed_line() {
    let f = temp("bad.ug", "ug 3\n0 1\na b c\n");
    let o = dsq(&["ustcon", s(&f), "0", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");
    assert!(stdout_json(&o)["error"].as_str().unwrap().contains("line 3"));
}

#[test]
fn ustcon_vertex_out_of_range() {
    let f = temp("edge.ug", "ug 2\n0 1\n");
    assert_eq!(dsq(&["ustcon", s(&f), "0", "7"]).status.code(), Some(2));
}

#[test]
fn ustcon_params_file() {
    let f = temp("p.ug", "ug 3\n0 1\n1 2\n");
    let p = temp("p.json", r#"{"seed": 7, "search_attempts": 80}"#);
    let o = dsq(&["ustcon", s(&f), "0", "2", "--params-file", s(&p)]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["params"]["search_attempts"], 80);
    let bad = temp("bad.json", r#"{"colour": 1}"#);
    assert_eq!(dsq(&["ustcon", s(&f), "0", "2", "--params-file", s(&bad)]).status.code(), Some(2));
}

#[test]
fn dsquare_with_complete_g_checks() {
    // C5 has degree 2, so G is the complete graph with loops on 2 vertices
    let x = RotationGraph::from_undirected(&cycle(5)).unwrap();
    let xf = temp("c5.rotg", &emit_rotation_map(&x));
    let gf = temp("j2.rotg", &emit_rotation_map(&RotationGraph::complete_with_loops(2)));
    let out = std::env::temp_dir().join(format!("dsq-cli-{}", std::process::id())).join("sq.rotg");
    let o = dsq(&["dsquare", s(&xf), s(&gf), "--out", out.to_str().unwrap(), "--check"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["ok"], true);
    assert_eq!(v["degree"], 4);
    let checks: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["check"].as_str().unwrap()).collect();
    assert_eq!(checks, ["validate", "round-trip", "complete-square"]);
    assert_eq!(v["checks"][2]["facts"]["applicable"], true);
    let sq = parse_rotation_map(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(sq.adjacency_counts(), x.power(2).unwrap().adjacency_counts());
}

#[test]
fn dsquare_to_stdout() {
    let x = RotationGraph::from_undirected(&complete(4)).unwrap();
    let xf = temp("k4.rotg", &emit_rotation_map(&x));
    let g = RotationGraph::from_undirected(&cycle(3)).unwrap();
    let gf = temp("c3.rotg", &emit_rotation_map(&g));
    let o = dsq(&["dsquare", s(&xf), s(&gf)]);
    assert_eq!(o.status.code(), Some(0));
    let sq = parse_rotation_map(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!((sq.n(), sq.degree()), (4, 6));
    assert!(sq.validate().is_ok());
}

#[test]
fn dsquare_degree_mismatch() {
    let x = RotationGraph::from_undirected(&cycle(5)).unwrap();
    let xf = temp("c5b.rotg", &emit_rotation_map(&x));
    let gf = temp("j3.rotg", &emit_rotation_map(&RotationGraph::complete_with_loops(3)));
    let o = dsq(&["dsquare", s(&xf), s(&gf)]);
    assert_eq!(o.status.code(), Some(2));
    let err = stdout_json(&o)["error"].as_str().unwrap().to_string();
    assert!(err.contains('2') && err.contains('3'), "{err}");
}

#[test]
fn verify_default_passes() {
    let o = dsq(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["failed"], 0);
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 16);
    for r in reports {
        assert_eq!(r["ok"], true, "{r}");
        assert!(r.get("witness").is_none());
        assert!(r["timing_ms"].is_number());
    }
}

#[test]
fn verify_injected_fault_fails() {
    let o = dsq(&["verify", "--inject-fault", "in-label"]);
    assert_eq!(o.status.code(), Some(1));
    let v = stdout_json(&o);
    assert_eq!(v["fault"], "in-label");
    let r = &v["reports"][0];
    assert_eq!(r["check"], "validate");
    assert_eq!(r["ok"], false);
    assert!(r["witness"]["violation"].as_str().unwrap().contains("in-label"));
}

#[test]
fn verify_single_suite() {
    let o = dsq(&["verify", "--suite", "sedrakyan", "--seed", "11"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["reports"].as_array().unwrap().len(), 1);
    assert_eq!(v["reports"][0]["check"], "sedrakyan");
    assert_eq!(v["reports"][0]["seed"], 11);
    assert_eq!(dsq(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
}

#[test]
fn verify_list() {
    let o = dsq(&["verify", "--list"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 16);
}

#[test]
fn schedule_faithful() {
    let o = dsq(&["schedule", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["mode"], "faithful");
    assert_eq!(v["m0"], 300);
    assert_eq!(v["inequalities"]["a"], true);
    let o = dsq(&["schedule", "2"]);
    let v = stdout_json(&o);
    assert_eq!(v["m0"], 100);
    let rows = v["rows"].as_array().unwrap();
    for (k, r) in rows.iter().take(5).enumerate() {
        assert_eq!(r["i"], k + 1);
        assert!(r.get("x_degree_value").is_none(), "{r}");
    }
}

#[test]
fn schedule_desk_concrete() {
    let v = stdout_json(&dsq(&["schedule", "6", "--mode", "desk"]));
    assert_eq!(v["mode"], "desk");
    for r in v["rows"].as_array().unwrap() {
        assert!(r["x_degree_value"].is_string(), "{r}");
        assert!(r["mu_value"].as_str().unwrap().contains('/'));
    }
}

#[test]
fn schedule_rejects_tiny_n() {
    assert_eq!(dsq(&["schedule", "1"]).status.code(), Some(2));
}
