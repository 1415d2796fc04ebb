//! The inequality suite behind `dsq verify`.

use std::collections::VecDeque;

use dsq_core::derand::{f_props_check, five_step_identity_check, verify_dsquare_mixing};
use dsq_core::expansion::{
    check_connected_expansion_bound, check_directed_mixing_bound, cheeger_mihail_check, cheeger_upper_witness,
    edge_expansion_exact, subset_connected,
};
use dsq_core::generators::{
    cycle, path, random_consistent, random_consistent_with_loop, random_gnp, random_regular, random_rotation_graph,
    with_loops,
};
use dsq_core::pipeline::{
    complete_adjacency_check, stage_one, universal_traversal_check, verify_claim8, PipelineParams, StageOneVariant,
    UstconSolver,
};
use dsq_core::rng::{self, derived};
use dsq_core::spectral::{
    check_norm_one, check_stochastic_action, graph_mixing_ratio, jd_decompose, sedrakyan_check, MixingOptions,
};
use dsq_core::{BigInt, BigRational, CheckReport, RotationGraph, UndirectedGraph, Witness};
use rand::Rng as _;

pub const SUITES: &[&str] = &[
    "validate",
    "stochastic-action",
    "expansion-bound",
    "norm-one",
    "sedrakyan",
    "jd-decomposition",
    "f-properties",
    "dsquare-mixing",
    "five-step",
    "cheeger-a",
    "cheeger-mihail",
    "directed-mixing",
    "complete-adjacency",
    "level-gap",
    "universal-traversal",
    "ustcon-oracle",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// One in-label of the first graph checked by `validate` is bumped.
    InLabel,
}

pub struct Ctx {
    pub seed: u64,
    pub tol: f64,
    pub fault: Option<Fault>,
    solver: Option<UstconSolver>,
}

impl Ctx {
    pub fn new(seed: u64, tol: f64, fault: Option<Fault>) -> Self {
        Self { seed, tol, fault, solver: None }
    }

    fn opts(&self) -> MixingOptions {
        MixingOptions { tol: self.tol, seed: self.seed, ..MixingOptions::default() }
    }

    fn rng(&self, suite: u64, k: u64) -> rng::Rng {
        derived(self.seed, suite << 32 | k)
    }

    fn solver(&mut self) -> Result<&UstconSolver, String> {
        if self.solver.is_none() {
            let p = PipelineParams { seed: self.seed, ..PipelineParams::desk() };
            self.solver = Some(UstconSolver::new(&p).map_err(|e| e.to_string())?);
        }
        Ok(self.solver.as_ref().expect("set above"))
    }
}

/// Folds per-instance reports into one; the first failure's witness wins.
struct Agg {
    rep: CheckReport,
    instances: usize,
    failures: usize,
}

impl Agg {
    fn new(name: &str, ctx: &Ctx) -> Self {
        Self { rep: CheckReport::new(name).with_seed(ctx.seed).with_tol(ctx.tol), instances: 0, failures: 0 }
    }

    fn add(&mut self, sub: &CheckReport) {
        self.instances += 1;
        if !sub.ok() {
            self.failures += 1;
        }
        let w = sub.witness().cloned();
        self.rep.require(sub.ok(), || w.unwrap_or_else(|| Witness::Note(format!("{} failed", sub.check()))));
    }

    fn add_err(&mut self, what: &str, e: impl std::fmt::Display) {
        self.instances += 1;
        self.failures += 1;
        self.rep.require(false, || Witness::Note(format!("{what}: {e}")));
    }

    fn finish(mut self) -> CheckReport {
        self.rep.fact("instances", self.instances).fact("failures", self.failures);
        self.rep
    }
}

fn undirected(y: &UndirectedGraph) -> RotationGraph {
    RotationGraph::from_undirected(y).expect("generators give regular graphs")
}

fn ceil_rational(x: f64) -> BigRational {
    let scale = 1_000_000i64;
    let k = ((x * scale as f64).ceil() as i64 + 1).clamp(1, scale);
    BigRational::new(BigInt::from(k), BigInt::from(scale))
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn run(name: &str, ctx: &mut Ctx) -> CheckReport {
    match name {
        "validate" => validate(ctx),
        "stochastic-action" => over_graphs(ctx, "stochastic-action", 2, 20, |m, s| check_stochastic_action(m, 4, s)),
        "expansion-bound" => expansion_bound(ctx),
        "norm-one" => over_graphs(ctx, "norm-one", 4, 50, |m, s| check_norm_one(m, 4, s)),
        "sedrakyan" => sedrakyan(ctx),
        "jd-decomposition" => jd(ctx),
        "f-properties" => f_properties(ctx),
        "dsquare-mixing" => dsquare_mixing(ctx),
        "five-step" => five_step(ctx),
        "cheeger-a" => cheeger_a(ctx),
        "cheeger-mihail" => mihail(ctx),
        "directed-mixing" => directed_mixing(ctx),
        "complete-adjacency" => complete_adjacency(ctx),
        "level-gap" => level_gap(ctx),
        "universal-traversal" => universal(ctx),
        "ustcon-oracle" => ustcon_oracle(ctx),
        other => {
            let mut r = CheckReport::new(other);
            r.require(false, || Witness::Note(String::from("unknown suite")));
            r
        }
    }
}

fn validate(ctx: &Ctx) -> CheckReport {
    let mut agg = Agg::new("validate", ctx);
    for k in 0..20u64 {
        let mut r = ctx.rng(1, k);
        let n = r.gen_range(1..=12);
        let d = r.gen_range(1..=5);
        let g = match k % 3 {
            0 => random_rotation_graph(&mut r, n, d),
            1 => random_consistent(&mut r, n, d),
            _ => undirected(&random_regular(&mut r, n, d.div_ceil(2))),
        };
        let g = if k == 0 && ctx.fault == Some(Fault::InLabel) {
            let mut inl = g.in_table().to_vec();
            inl[0] = (inl[0] + 1) % g.degree() as u32;
            RotationGraph::from_raw(g.n(), g.degree(), g.out_table().to_vec(), inl, g.is_undirected())
                .expect("lengths unchanged")
        } else {
            g
        };
        agg.add(&g.validate_report());
    }
    agg.finish()
}

fn over_graphs<E: std::fmt::Display>(
    ctx: &Ctx,
    name: &str,
    suite: u64,
    count: u64,
    check: impl Fn(&dsq_core::RationalMatrix, u64) -> Result<CheckReport, E>,
) -> CheckReport {
    let mut agg = Agg::new(name, ctx);
    for k in 0..count {
        let mut r = ctx.rng(suite, k);
        let n = r.gen_range(1..=10);
        let d = r.gen_range(1..=4);
        let m = random_rotation_graph(&mut r, n, d).to_adjacency(true).expect("small");
        match check(&m, ctx.seed.wrapping_add(k)) {
            Ok(rep) => agg.add(&rep),
            Err(e) => agg.add_err("instance", e),
        }
    }
    agg.finish()
}

fn expansion_bound(ctx: &Ctx) -> CheckReport {
    let mut agg = Agg::new("expansion-bound", ctx);
    for k in 0..40u64 {
        let mut r = ctx.rng(3, k);
        let n = r.gen_range(2..=10);
        let g = if k % 2 == 0 {
            let d = r.gen_range(1..=2);
            undirected(&random_regular(&mut r, n, d))
        } else {
            let d = r.gen_range(1..=3);
            random_consistent(&mut r, n, d)
        };
        if subset_connected(&g).unwrap_or(false) {
            match check_connected_expansion_bound(&g) {
                Ok(rep) => agg.add(&rep),
                Err(e) => agg.add_err("connected graph", e),
            }
        }
    }
    agg.finish()
}

fn sedrakyan(ctx: &Ctx) -> CheckReport {
    let mut agg = Agg::new("sedrakyan", ctx);
    for k in 0..200u64 {
        let mut r = ctx.rng(5, k);
        let n = r.gen_range(1..=10);
        let u = rng::rational_vector(&mut r, n);
        let v = rng::positive_vector(&mut r, n);
        match sedrakyan_check(&u, &v) {
            Ok(rep) => agg.add(&rep),
            Err(e) => agg.add_err("instance", e),
        }
    }
    agg.finish()
}

fn jd(ctx: &Ctx) -> CheckReport {
    let mut agg = Agg::new("jd-decomposition", ctx);
    for k in 0..20u64 {
        let mut r = ctx.rng(6, k);
        let n = r.gen_range(2..=8);
        let d = r.gen_range(2..=4);
        let g = random_consistent(&mut r, n, d);
        let est = match graph_mixing_ratio(&g, &ctx.opts()) {
            Ok(e) => e,
            Err(e) => {
                agg.add_err("mixing ratio", e);
                continue;
            }
        };
        let m = g.to_adjacency(true).expect("small");
        match jd_decompose(&m, &ceil_rational(est.upper), 4, ctx.seed.wrapping_add(k)) {
            Ok(d) => agg.add(&d.report),
            Err(e) => agg.add_err("decomposition", e),
        }
    }
    agg.finish()
}

fn f_properties(ctx: &Ctx) -> CheckReport {
    let mut agg = Agg::new("f-properties", ctx);
    for g in (0..=16).step_by(2) {
        for (mp, mq) in [(1, 200), (1, 100), (1, 4), (3, 4)] {
            for l in [1, 5, 9, 15] {
                match f_props_check(&rat(g, 64), &rat(mp, mq), &rat(l, 16)) {
                    Ok(rep) => agg.add(&rep),
                    Err(e) => agg.add_err("grid point", e),
                }
            }
        }
    }
    agg.finish()
}

fn dsquare_mixing(ctx: &Ctx) -> CheckReport {
    let mut agg = Agg::new("dsquare-mixing", ctx);
    for k in 0..30u64 {
        let mut r = ctx.rng(8, k);
        let n = r.gen_range(1..=12);
        let d = r.gen_range(1..=6);
        let x = random_rotation_graph(&mut r, n, d);
        let d = r.gen_range(1..=4);
        let g = random_rotation_graph(&mut r, x.degree(), d);
        match verify_dsquare_mixing(&x, &g, &ctx.opts()) {
            Ok(rep) => agg.add(&rep),
            Err(e) => agg.add_err("pair", e),
        }
    }
    agg.finish()
}

fn five_step(ctx: &Ctx) -> CheckReport {
    let mut agg = Agg::new("five-step", ctx);
    for k in 0..12u64 {
        let mut r = ctx.rng(9, k);
        let n = r.gen_range(1..=8);
        let d = r.gen_range(1..=4);
        let x = random_rotation_graph(&mut r, n, d);
        let d = r.gen_range(1..=3);
        let g = random_rotation_graph(&mut r, x.degree(), d);
        match five_step_identity_check(&x, &g) {
            Ok(rep) => agg.add(&rep),
            Err(e) => agg.add_err("pair", e),
        }
    }
    agg.finish()
}

fn cheeger_a(ctx: &Ctx) -> CheckReport {
    let mut agg = Agg::new("cheeger-a", ctx);
    let mut graphs: Vec<RotationGraph> = (4..=10).map(|n| undirected(&cycle(n))).collect();
    for k in 0..10u64 {
        let mut r = ctx.rng(10, k);
        let n = r.gen_range(4..=10);
        graphs.push(undirected(&random_regular(&mut r, n, 1 + k as usize % 2)));
    }
    let half = rat(1, 2);
    for g in &graphs {
        let Ok(cert) = edge_expansion_exact(g) else { continue };
        if cert.epsilon >= half {
            continue;
        }
        let alpha = (&cert.epsilon + &half) / BigRational::from_integer(2.into());
        match cheeger_upper_witness(g, &cert, &alpha) {
            Ok(w) => agg.add(&w.report),
            Err(e) => agg.add_err("witness", e),
        }
    }
    agg.finish()
}

fn mihail(ctx: &Ctx) -> CheckReport {
    let mut agg = Agg::new("cheeger-mihail", ctx);
    for k in 0..12u64 {
        let mut r = ctx.rng(11, k);
        let n = r.gen_range(2..=10);
        let h = 1 + k as usize % 2;
        let g = undirected(&with_loops(&random_regular(&mut r, n, h), 2 * h));
        match cheeger_mihail_check(&g, &ctx.opts()) {
            Ok(rep) => agg.add(&rep),
            Err(e) => agg.add_err("graph", e),
        }
    }
    agg.finish()
}

fn directed_mixing(ctx: &Ctx) -> CheckReport {
    let mut agg = Agg::new("directed-mixing-bound", ctx);
    for k in 0..20u64 {
        let mut r = ctx.rng(12, k);
        let n = r.gen_range(2..=8);
        let d = r.gen_range(2..=3);
        let g = random_consistent_with_loop(&mut r, n, d);
        if !g.is_connected() {
            continue;
        }
        match check_directed_mixing_bound(&g, &ctx.opts()) {
            Ok(rep) => agg.add(&rep),
            Err(e) => agg.add_err("graph", e),
        }
    }
    agg.finish()
}

fn complete_adjacency(ctx: &mut Ctx) -> CheckReport {
    let mut agg = Agg::new("complete-adjacency", ctx);
    let opts = ctx.opts();
    for n in 1..=6 {
        match complete_adjacency_check(&RotationGraph::complete_with_loops(n), &opts) {
            Ok(rep) => agg.add(&rep),
            Err(e) => agg.add_err("complete graph", e),
        }
    }
    let solver = match ctx.solver() {
        Ok(s) => s,
        Err(e) => {
            agg.add_err("family", e);
            return agg.finish();
        }
    };
    let x = stage_one(&cycle(3), StageOneVariant::Classic4).expect("triangle").graph;
    let levels = dsq_core::pipeline::materialize_levels(&x, solver.family(), 1, 6, 1 << 22);
    match levels.map(|l| l.last().cloned()) {
        Ok(Some(last)) => match complete_adjacency_check(&last, &opts) {
            Ok(rep) => agg.add(&rep),
            Err(e) => agg.add_err("deepest level", e),
        },
        Ok(None) => agg.add_err("deepest level", "nothing materialized"),
        Err(e) => agg.add_err("deepest level", e),
    }
    agg.finish()
}

fn level_gap(ctx: &mut Ctx) -> CheckReport {
    let mut agg = Agg::new("level-gap", ctx);
    let opts = ctx.opts();
    let solver = match ctx.solver() {
        Ok(s) => s,
        Err(e) => {
            agg.add_err("family", e);
            return agg.finish();
        }
    };
    for y in [path(2), path(3), cycle(3), cycle(4)] {
        let x = stage_one(&y, StageOneVariant::Classic4).expect("simple").graph;
        match verify_claim8(&x, solver.family(), 1, 6, &opts, 1 << 22) {
            Ok(rep) => agg.add(&rep),
            Err(e) => agg.add_err("levels", e),
        }
    }
    agg.finish()
}

fn universal(ctx: &mut Ctx) -> CheckReport {
    let mut agg = Agg::new("universal-traversal", ctx);
    let seed = ctx.seed;
    let solver = match ctx.solver() {
        Ok(s) => s,
        Err(e) => {
            agg.add_err("family", e);
            return agg.finish();
        }
    };
    for k in 0..6u64 {
        let mut r = derived(seed, 15 << 32 | k);
        let n = r.gen_range(1..=12);
        let x = random_rotation_graph(&mut r, n, 4);
        let start = r.gen_range(0..n);
        match universal_traversal_check(&x, solver.family(), solver.layout(), start) {
            Ok(rep) => agg.add(&rep),
            Err(e) => agg.add_err("instance", e),
        }
    }
    agg.finish()
}

fn components(y: &UndirectedGraph) -> Vec<usize> {
    let nb = y.neighbors();
    let mut comp = vec![usize::MAX; y.n()];
    for s in 0..y.n() {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = s;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &w in &nb[v] {
                if comp[w] == usize::MAX {
                    comp[w] = s;
                    q.push_back(w);
                }
            }
        }
    }
    comp
}

fn ustcon_oracle(ctx: &mut Ctx) -> CheckReport {
    let mut agg = Agg::new("ustcon-oracle", ctx);
    let seed = ctx.seed;
    let solver = match ctx.solver() {
        Ok(s) => s,
        Err(e) => {
            agg.add_err("family", e);
            return agg.finish();
        }
    };
    let mut pairs = 0usize;
    for k in 0..8u64 {
        let mut r = derived(seed, 16 << 32 | k);
        let n = r.gen_range(2..=5);
        let y = random_gnp(&mut r, n, 0.5);
        let comp = components(&y);
        let prep = match solver.prepare(&y) {
            Ok(p) => p,
            Err(e) => {
                agg.add_err("prepare", e);
                continue;
            }
        };
        let mut sub = CheckReport::new("ustcon-oracle");
        for s in 0..n {
            for t in s + 1..n {
                pairs += 1;
                match prep.connected(s, t) {
                    Ok(c) => {
                        sub.require(c == (comp[s] == comp[t]), || Witness::Vertices(vec![s, t]));
                    }
                    Err(e) => {
                        sub.require(false, || Witness::Note(e.to_string()));
                    }
                }
            }
        }
        agg.add(&sub);
    }
    agg.rep.fact("pairs", pairs);
    agg.finish()
}
