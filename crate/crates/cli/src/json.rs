use std::time::Duration;

use dsq_core::{BigRational, CheckReport, Fact, RationalVector, Witness};
use serde_json::{json, Map, Value};

/// `"p/q"`, with `q = 1` written out.
pub fn rational(x: &BigRational) -> Value {
    Value::String(format!("{}/{}", x.numer(), x.denom()))
}

pub fn vector(v: &RationalVector) -> Value {
    Value::Array(v.to_rationals().iter().map(rational).collect())
}

fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn fact(f: &Fact) -> Value {
    match f {
        Fact::Bool(b) => json!(b),
        Fact::Int(i) => i64::try_from(*i).map_or_else(|_| json!(i.to_string()), |v| json!(v)),
        Fact::Float(x) => float(*x),
        Fact::Rational(r) => rational(r),
        Fact::Text(t) => json!(t),
    }
}

pub fn witness(w: &Witness) -> Value {
    match w {
        Witness::Vector(v) => json!({ "vector": vector(v) }),
        Witness::Vertices(vs) => json!({ "vertices": vs }),
        Witness::Slot { vertex, label } => json!({ "slot": { "vertex": vertex, "label": label } }),
        Witness::Violation(v) => json!({ "violation": v.to_string() }),
        Witness::Rational(r) => json!({ "rational": rational(r) }),
        Witness::Note(n) => json!({ "note": n }),
    }
}

/// `{check, ok, witness?, seed, tol, facts, timing_ms}`.
pub fn report(r: &CheckReport, elapsed: Option<Duration>) -> Value {
    let mut m = Map::new();
    m.insert("check".into(), json!(r.check()));
    m.insert("ok".into(), json!(r.ok()));
    if let Some(w) = r.witness() {
        m.insert("witness".into(), witness(w));
    }
    m.insert("seed".into(), json!(r.seed()));
    m.insert("tol".into(), r.tol().map_or(Value::Null, float));
    let facts: Map<String, Value> = r.facts().iter().map(|(k, v)| (k.clone(), fact(v))).collect();
    m.insert("facts".into(), Value::Object(facts));
    if let Some(t) = elapsed {
        m.insert("timing_ms".into(), float(t.as_secs_f64() * 1e3));
    }
    Value::Object(m)
}
