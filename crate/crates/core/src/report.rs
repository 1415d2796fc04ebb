//! Outcome of a single verification check.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_rational::BigRational;

use crate::graph::Violation;
use crate::rational::RationalVector;

/// Evidence attached to a check, mandatory when it fails.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Vector(RationalVector),
    Vertices(Vec<usize>),
    Slot { vertex: usize, label: usize },
    Violation(Violation),
    Rational(BigRational),
    Note(String),
}

/// A named measurement recorded alongside the verdict.
#[derive(Clone, Debug, PartialEq)]
pub enum Fact {
    Bool(bool),
    Int(i128),
    Float(f64),
    Rational(BigRational),
    Text(String),
}

impl From<bool> for Fact {
    fn from(b: bool) -> Self {
        Fact::Bool(b)
    }
}
impl From<usize> for Fact {
    fn from(x: usize) -> Self {
        Fact::Int(x as i128)
    }
}
impl From<u64> for Fact {
    fn from(x: u64) -> Self {
        Fact::Int(x as i128)
    }
}
impl From<i64> for Fact {
    fn from(x: i64) -> Self {
        Fact::Int(x as i128)
    }
}
impl From<f64> for Fact {
    fn from(x: f64) -> Self {
        Fact::Float(x)
    }
}
impl From<BigRational> for Fact {
    fn from(x: BigRational) -> Self {
        Fact::Rational(x)
    }
}
impl From<&str> for Fact {
    fn from(x: &str) -> Self {
        Fact::Text(x.to_string())
    }
}
impl From<String> for Fact {
    fn from(x: String) -> Self {
        Fact::Text(x)
    }
}

/// Verdict of one check. A failing report always carries a witness.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    check: String,
    ok: bool,
    seed: Option<u64>,
    tol: Option<f64>,
    witness: Option<Witness>,
    facts: Vec<(String, Fact)>,
}

impl CheckReport {
    /// A passing report; call [`CheckReport::require`] to record failures.
    pub fn new(check: &str) -> Self {
        Self { check: check.to_string(), ok: true, seed: None, tol: None, witness: None, facts: Vec::new() }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = Some(tol);
        self
    }

    pub fn fact(&mut self, key: &str, value: impl Into<Fact>) -> &mut Self {
        self.facts.push((key.to_string(), value.into()));
        self
    }

    /// Records `cond`; the first failure fixes the witness.
    pub fn require(&mut self, cond: bool, witness: impl FnOnce() -> Witness) -> bool {
        if !cond && self.ok {
            self.ok = false;
            self.witness = Some(witness());
        }
        cond
    }

    /// Attaches an informational witness to a passing report.
    pub fn attach(&mut self, witness: Witness) {
        if self.ok {
            self.witness = Some(witness);
        }
    }

    pub fn check(&self) -> &str {
        &self.check
    }

    pub fn ok(&self) -> bool {
        self.ok
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn tol(&self) -> Option<f64> {
        self.tol
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.witness.as_ref()
    }

    pub fn facts(&self) -> &[(String, Fact)] {
        &self.facts
    }

    pub fn get(&self, key: &str) -> Option<&Fact> {
        self.facts.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}
