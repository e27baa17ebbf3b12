//! Verification reports, serialized as JSON by the CLI.

use serde::Serialize;
use serde_json::Value;

use crate::phase::Phase;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub params: Value,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Report {
    pub suite: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub q_exponent: [i64; 2],
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: impl Into<String>, n: usize, q: Phase) -> Self {
        Self {
            suite: suite.into(),
            n,
            q_exponent: [q.exponent(), i64::from(q.ring().m())],
            checks: Vec::new(),
        }
    }

    /// Float check: passes when residual < tol (NaN never passes).
    pub fn push(&mut self, name: impl Into<String>, params: Value, residual: f64, tol: f64) {
        self.checks.push(Check {
            name: name.into(),
            params,
            residual,
            pass: residual < tol,
        });
    }

    /// Exact check: residual is 0 on success and 1 on failure.
    pub fn push_exact(&mut self, name: impl Into<String>, params: Value, ok: bool) {
        self.checks.push(Check {
            name: name.into(),
            params,
            residual: if ok { 0.0 } else { 1.0 },
            pass: ok,
        });
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().fold(0.0, |m, c| m.max(c.residual))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
