//! Run reports: exact results with provenance, named checks, and their text
//! and JSON renderings.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Input {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Integer,
    Rational,
    Text,
}

/// One exact value. Integers are written in full and rationals as `n/d`;
/// `approx` carries an optional decimal rendering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub name: String,
    pub kind: Kind,
    pub value: String,
    pub provenance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approx: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    /// Passes iff `actual == expected`.
    pub fn equal<T: PartialEq + std::fmt::Display>(
        name: impl Into<String>,
        actual: T,
        expected: T,
    ) -> Self {
        let passed = actual == expected;
        let detail = if passed {
            format!("{actual}")
        } else {
            format!("got {actual}, expected {expected}")
        };
        Check::new(name, passed, detail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<Input>,
    /// Free-form output lines, printed first in text mode.
    pub lines: Vec<String>,
    pub results: Vec<Entry>,
    pub checks: Vec<Check>,
    pub wall_time_ms: u64,
}

/// Rational rendered as `n/d`, or `n` when the denominator is 1.
pub fn rational_string(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn approx(r: &BigRational) -> Option<String> {
    r.to_f64().map(|x| format!("{x:.9}"))
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport {
            command: command.into(),
            inputs: Vec::new(),
            lines: Vec::new(),
            results: Vec::new(),
            checks: Vec::new(),
            wall_time_ms: 0,
        }
    }

    pub fn input(&mut self, name: &str, value: impl ToString) -> &mut Self {
        self.inputs.push(Input {
            name: name.to_string(),
            value: value.to_string(),
        });
        self
    }

    pub fn line(&mut self, line: impl Into<String>) -> &mut Self {
        self.lines.push(line.into());
        self
    }

    fn push(
        &mut self,
        name: &str,
        kind: Kind,
        value: String,
        provenance: &str,
        approx: Option<String>,
    ) -> &mut Self {
        self.results.push(Entry {
            name: name.to_string(),
            kind,
            value,
            provenance: provenance.to_string(),
            approx,
        });
        self
    }

    pub fn integer(
        &mut self,
        name: &str,
        value: impl Into<BigUint>,
        provenance: &str,
    ) -> &mut Self {
        self.push(
            name,
            Kind::Integer,
            value.into().to_string(),
            provenance,
            None,
        )
    }

    pub fn signed(&mut self, name: &str, value: i64, provenance: &str) -> &mut Self {
        self.push(name, Kind::Integer, value.to_string(), provenance, None)
    }

    /// A rational; integral values are still tagged `rational`.
    pub fn rational(&mut self, name: &str, value: &BigRational, provenance: &str) -> &mut Self {
        let a = if value.is_integer() {
            None
        } else {
            approx(value)
        };
        self.push(name, Kind::Rational, rational_string(value), provenance, a)
    }

    pub fn text(&mut self, name: &str, value: impl Into<String>, provenance: &str) -> &mut Self {
        self.push(name, Kind::Text, value.into(), provenance, None)
    }

    pub fn check(&mut self, check: Check) -> &mut Self {
        self.checks.push(check);
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let inputs: Vec<String> = self
            .inputs
            .iter()
            .map(|i| format!("{}={}", i.name, i.value))
            .collect();
        writeln!(out, "command: {}", self.command).unwrap();
        if !inputs.is_empty() {
            writeln!(out, "inputs: {}", inputs.join(" ")).unwrap();
        }
        for l in &self.lines {
            writeln!(out, "{l}").unwrap();
        }
        for e in &self.results {
            write!(out, "{} = {}", e.name, e.value).unwrap();
            if let Some(a) = &e.approx {
                write!(out, " (~{a})").unwrap();
            }
            if !e.provenance.is_empty() {
                write!(out, "  [{}]", e.provenance).unwrap();
            }
            out.push('\n');
        }
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{tag} {}: {}", c.name, c.detail).unwrap();
        }
        let verdict = if self.passed() {
            "all checks passed"
        } else {
            "CHECKS FAILED"
        };
        writeln!(
            out,
            "{verdict} ({} checks, {} ms)",
            self.checks.len(),
            self.wall_time_ms
        )
        .unwrap();
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises") + "\n"
    }
}
