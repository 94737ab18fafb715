//! Machine-readable run reports.

use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    AtMost,
    AtLeast,
}

/// One numeric assertion: `value` compared with `tolerance` under `relation`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    pub tolerance: f64,
    pub passed: bool,
}

/// Wall-clock data; everything outside it is reproducible byte for byte.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: String,
    pub parameters: Value,
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
    pub results: Value,
    pub artifacts: Vec<String>,
    pub passed: bool,
    pub timing: Timing,
}

impl RunReport {
    pub fn new(command: &str, parameters: Value, seed: Option<u64>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            parameters,
            seed,
            checks: Vec::new(),
            results: Value::Object(Default::default()),
            artifacts: Vec::new(),
            passed: true,
            timing: Timing::default(),
        }
    }

    pub fn at_most(&mut self, name: &str, value: f64, tolerance: f64) -> bool {
        self.push(name, value, Relation::AtMost, tolerance, value <= tolerance)
    }

    pub fn at_least(&mut self, name: &str, value: f64, tolerance: f64) -> bool {
        self.push(name, value, Relation::AtLeast, tolerance, value >= tolerance)
    }

    /// Exact check recorded as a mismatch count that must be zero.
    pub fn exact(&mut self, name: &str, ok: bool) -> bool {
        self.push(name, if ok { 0.0 } else { 1.0 }, Relation::AtMost, 0.0, ok)
    }

    fn push(&mut self, name: &str, value: f64, relation: Relation, tolerance: f64, passed: bool) -> bool {
        self.checks.push(Check {
            name: name.to_string(),
            value,
            relation,
            tolerance,
            passed,
        });
        self.passed &= passed;
        passed
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        if let Value::Object(m) = &mut self.results {
            m.insert(key.to_string(), serde_json::to_value(value)?);
        }
        Ok(())
    }

    /// The report with the timing block zeroed.
    pub fn without_timing(&self) -> Self {
        Self {
            timing: Timing::default(),
            ..self.clone()
        }
    }

    pub fn write_json(&self, w: &mut impl Write) -> Result<()> {
        serde_json::to_writer(&mut *w, self)?;
        writeln!(w)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_aggregate() {
        let mut r = RunReport::new("x", Value::Null, Some(1));
        assert!(r.at_most("a", 0.5, 1.0));
        assert!(r.passed);
        assert!(!r.at_least("b", 0.5, 1.0));
        assert!(!r.passed);
        assert!(!r.at_most("nan", f64::NAN, 1.0));
    }

    #[test]
    fn timing_is_isolated() {
        let mut a = RunReport::new("x", Value::Null, None);
        a.exact("e", true);
        let mut b = a.clone();
        a.timing.wall_seconds = 1.0;
        b.timing.wall_seconds = 2.0;
        assert_ne!(a, b);
        assert_eq!(a.without_timing(), b.without_timing());
    }

    #[test]
    fn json_round_trip() {
        let mut r = RunReport::new("x", serde_json::json!({"n": 3}), Some(4));
        r.at_most("c", 1e-3, 1e-2);
        r.result("k", vec![1.0, 2.0]).unwrap();
        let mut buf = Vec::new();
        r.write_json(&mut buf).unwrap();
        let back: RunReport = serde_json::from_slice(&buf).unwrap();
        assert_eq!(back, r);
    }
}
