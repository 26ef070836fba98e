//! Self-describing experiment reports.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::tolerances::Tolerances;
use crate::TOOL_VERSION;

/// Layout version of [`ExperimentReport`].
pub const REPORT_FORMAT: u32 = 1;

/// One thresholded comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    /// "le" when the value must not exceed the threshold, "gt" when it must exceed it.
    pub relation: &'static str,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), value, threshold, relation: "le", pass: value <= threshold }
    }

    pub fn above(name: &str, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), value, threshold, relation: "gt", pass: value > threshold }
    }

    pub fn flag(name: &str, ok: bool) -> Self {
        Self { name: name.into(), value: f64::from(u8::from(ok)), threshold: 1.0, relation: "ge", pass: ok }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub format: u32,
    pub experiment_id: String,
    pub tool_version: String,
    pub inputs: Value,
    pub outputs: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub tolerances: Tolerances,
    pub pass: bool,
    pub wall_time: f64,
}

impl ExperimentReport {
    pub fn new(experiment_id: &str, inputs: Value) -> Self {
        Self {
            format: REPORT_FORMAT,
            experiment_id: experiment_id.into(),
            tool_version: TOOL_VERSION.into(),
            inputs,
            outputs: BTreeMap::new(),
            checks: Vec::new(),
            tolerances: Tolerances::default(),
            pass: true,
            wall_time: 0.0,
        }
    }

    pub fn output<T: Serialize>(&mut self, key: &str, value: T) -> &mut Self {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.outputs.insert(key.into(), v);
        self
    }

    pub fn check(&mut self, check: Check) -> &mut Self {
        self.pass &= check.pass;
        self.checks.push(check);
        self
    }

    /// Numeric output by key, if present.
    pub fn scalar(&self, key: &str) -> Option<f64> {
        self.outputs.get(key).and_then(Value::as_f64)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports hold only finite-or-null values")
    }

    /// Writes `<dir>/<experiment_id><suffix>.json` and returns the path.
    pub fn write_to(&self, dir: &Path, suffix: &str) -> std::io::Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}{}.json", self.experiment_id, suffix));
        fs::write(&path, self.to_json())?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failed_check_fails_report() {
        let mut r = ExperimentReport::new("x", Value::Null);
        r.check(Check::at_most("a", 1.0, 2.0));
        assert!(r.pass);
        r.check(Check::above("b", 1.0, 2.0));
        assert!(!r.pass);
    }

    #[test]
    fn output_keys_are_sorted() {
        let mut r = ExperimentReport::new("x", Value::Null);
        r.output("zeta", 1.0).output("alpha", 2.0);
        let json = r.to_json();
        assert!(json.find("alpha").unwrap() < json.find("zeta").unwrap());
        assert_eq!(r.scalar("alpha"), Some(2.0));
    }

    #[test]
    fn writes_file() {
        let dir = tempfile::tempdir().unwrap();
        let r = ExperimentReport::new("demo", Value::Null);
        let p = r.write_to(dir.path(), "").unwrap();
        let back: Value = serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap();
        assert_eq!(back["experiment_id"], "demo");
    }
}
