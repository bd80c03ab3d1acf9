//! Verification reports with JSON and TSV rendering.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub expected: String,
    pub actual: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, expected: impl Display, actual: impl Display) -> Self {
        Self {
            name: name.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }

    /// Passes when `expected == actual`.
    pub fn equal<T: PartialEq + Display>(name: impl Into<String>, expected: T, actual: T) -> Self {
        let ok = expected == actual;
        Self::new(name, ok, expected, actual)
    }

    /// A check whose expected value is the literal `"true"` or a description.
    pub fn holds(name: impl Into<String>, ok: bool, detail: impl Display) -> Self {
        let d = detail.to_string();
        if ok {
            Self::new(name, true, &d, &d)
        } else {
            Self::new(name, false, "holds", d)
        }
    }

    pub fn error(name: impl Into<String>, expected: impl Display, err: impl Display) -> Self {
        Self::new(name, false, expected, format!("error: {err}"))
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub command: String,
    pub lambda: Option<[i64; 2]>,
    pub level: Option<u32>,
    pub checks: Vec<Check>,
    pub elapsed_ms: BTreeMap<String, u64>,
}

impl VerificationReport {
    pub fn new(command: impl Into<String>, lambda: Option<[i64; 2]>, level: Option<u32>) -> Self {
        Self {
            command: command.into(),
            lambda,
            level,
            checks: Vec::new(),
            elapsed_ms: BTreeMap::new(),
        }
    }

    /// Runs a group of checks and records its wall time under `group`.
    pub fn run<F: FnOnce() -> Vec<Check>>(&mut self, group: &str, f: F) {
        let start = Instant::now();
        let checks = f();
        self.elapsed_ms
            .insert(group.to_string(), start.elapsed().as_millis() as u64);
        self.checks.extend(checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// The JSON document without timing fields.
    pub fn to_json_untimed(&self) -> String {
        let mut copy = self.clone();
        copy.elapsed_ms.clear();
        copy.to_json()
    }

    pub fn to_tsv(&self) -> String {
        let clean = |s: &str| s.replace(['\t', '\n'], " ");
        let mut out = String::from("name\tstatus\texpected\tactual\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                clean(&c.name),
                c.status.as_str(),
                clean(&c.expected),
                clean(&c.actual)
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_schema_and_tsv() {
        let mut r = VerificationReport::new("demo", Some([1, 0]), Some(2));
        r.run("g", || vec![Check::equal("a", 1, 1), Check::equal("b", 1, 2)]);
        assert!(!r.passed());
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["lambda"], serde_json::json!([1, 0]));
        assert_eq!(v["checks"][0]["status"], "pass");
        assert_eq!(v["checks"][1]["status"], "fail");
        assert!(v["elapsed_ms"]["g"].is_u64());
        let tsv = r.to_tsv();
        assert_eq!(tsv.lines().count(), 3);
        assert!(tsv.lines().nth(2).unwrap().starts_with("b\tfail\t1\t2"));
    }
}
