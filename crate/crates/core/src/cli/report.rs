//! Machine-readable verification reports.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The check does not apply to this input, e.g. `α` needs `n = 1`.
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub input: String,
    pub name: String,
    pub status: Status,
    /// Ranks, dimension tables and residual witnesses.
    pub detail: Value,
}

impl Check {
    pub fn new(input: &str, name: &str, passed: bool, detail: Value) -> Self {
        Check {
            input: input.into(),
            name: name.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            detail,
        }
    }

    pub fn skip(input: &str, name: &str, reason: impl Into<String>) -> Self {
        Check {
            input: input.into(),
            name: name.into(),
            status: Status::Skip,
            detail: Value::String(reason.into()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub inputs: Vec<String>,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn new(suite: &str, inputs: Vec<String>, checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.status != Status::Fail);
        VerifyReport {
            suite: suite.into(),
            inputs,
            passed,
            checks,
        }
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.status == Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    /// Pretty JSON with a trailing newline. Object keys are sorted, so equal reports
    /// serialize to equal bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
