//! Machine-readable run reports: one record per executed check, with a
//! minimal witness attached to every failure. Reports are deterministic for
//! fixed inputs: checks keep their insertion order and all numeric payloads
//! are exact rational strings.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn pass(name: &str) -> Self {
        CheckResult {
            check_name: name.to_string(),
            status: Status::Pass,
            detail: None,
        }
    }

    pub fn pass_with(name: &str, detail: String) -> Self {
        CheckResult {
            check_name: name.to_string(),
            status: Status::Pass,
            detail: Some(detail),
        }
    }

    pub fn fail(name: &str, detail: String) -> Self {
        CheckResult {
            check_name: name.to_string(),
            status: Status::Fail,
            detail: Some(detail),
        }
    }

    pub fn skip(name: &str, detail: String) -> Self {
        CheckResult {
            check_name: name.to_string(),
            status: Status::Skip,
            detail: Some(detail),
        }
    }

    pub fn of(name: &str, ok: bool, witness: impl FnOnce() -> String) -> Self {
        if ok {
            Self::pass(name)
        } else {
            Self::fail(name, witness())
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: serde_json::Value,
    pub results: Vec<CheckResult>,
    pub exit_status: i32,
}

impl RunReport {
    pub fn new(command: &str, inputs: serde_json::Value, results: Vec<CheckResult>) -> Self {
        let exit_status = if results.iter().any(|r| r.status == Status::Fail) {
            1
        } else {
            0
        };
        RunReport {
            command: command.to_string(),
            inputs,
            results,
            exit_status,
        }
    }
}
