//! Named check outcomes shared by audits and verification suites.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Numerical support for a claim that the check cannot prove.
    Evidence,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn is_fail(self) -> bool {
        self == Status::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub details: serde_json::Value,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status, details: serde_json::Value) -> Self {
        Check {
            name: name.into(),
            status,
            details,
        }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, details: serde_json::Value) -> Self {
        Check::new(name, Status::from_bool(ok), details)
    }

    /// A check whose computation itself failed.
    pub fn errored(name: impl Into<String>, err: &crate::Error) -> Self {
        Check::new(name, Status::Fail, serde_json::json!({ "error": err.to_string() }))
    }
}
