use std::path::Path;

use pathoid::Error;
use serde_json::json;

pub const CONFIG: u8 = 2;
pub const DOMAIN: u8 = 3;
pub const BUDGET: u8 = 4;

/// A failed run: exit code plus a machine-readable description.
#[derive(Debug)]
pub struct Failure {
    kind: &'static str,
    code: u8,
    message: String,
}

impl Failure {
    pub fn config(message: String) -> Self {
        Self {
            kind: "config",
            code: CONFIG,
            message,
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Self::config(format!("{}: {e}", path.display()))
    }

    pub fn json(path: &Path, e: serde_json::Error) -> Self {
        Self::config(format!("{}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> u8 {
        self.code
    }

    pub fn to_json(&self) -> String {
        json!({ "error": { "kind": self.kind, "exit_code": self.code, "message": self.message } }).to_string()
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (kind, code) = match &e {
            Error::BudgetExceeded(_) => ("budget", BUDGET),
            Error::Parse { .. } | Error::UnknownElement(_) | Error::InvalidSpace(_) | Error::InvalidArgument(_) => {
                ("config", CONFIG)
            }
            _ => ("domain", DOMAIN),
        };
        Self {
            kind,
            code,
            message: e.to_string(),
        }
    }
}
