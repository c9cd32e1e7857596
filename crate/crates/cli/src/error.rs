// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use serde_json::json;

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Violation = 1,
    Config = 2,
    Solver = 3,
}

#[derive(Debug)]
pub struct CliError {
    pub exit: Exit,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            exit: Exit::Config,
            kind: "config",
            message: message.into(),
        }
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Self {
            exit: Exit::Solver,
            kind: "io",
            message: format!("{}: {err}", path.display()),
        }
    }

    pub fn to_json(&self) -> String {
        json!({
            "error": {
                "kind": self.kind,
                "message": self.message,
            },
            "exit_code": self.exit as i32,
        })
        .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl From<gkslcp::Error> for CliError {
    fn from(err: gkslcp::Error) -> Self {
        use gkslcp::Error as E;
        let (exit, kind) = match &err {
            E::Solver(_) => (Exit::Solver, "solver"),
            E::NotCompletelyPositive { .. } => (Exit::Solver, "solver"),
            E::Io(_) => (Exit::Solver, "io"),
            E::Parse { .. } => (Exit::Config, "parse"),
            E::Schema { .. } | E::NotHermitian { .. } | E::DimensionMismatch { .. } => {
                (Exit::Config, "schema")
            }
            E::TimeOrder { .. } | E::InvalidArgument(_) => (Exit::Config, "config"),
        };
        Self {
            exit,
            kind,
            message: err.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
