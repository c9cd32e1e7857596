// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e}, tolerance {tolerance:.3e})")]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error("invalid time arguments: t' = {t_prime} exceeds t = {t}")]
    TimeOrder { t: f64, t_prime: f64 },

    #[error("invalid value for `{field}`: {message}")]
    Schema { field: String, message: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("map is not completely positive (minimum Choi eigenvalue {lambda_min:.3e})")]
    NotCompletelyPositive { lambda_min: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("solver failure: {0}")]
    Solver(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
