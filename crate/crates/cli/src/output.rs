// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub const TOOL: &str = "gkslcp";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Tool version, the resolved configuration and its hash, and the hash of
/// every input file.
#[derive(Clone, Debug)]
pub struct Provenance {
    value: Value,
    hash: String,
}

impl Provenance {
    pub fn new(cfg: &RunConfig, command: &str, inputs: &[(&str, &[u8])]) -> Self {
        let config = serde_json::to_value(cfg).expect("config serializes");
        let hash = sha256_hex(config.to_string().as_bytes());
        let inputs: serde_json::Map<String, Value> = inputs
            .iter()
            .map(|(name, bytes)| (name.to_string(), Value::String(sha256_hex(bytes))))
            .collect();
        let value = json!({
            "tool": TOOL,
            "version": VERSION,
            "command": command,
            "config_sha256": hash,
            "config": config,
            "input_sha256": inputs,
        });
        Self { value, hash }
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    /// Leading comment line for CSV outputs.
    pub fn csv_header(&self) -> String {
        format!("# {TOOL} {VERSION} config_sha256={}\n", self.hash)
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

/// Serializes `body` with a `provenance` member added at the top level.
pub fn write_json<T: Serialize>(path: &Path, body: &T, prov: &Provenance) -> CliResult<()> {
    let mut value = serde_json::to_value(body).expect("results serialize");
    match &mut value {
        Value::Object(map) => {
            map.insert("provenance".into(), prov.value().clone());
        }
        other => {
            value = json!({ "result": other.take(), "provenance": prov.value().clone() });
        }
    }
    let mut text = serde_json::to_string_pretty(&value).expect("values serialize");
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn write_csv(path: &Path, body: &str, prov: &Provenance) -> CliResult<()> {
    let mut text = prov.csv_header();
    text.push_str(body);
    write_atomic(path, text.as_bytes())
}
