// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use gkslcp::cp::{CertifyOptions, DEFAULT_COND_LIMIT, DEFAULT_EPS_CP, DEFAULT_SEED};
use gkslcp::propagate::{TimeGrid, DEFAULT_ORDER};

use crate::error::{CliError, CliResult};

pub const DEFAULT_HORIZON: f64 = 2.0;
pub const DEFAULT_STEPS: usize = 400;
pub const DEFAULT_FAMILY: &str = "local-full";
pub const DEFAULT_SAMPLES: usize = 256;

/// Fully resolved run configuration. Paths are stored as resolved; `out` is
/// excluded from serialization so it does not enter the config hash.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<PathBuf>,
    /// Operator function file giving `W` directly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<PathBuf>,
    /// Correlation-function model file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub redfield: Option<PathBuf>,
    #[serde(default = "default_horizon", rename = "T")]
    pub horizon: f64,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_family")]
    pub family: String,
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default = "default_eps_cp")]
    pub eps_cp: f64,
    #[serde(default = "default_cond_limit")]
    pub cond_limit: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_true")]
    pub divisibility: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_list: Option<Vec<f64>>,
    #[serde(default = "default_out", skip_serializing)]
    pub out: PathBuf,
}

fn default_horizon() -> f64 {
    DEFAULT_HORIZON
}
fn default_steps() -> usize {
    DEFAULT_STEPS
}
fn default_family() -> String {
    DEFAULT_FAMILY.into()
}
fn default_order() -> usize {
    DEFAULT_ORDER
}
fn default_eps_cp() -> f64 {
    DEFAULT_EPS_CP
}
fn default_cond_limit() -> f64 {
    DEFAULT_COND_LIMIT
}
fn default_seed() -> u64 {
    DEFAULT_SEED
}
fn default_samples() -> usize {
    DEFAULT_SAMPLES
}
fn default_true() -> bool {
    true
}
fn default_out() -> PathBuf {
    PathBuf::from("out")
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

/// Flags shared by every subcommand; each overrides the config file.
#[derive(Args, Debug, Default, Clone)]
pub struct CommonArgs {
    /// JSON run configuration; relative paths inside resolve against its directory
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Kernel file
    #[arg(long)]
    pub kernel: Option<PathBuf>,
    /// W operator-function file (anticommutator-only problems)
    #[arg(long)]
    pub w: Option<PathBuf>,
    /// Correlation-function model file
    #[arg(long)]
    pub redfield: Option<PathBuf>,
    /// Time horizon
    #[arg(long = "T", value_name = "FLOAT")]
    pub horizon: Option<f64>,
    /// Number of grid steps
    #[arg(long)]
    pub steps: Option<usize>,
    /// Solver family
    #[arg(long)]
    pub family: Option<String>,
    /// Series truncation order
    #[arg(long)]
    pub order: Option<usize>,
    /// CP tolerance per dimension
    #[arg(long)]
    pub eps_cp: Option<f64>,
    /// Condition-number limit for inverses
    #[arg(long)]
    pub cond_limit: Option<f64>,
    /// Seed for sampled measures
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of sampled measure pairs
    #[arg(long)]
    pub samples: Option<usize>,
    /// Skip the divisibility check
    #[arg(long)]
    pub no_divisibility: bool,
    /// Comma-separated coupling values
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub g_list: Option<Vec<f64>>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn rebase(base: &Path, p: PathBuf) -> PathBuf {
    if p.is_absolute() {
        p
    } else {
        base.join(p)
    }
}

impl CommonArgs {
    pub fn resolve(&self) -> CliResult<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
                let mut cfg: RunConfig = serde_json::from_str(&text)
                    .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
                let base = path.parent().unwrap_or(Path::new(""));
                cfg.kernel = cfg.kernel.map(|p| rebase(base, p));
                cfg.w = cfg.w.map(|p| rebase(base, p));
                cfg.redfield = cfg.redfield.map(|p| rebase(base, p));
                cfg
            }
            None => RunConfig::default(),
        };
        macro_rules! take {
            ($($field:ident),*) => {$(
                if let Some(v) = &self.$field {
                    cfg.$field = v.clone().into();
                }
            )*};
        }
        take!(kernel, w, redfield, horizon, steps, family, order, eps_cp, cond_limit, seed, samples, out);
        if self.g_list.is_some() {
            cfg.g_list = self.g_list.clone();
        }
        if self.no_divisibility {
            cfg.divisibility = false;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(CliError::config(format!("{name} must be positive, got {v}")))
            }
        };
        positive("T", self.horizon)?;
        positive("eps_cp", self.eps_cp)?;
        positive("cond_limit", self.cond_limit)?;
        for (name, v) in [("steps", self.steps), ("order", self.order), ("samples", self.samples)] {
            if v == 0 {
                return Err(CliError::config(format!("{name} must be at least 1")));
            }
        }
        let sources = [&self.kernel, &self.w, &self.redfield]
            .iter()
            .filter(|p| p.is_some())
            .count();
        if sources > 1 {
            return Err(CliError::config("give at most one of kernel, w, redfield"));
        }
        Ok(())
    }

    pub fn grid(&self) -> CliResult<TimeGrid> {
        Ok(TimeGrid::new(self.horizon, self.steps)?)
    }

    pub fn certify_options(&self) -> CertifyOptions {
        CertifyOptions {
            eps_cp: self.eps_cp,
            cond_limit: self.cond_limit,
            divisibility: self.divisibility,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_unknown_keys() {
        let cfg = RunConfig::default();
        assert_eq!(cfg.steps, 400);
        assert_eq!(cfg.family, "local-full");
        assert!(serde_json::from_str::<RunConfig>(r#"{"stepz": 3}"#).is_err());
        let cfg: RunConfig = serde_json::from_str(r#"{"T": 1.5, "g_list": [0.1, 0.2]}"#).unwrap();
        assert_eq!(cfg.horizon, 1.5);
    }

    #[test]
    fn flags_override_and_validate() {
        let args = CommonArgs {
            steps: Some(10),
            horizon: Some(0.5),
            ..CommonArgs::default()
        };
        let cfg = args.resolve().unwrap();
        assert_eq!((cfg.steps, cfg.horizon), (10, 0.5));
        let bad = CommonArgs {
            horizon: Some(-1.0),
            ..CommonArgs::default()
        };
        assert!(bad.resolve().is_err());
    }

    #[test]
    fn out_is_not_serialized() {
        let cfg = RunConfig {
            out: "elsewhere".into(),
            ..RunConfig::default()
        };
        assert!(!serde_json::to_string(&cfg).unwrap().contains("elsewhere"));
    }
}
