// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use gkslcp::cp::{
    certify, measure_sample, w_strict_condition_check, z_counterexample, CounterexampleReport,
    CpReport, MeasureSample, WConditionReport,
};
use gkslcp::experiments::{convolution_case, g_scan, redfield_kernel, RedfieldDoc, RedfieldModel};
use gkslcp::kernel::{GKSLKernel, KernelSplit, OperatorFunctionDoc, TwoTimeOperatorFunction};
use gkslcp::operator::identity;
use gkslcp::propagate::{MapTrajectory, Registry, SolveOptions};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult, Exit};
use crate::output::{write_csv, write_json, Provenance};

/// Tolerance on off-diagonal `W` entries.
const W_TOL: f64 = 1e-10;

/// The input problem: a full kernel, or `W` on its own.
pub enum Problem {
    Kernel(GKSLKernel),
    W(TwoTimeOperatorFunction),
}

impl Problem {
    pub fn split(&self) -> KernelSplit {
        match self {
            Problem::Kernel(k) => k.split(),
            Problem::W(w) => KernelSplit::from_w(w.clone()),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Problem::Kernel(k) => k.dim(),
            Problem::W(w) => w.dim(),
        }
    }

    fn check_horizon(&self, horizon: f64) -> CliResult<()> {
        match self {
            Problem::Kernel(k) => Ok(k.check_horizon(horizon)?),
            Problem::W(w) => match w.horizon_limit() {
                Some(lim) if lim < horizon * (1.0 - 1e-12) => Err(CliError::config(format!(
                    "tabulated profile covers [0, {lim}] but the horizon is {horizon}"
                ))),
                _ => Ok(()),
            },
        }
    }
}

pub struct Loaded {
    pub problem: Problem,
    pub name: &'static str,
    pub bytes: Vec<u8>,
}

fn read(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

fn text(path: &Path, bytes: &[u8]) -> CliResult<String> {
    String::from_utf8(bytes.to_vec())
        .map_err(|_| CliError::config(format!("{}: not UTF-8", path.display())))
}

fn with_path<T>(path: &Path, r: gkslcp::Result<T>) -> CliResult<T> {
    r.map_err(|e| {
        let mut err = CliError::from(e);
        err.message = format!("{}: {}", path.display(), err.message);
        err
    })
}

pub fn load_problem(cfg: &RunConfig) -> CliResult<Loaded> {
    if let Some(path) = &cfg.kernel {
        let bytes = read(path)?;
        let k = with_path(path, GKSLKernel::parse(&text(path, &bytes)?))?;
        return Ok(Loaded {
            problem: Problem::Kernel(k),
            name: "kernel",
            bytes,
        });
    }
    if let Some(path) = &cfg.w {
        let bytes = read(path)?;
        let w = with_path(path, OperatorFunctionDoc::parse(&text(path, &bytes)?))?;
        return Ok(Loaded {
            problem: Problem::W(w),
            name: "w",
            bytes,
        });
    }
    if let Some(path) = &cfg.redfield {
        let bytes = read(path)?;
        let doc: RedfieldDoc = with_path(
            path,
            serde_json::from_str(&text(path, &bytes)?).map_err(gkslcp::Error::from),
        )?;
        let model = with_path(path, RedfieldModel::from_doc(&doc))?;
        let k = with_path(path, redfield_kernel(&model))?;
        return Ok(Loaded {
            problem: Problem::Kernel(k),
            name: "redfield",
            bytes,
        });
    }
    Err(CliError::config("no input: give --kernel, --w or --redfield"))
}

/// What a command produced.
pub struct Outcome {
    pub exit: Exit,
    pub summary: serde_json::Value,
}

fn files(paths: &[&PathBuf]) -> Vec<String> {
    paths.iter().map(|p| p.display().to_string()).collect()
}

fn solve_trajectory(cfg: &RunConfig, loaded: &Loaded) -> CliResult<MapTrajectory> {
    let grid = cfg.grid()?;
    loaded.problem.check_horizon(grid.horizon)?;
    let registry = Registry::standard();
    let solver = registry.get(&cfg.family)?;
    let options = SolveOptions { order: cfg.order };
    Ok(solver.propagate(&loaded.problem.split(), &grid, &options)?)
}

pub fn solve(cfg: &RunConfig) -> CliResult<Outcome> {
    let loaded = load_problem(cfg)?;
    let traj = solve_trajectory(cfg, &loaded)?;
    let prov = Provenance::new(cfg, "solve", &[(loaded.name, &loaded.bytes)]);
    let mut doc = traj.to_doc();
    doc.provenance = Some(prov.value().clone());
    let json_path = cfg.out.join("trajectory.json");
    let csv_path = cfg.out.join("diagnostics.csv");
    let mut body = serde_json::to_string_pretty(&doc).expect("trajectory serializes");
    body.push('\n');
    crate::output::write_atomic(&json_path, body.as_bytes())?;
    write_csv(&csv_path, &traj.diagnostics_csv(), &prov)?;
    Ok(Outcome {
        exit: Exit::Ok,
        summary: json!({
            "command": "solve",
            "family": traj.family,
            "nodes": traj.grid.len(),
            "warnings": traj.warnings,
            "files": files(&[&json_path, &csv_path]),
        }),
    })
}

#[derive(Serialize)]
struct CertifyResult<'a> {
    report: &'a CpReport,
    measure_sample: MeasureSample,
}

pub fn certify_cmd(cfg: &RunConfig, trajectory: Option<&Path>) -> CliResult<Outcome> {
    let (traj, name, bytes) = match trajectory {
        Some(path) => {
            let bytes = read(path)?;
            let traj = with_path(path, MapTrajectory::parse(&text(path, &bytes)?))?;
            (traj, "trajectory", bytes)
        }
        None => {
            let loaded = load_problem(cfg)?;
            let traj = solve_trajectory(cfg, &loaded)?;
            (traj, loaded.name, loaded.bytes)
        }
    };
    let report = certify(&traj, &cfg.certify_options())?;
    let sample = measure_sample(&traj.last(), cfg.samples, cfg.seed)?;
    let prov = Provenance::new(cfg, "certify", &[(name, &bytes)]);
    let json_path = cfg.out.join("cp_report.json");
    let csv_path = cfg.out.join("cp_report.csv");
    write_json(
        &json_path,
        &CertifyResult {
            report: &report,
            measure_sample: sample,
        },
        &prov,
    )?;
    write_csv(&csv_path, &report.to_csv(), &prov)?;
    Ok(Outcome {
        exit: if report.all_cp { Exit::Ok } else { Exit::Violation },
        summary: json!({
            "command": "certify",
            "family": report.family,
            "all_cp": report.all_cp,
            "cp_divisible": report.cp_divisible,
            "min_lambda": report.min_lambda,
            "witness_t": report.witness.as_ref().map(|w| w.t),
            "files": files(&[&json_path, &csv_path]),
        }),
    })
}

pub fn gscan(cfg: &RunConfig) -> CliResult<Outcome> {
    let g_list = match &cfg.g_list {
        Some(g) if !g.is_empty() => g.clone(),
        _ => return Err(CliError::config("g_list is empty")),
    };
    let loaded = load_problem(cfg)?;
    let Problem::Kernel(kernel) = &loaded.problem else {
        return Err(CliError::config("gscan needs a kernel or a correlation-function model"));
    };
    let grid = cfg.grid()?;
    kernel.check_horizon(grid.horizon)?;
    let result = g_scan(kernel, &grid, &g_list)?;
    let prov = Provenance::new(cfg, "gscan", &[(loaded.name, &loaded.bytes)]);
    let json_path = cfg.out.join("gscan.json");
    let csv_path = cfg.out.join("gscan.csv");
    write_json(&json_path, &result, &prov)?;
    write_csv(&csv_path, &result.to_csv(), &prov)?;
    Ok(Outcome {
        exit: Exit::Ok,
        summary: json!({
            "command": "gscan",
            "slope": result.slope,
            "residual": result.residual,
            "monotone": result.monotone,
            "warnings": result.warnings,
            "files": files(&[&json_path, &csv_path]),
        }),
    })
}

#[derive(Serialize)]
struct CounterexampleResult<'a> {
    result: &'static str,
    search: &'a CounterexampleReport,
    w_condition: WConditionReport,
}

pub fn counterexample(cfg: &RunConfig) -> CliResult<Outcome> {
    let loaded = load_problem(cfg)?;
    let grid = cfg.grid()?;
    loaded.problem.check_horizon(grid.horizon)?;
    let split = loaded.problem.split();
    let w = split.w_op();
    let search = z_counterexample(w, &grid, cfg.eps_cp)?;
    let w_condition = w_strict_condition_check(w, &grid, &identity(w.dim()), W_TOL)?;
    let result = if search.witness.is_some() { "witness" } else { "none" };
    let prov = Provenance::new(cfg, "counterexample", &[(loaded.name, &loaded.bytes)]);
    let json_path = cfg.out.join("counterexample.json");
    write_json(
        &json_path,
        &CounterexampleResult {
            result,
            search: &search,
            w_condition,
        },
        &prov,
    )?;
    Ok(Outcome {
        exit: if search.witness.is_some() { Exit::Violation } else { Exit::Ok },
        summary: json!({
            "command": "counterexample",
            "result": result,
            "witness_t": search.witness.as_ref().map(|w| w.t),
            "measure": search.witness.as_ref().map(|w| w.measure),
            "files": files(&[&json_path]),
        }),
    })
}

pub fn convolution(cfg: &RunConfig) -> CliResult<Outcome> {
    let loaded = load_problem(cfg)?;
    let grid = cfg.grid()?;
    loaded.problem.check_horizon(grid.horizon)?;
    let report = convolution_case(&loaded.problem.split(), &grid, &cfg.certify_options())?;
    let prov = Provenance::new(cfg, "convolution", &[(loaded.name, &loaded.bytes)]);
    let json_path = cfg.out.join("convolution.json");
    write_json(&json_path, &report, &prov)?;
    Ok(Outcome {
        exit: if report.full_map_cp { Exit::Ok } else { Exit::Violation },
        summary: json!({
            "command": "convolution",
            "z_map_cp": report.z_map_cp,
            "kraus_condition": report.kraus_condition,
            "hypotheses_hold": report.hypotheses_hold,
            "full_map_cp": report.full_map_cp,
            "files": files(&[&json_path]),
        }),
    })
}

pub fn validate(cfg: &RunConfig) -> CliResult<Outcome> {
    let grid = cfg.grid()?;
    Registry::standard().get(&cfg.family)?;
    let loaded = load_problem(cfg)?;
    loaded.problem.check_horizon(grid.horizon)?;
    let mut summary = json!({
        "command": "validate",
        "valid": true,
        "input": loaded.name,
        "dim": loaded.problem.dim(),
        "family": cfg.family,
        "grid": grid,
    });
    if let Problem::Kernel(k) = &loaded.problem {
        k.check_hermitian(grid.horizon, 50)?;
        summary["convolution"] = json!(k.is_convolution());
        summary["c_number"] = json!(k.is_c_number());
        summary["coupling_g"] = json!(k.coupling());
    }
    Ok(Outcome {
        exit: Exit::Ok,
        summary,
    })
}
