// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::choi::{choi, max_entangled, measure};
use super::divisibility::{divisibility_check, IntervalStatus};
use super::kraus::{DEFAULT_COND_LIMIT, DEFAULT_EPS_CP};
use crate::error::Result;
use crate::operator::{hermitian_eig, CVector};
use crate::propagate::{Family, MapTrajectory, TimeGrid};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifyOptions {
    pub eps_cp: f64,
    pub cond_limit: f64,
    pub divisibility: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            eps_cp: DEFAULT_EPS_CP,
            cond_limit: DEFAULT_COND_LIMIT,
            divisibility: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeReport {
    pub t: f64,
    pub lambda_min: f64,
    /// `max_{ij} |tr Λ(|i⟩⟨j|) − δᵢⱼ|`.
    pub trace_dev: f64,
    /// Choi minimum of `Λ_{t_m}Λ_{t_{m−1}}⁻¹`; absent at `t_0` and for
    /// indeterminate intervals.
    pub div_lambda_min: Option<f64>,
    pub div_status: Option<IntervalStatus>,
    pub cp: bool,
}

/// Certificate of non-CP: the Choi eigenvector of the most negative node.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChoiWitness {
    pub t: f64,
    pub lambda_min: f64,
    /// `[re, im]` components in the `sys + d·anc` ordering.
    pub eigenvector: Vec<[f64; 2]>,
    /// `𝓜` at `|Ψ⟩` = eigenvector, `|Φ⟩ = |Φ⁺⟩/√d`.
    pub measure: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CpReport {
    pub family: Family,
    pub dim: usize,
    pub grid: TimeGrid,
    pub options: CertifyOptions,
    /// `ε_CP·d`.
    pub threshold: f64,
    pub all_cp: bool,
    /// `None` when divisibility was not checked.
    pub cp_divisible: Option<bool>,
    pub indeterminate_intervals: usize,
    pub min_lambda: f64,
    pub max_trace_dev: f64,
    pub nodes: Vec<NodeReport>,
    pub witness: Option<ChoiWitness>,
}

pub fn certify(traj: &MapTrajectory, options: &CertifyOptions) -> Result<CpReport> {
    let d = traj.dim;
    let threshold = options.eps_cp * d as f64;
    let spectra: Vec<(f64, CVector, f64)> = (0..traj.maps.len())
        .into_par_iter()
        .map(|m| {
            let map = traj.map(m);
            let e = hermitian_eig(&choi(&map).matrix)?;
            Ok((e.min(), e.eigenvectors.column(0).into_owned(), map.trace_defect()))
        })
        .collect::<Result<_>>()?;
    let intervals = if options.divisibility {
        Some(divisibility_check(traj, options.eps_cp, options.cond_limit)?)
    } else {
        None
    };
    let nodes: Vec<NodeReport> = spectra
        .iter()
        .enumerate()
        .map(|(m, (lambda, _, dev))| {
            let interval = match (&intervals, m) {
                (Some(iv), m) if m > 0 => Some(iv[m - 1]),
                _ => None,
            };
            NodeReport {
                t: traj.grid.node(m),
                lambda_min: *lambda,
                trace_dev: *dev,
                div_lambda_min: interval.and_then(|i| i.lambda_min),
                div_status: interval.map(|i| i.status),
                cp: *lambda >= -threshold,
            }
        })
        .collect();
    let all_cp = nodes.iter().all(|n| n.cp);
    let (worst, min_lambda) = spectra
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, s)| if s.0 < bv { (i, s.0) } else { (bi, bv) });
    let witness = if all_cp {
        None
    } else {
        let v = &spectra[worst].1;
        Some(ChoiWitness {
            t: traj.grid.node(worst),
            lambda_min: min_lambda,
            eigenvector: v.iter().map(|z| [z.re, z.im]).collect(),
            measure: measure(&traj.map(worst), v, &max_entangled(d))?,
        })
    };
    let cp_divisible = intervals.as_ref().map(|iv| {
        iv.iter().all(|i| i.status != IntervalStatus::NotCp)
    });
    let indeterminate_intervals = intervals
        .as_ref()
        .map(|iv| iv.iter().filter(|i| i.status == IntervalStatus::Indeterminate).count())
        .unwrap_or(0);
    Ok(CpReport {
        family: traj.family,
        dim: d,
        grid: traj.grid,
        options: *options,
        threshold,
        all_cp,
        cp_divisible,
        indeterminate_intervals,
        min_lambda,
        max_trace_dev: nodes.iter().map(|n| n.trace_dev).fold(0.0, f64::max),
        nodes,
        witness,
    })
}

impl CpReport {
    /// Columns `t,lambda_min,trace_dev,div_lambda_min,verdict`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,lambda_min,trace_dev,div_lambda_min,verdict\n");
        for n in &self.nodes {
            let div = match (n.div_lambda_min, n.div_status) {
                (Some(x), _) => x.to_string(),
                (None, Some(IntervalStatus::Indeterminate)) => "indeterminate".into(),
                _ => String::new(),
            };
            let verdict = if n.cp { "cp" } else { "not-cp" };
            out.push_str(&format!("{},{},{},{},{}\n", n.t, n.lambda_min, n.trace_dev, div, verdict));
        }
        out
    }
}
