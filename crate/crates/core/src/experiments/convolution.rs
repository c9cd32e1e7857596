// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::cp::{
    certify, choi, cp_check, kraus_condition_check, kraus_extract, CertifyOptions, CpReport,
    DEFAULT_EPS_K,
};
use crate::error::{Error, Result};
use crate::kernel::{KernelSplit, Part};
use crate::propagate::{solve_nonlocal, TimeGrid};

/// Residual tolerance for `Kⱼ⁻¹Kₖ = 𝟙δⱼₖ`.
pub const KRAUS_CONDITION_TOL: f64 = 1e-8;

/// Kraus analysis of the 𝓩-only map at one node.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZKrausNode {
    pub t: f64,
    /// `None` when the node map is not CP and no Kraus set exists.
    pub operators: Option<usize>,
    pub holds: bool,
    pub max_residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvolutionReport {
    /// Certificate of the full memory solution.
    pub full: CpReport,
    /// Certificate of the 𝓩-only companion.
    pub z_only: CpReport,
    pub z_kraus: Vec<ZKrausNode>,
    /// The 𝓩-only map is CP at every node.
    pub z_map_cp: bool,
    /// Every node admits a Kraus set obeying the inverse condition.
    pub kraus_condition: bool,
    pub hypotheses_hold: bool,
    pub full_map_cp: bool,
    /// Hypotheses held and the full map came out CP.
    pub conclusion_confirmed: bool,
}

/// Runs the convolution special case: full and 𝓩-only memory solutions,
/// the Kraus condition on the 𝓩 maps, and CP of the full trajectory.
pub fn convolution_case(
    split: &KernelSplit,
    grid: &TimeGrid,
    options: &CertifyOptions,
) -> Result<ConvolutionReport> {
    if !split.is_convolution() {
        return Err(Error::InvalidArgument(
            "kernel has profiles that are not functions of t − t'".into(),
        ));
    }
    let full_traj = solve_nonlocal(split, grid, Part::Full)?;
    let z_traj = solve_nonlocal(split, grid, Part::Z)?;
    let full = certify(&full_traj, options)?;
    let z_only = certify(&z_traj, options)?;

    let mut z_kraus = Vec::with_capacity(z_traj.maps.len());
    for m in 0..z_traj.maps.len() {
        let t = grid.node(m);
        let c = choi(&z_traj.map(m));
        let node = if cp_check(&c, options.eps_cp)?.completely_positive {
            let set = kraus_extract(&c, DEFAULT_EPS_K)?;
            let rep = kraus_condition_check(&set, KRAUS_CONDITION_TOL, options.cond_limit);
            ZKrausNode {
                t,
                operators: Some(rep.operators),
                holds: rep.holds,
                max_residual: Some(rep.max_residual),
            }
        } else {
            ZKrausNode {
                t,
                operators: None,
                holds: false,
                max_residual: None,
            }
        };
        z_kraus.push(node);
    }
    let z_map_cp = z_only.all_cp;
    let kraus_condition = z_kraus.iter().all(|n| n.holds);
    let hypotheses_hold = z_map_cp && kraus_condition;
    let full_map_cp = full.all_cp;
    Ok(ConvolutionReport {
        full,
        z_only,
        z_kraus,
        z_map_cp,
        kraus_condition,
        hypotheses_hold,
        full_map_cp,
        conclusion_confirmed: hypotheses_hold && full_map_cp,
    })
}
