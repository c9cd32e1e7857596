// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::choi::{choi, cp_check};
use super::kraus::condition_number;
use crate::error::Result;
use crate::operator::Superop;
use crate::propagate::MapTrajectory;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntervalStatus {
    Cp,
    NotCp,
    /// `Λ_{t_m}` too ill-conditioned to invert.
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalVerdict {
    pub t_start: f64,
    pub t_end: f64,
    pub status: IntervalStatus,
    pub condition: f64,
    pub lambda_min: Option<f64>,
}

/// `Λ_{t_{m+1}}·Λ_{t_m}⁻¹` for every consecutive pair, checked for CP.
pub fn divisibility_check(
    traj: &MapTrajectory,
    eps_cp: f64,
    cond_limit: f64,
) -> Result<Vec<IntervalVerdict>> {
    let d = traj.dim;
    (0..traj.maps.len().saturating_sub(1))
        .into_par_iter()
        .map(|m| {
            let (a, b) = (&traj.maps[m], &traj.maps[m + 1]);
            let (t_start, t_end) = (traj.grid.node(m), traj.grid.node(m + 1));
            let condition = condition_number(a);
            let indeterminate = IntervalVerdict {
                t_start,
                t_end,
                status: IntervalStatus::Indeterminate,
                condition,
                lambda_min: None,
            };
            if !(condition <= cond_limit) {
                return Ok(indeterminate);
            }
            // X·A = B  ⇔  Aᵀ·Xᵀ = Bᵀ
            let Some(xt) = a.transpose().lu().solve(&b.transpose()) else {
                return Ok(indeterminate);
            };
            let inter = Superop::from_matrix(d, xt.transpose())?;
            let v = cp_check(&choi(&inter), eps_cp)?;
            Ok(IntervalVerdict {
                t_start,
                t_end,
                status: if v.completely_positive {
                    IntervalStatus::Cp
                } else {
                    IntervalStatus::NotCp
                },
                condition,
                lambda_min: Some(v.lambda_min),
            })
        })
        .collect()
}
