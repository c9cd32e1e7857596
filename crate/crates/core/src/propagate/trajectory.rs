// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use serde::{Deserialize, Serialize};

use super::grid::TimeGrid;
use crate::error::{Error, Result};
use crate::operator::{check_dim, CMatrix, MatrixDoc, Superop};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    LocalFull,
    #[serde(rename = "local-B")]
    LocalB,
    #[serde(rename = "local-Z")]
    LocalZ,
    NonlocalFull,
    #[serde(rename = "nonlocal-B")]
    NonlocalB,
    #[serde(rename = "nonlocal-Z")]
    NonlocalZ,
    #[serde(rename = "series-local-B")]
    SeriesLocalB,
    #[serde(rename = "series-nonlocal-B")]
    SeriesNonlocalB,
    /// `V_t(…)V_t†` built from the similarity-transformed local equation.
    SeriesLocalFull,
    #[serde(rename = "weak-local-Z")]
    WeakLocalZ,
    WeakNonlocalFull,
}

impl Family {
    pub const ALL: [Family; 11] = [
        Family::LocalFull,
        Family::LocalB,
        Family::LocalZ,
        Family::NonlocalFull,
        Family::NonlocalB,
        Family::NonlocalZ,
        Family::SeriesLocalB,
        Family::SeriesNonlocalB,
        Family::SeriesLocalFull,
        Family::WeakLocalZ,
        Family::WeakNonlocalFull,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::LocalFull => "local-full",
            Family::LocalB => "local-B",
            Family::LocalZ => "local-Z",
            Family::NonlocalFull => "nonlocal-full",
            Family::NonlocalB => "nonlocal-B",
            Family::NonlocalZ => "nonlocal-Z",
            Family::SeriesLocalB => "series-local-B",
            Family::SeriesNonlocalB => "series-nonlocal-B",
            Family::SeriesLocalFull => "series-local-full",
            Family::WeakLocalZ => "weak-local-Z",
            Family::WeakNonlocalFull => "weak-nonlocal-full",
        }
    }

    /// Families whose exact solution is trace preserving for every kernel.
    /// The weak-coupling full map is only trace preserving to `O(g⁴)`.
    pub fn is_trace_preserving(self) -> bool {
        matches!(
            self,
            Family::LocalFull | Family::NonlocalFull | Family::SeriesLocalFull
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A dynamical map sampled on every node of a grid.
#[derive(Clone, Debug)]
pub struct MapTrajectory {
    pub grid: TimeGrid,
    pub dim: usize,
    pub family: Family,
    pub maps: Vec<CMatrix>,
    pub warnings: Vec<String>,
    /// Per-node Frobenius norm of the last series term, for series families.
    pub tail_norms: Option<Vec<f64>>,
}

impl MapTrajectory {
    pub fn new(grid: TimeGrid, dim: usize, family: Family, maps: Vec<CMatrix>) -> Self {
        debug_assert_eq!(maps.len(), grid.len());
        Self {
            grid,
            dim,
            family,
            maps,
            warnings: Vec::new(),
            tail_norms: None,
        }
    }

    pub fn map(&self, m: usize) -> Superop {
        Superop::new_unchecked(self.dim, self.maps[m].clone())
    }

    pub fn last(&self) -> Superop {
        self.map(self.maps.len() - 1)
    }

    /// `sup_m ‖Λ_m − Λ'_m‖_F`; both trajectories must share the grid.
    pub fn sup_distance(&self, other: &MapTrajectory) -> f64 {
        assert_eq!(self.maps.len(), other.maps.len(), "grids differ");
        self.maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| crate::operator::frobenius(&(a - b)))
            .fold(0.0, f64::max)
    }

    pub fn trace_defects(&self) -> Vec<f64> {
        (0..self.maps.len())
            .map(|m| self.map(m).trace_defect())
            .collect()
    }

    pub fn to_doc(&self) -> TrajectoryDoc {
        TrajectoryDoc {
            format: TRAJECTORY_FORMAT.to_string(),
            family: self.family,
            dim: self.dim,
            grid: self.grid,
            maps: self
                .maps
                .iter()
                .enumerate()
                .map(|(m, s)| NodeMap {
                    t: self.grid.node(m),
                    superop: MatrixDoc::from_matrix(s),
                })
                .collect(),
            warnings: self.warnings.clone(),
            tail_norms: self.tail_norms.clone(),
            provenance: None,
        }
    }

    pub fn from_doc(doc: &TrajectoryDoc) -> Result<Self> {
        if doc.format != TRAJECTORY_FORMAT {
            return Err(Error::schema(
                "format",
                format!("expected \"{TRAJECTORY_FORMAT}\", found \"{}\"", doc.format),
            ));
        }
        check_dim(doc.dim)?;
        let grid = TimeGrid::new(doc.grid.horizon, doc.grid.steps)
            .map_err(|e| Error::schema("grid", e.to_string()))?;
        if doc.maps.len() != grid.len() {
            return Err(Error::schema(
                "maps",
                format!("expected {} nodes, found {}", grid.len(), doc.maps.len()),
            ));
        }
        let big = doc.dim * doc.dim;
        let maps = doc
            .maps
            .iter()
            .enumerate()
            .map(|(m, node)| {
                if node.superop.dim != big {
                    return Err(Error::schema(
                        format!("maps[{m}].superop.dim"),
                        format!("expected {big}, found {}", node.superop.dim),
                    ));
                }
                node.superop
                    .to_matrix()
                    .map_err(|e| Error::schema(format!("maps[{m}].superop"), e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            grid,
            dim: doc.dim,
            family: doc.family,
            maps,
            warnings: doc.warnings.clone(),
            tail_norms: doc.tail_norms.clone(),
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: TrajectoryDoc = serde_json::from_str(text)?;
        Self::from_doc(&doc)
    }

    /// Per-node diagnostics as CSV: `t,trace_dev[,tail_norm]`.
    pub fn diagnostics_csv(&self) -> String {
        let mut out = String::from("t,trace_dev");
        if self.tail_norms.is_some() {
            out.push_str(",tail_norm");
        }
        out.push('\n');
        for (m, dev) in self.trace_defects().into_iter().enumerate() {
            out.push_str(&format!("{},{}", self.grid.node(m), dev));
            if let Some(tails) = &self.tail_norms {
                out.push_str(&format!(",{}", tails[m]));
            }
            out.push('\n');
        }
        out
    }
}

pub const TRAJECTORY_FORMAT: &str = "gkslcp-trajectory";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeMap {
    pub t: f64,
    pub superop: MatrixDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryDoc {
    pub format: String,
    pub family: Family,
    pub dim: usize,
    pub grid: TimeGrid,
    pub maps: Vec<NodeMap>,
    #[serde(default)]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_norms: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<serde_json::Value>,
}
