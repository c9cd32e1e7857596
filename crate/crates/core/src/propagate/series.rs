// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

//! Iterated-integral expansions of the sandwich-only equations.
//!
//! Local pattern: `T_n(t) = ∫₀ᵗ dt₁ G^B_{t₁} T_{n−1}(t₁)`, nesting
//! `t₂ ≤ t₁, t₃ ≤ t₁, t₄ ≤ t₃, …`.
//! Non-local pattern: `T_n(t) = ∫₀ᵗ dt₁ ∫₀^{t₁} dt₂ 𝓑_{t₁,t₂} T_{n−1}(t₂)`,
//! fully ordered. Both are accumulated node by node with the trapezoid rule.

use serde::{Deserialize, Serialize};

use super::grid::TimeGrid;
use super::trajectory::{Family, MapTrajectory};
use super::volterra::NodeKernel;
use crate::operator::{frobenius, CMatrix, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Locality {
    Local,
    Nonlocal,
}

pub const DEFAULT_ORDER: usize = 8;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Cumulative trapezoid integral over the nodes.
fn cumulative(values: &[CMatrix], h: f64) -> Vec<CMatrix> {
    let (r, c) = values[0].shape();
    let mut out = Vec::with_capacity(values.len());
    let mut acc = CMatrix::zeros(r, c);
    out.push(acc.clone());
    for w in values.windows(2) {
        acc += (&w[0] + &w[1]) * re(0.5 * h);
        out.push(acc.clone());
    }
    out
}

/// Series terms `T_0 … T_N` on the nodes. `local_gen` holds `G^B` at nodes;
/// `memory` samples `𝓑(t_m, t_j)`; exactly one is used per locality.
pub(crate) fn series_terms(
    big: usize,
    grid: &TimeGrid,
    order: usize,
    locality: Locality,
    local_gen: Option<&[CMatrix]>,
    memory: Option<&NodeKernel<'_>>,
) -> Vec<Vec<CMatrix>> {
    let h = grid.step();
    let n = grid.len();
    let mut terms = vec![vec![CMatrix::identity(big, big); n]];
    for _ in 0..order {
        let prev = terms.last().expect("T_0 present");
        let integrand: Vec<CMatrix> = match locality {
            Locality::Local => {
                let g = local_gen.expect("local generator required");
                (0..n).map(|m| &g[m] * &prev[m]).collect()
            }
            Locality::Nonlocal => {
                let k = memory.expect("memory kernel required");
                (0..n)
                    .map(|m| {
                        let mut acc = CMatrix::zeros(big, big);
                        if m == 0 {
                            return acc;
                        }
                        for j in 0..=m {
                            let w = if j == 0 || j == m { 0.5 * h } else { h };
                            acc += k(m, j) * &prev[j] * re(w);
                        }
                        acc
                    })
                    .collect()
            }
        };
        terms.push(cumulative(&integrand, h));
    }
    terms
}

/// Sums the terms into a trajectory and records `‖T_N‖` at every node.
pub(crate) fn assemble(
    terms: &[Vec<CMatrix>],
    grid: &TimeGrid,
    dim: usize,
    family: Family,
) -> MapTrajectory {
    let n = grid.len();
    let big = dim * dim;
    let mut maps = vec![CMatrix::zeros(big, big); n];
    for term in terms {
        for (acc, t) in maps.iter_mut().zip(term) {
            *acc += t;
        }
    }
    let tail = terms.last().expect("non-empty series");
    let mut traj = MapTrajectory::new(*grid, dim, family, maps);
    traj.tail_norms = Some(tail.iter().map(frobenius).collect());
    traj
}

/// `ρ + Σ_{n=1}^{N} tⁿ/n! Lⁿ ρ (L†)ⁿ`.
pub fn sandwich_series_oracle(l: &CMatrix, t: f64, rho: &CMatrix, order: usize) -> CMatrix {
    let mut out = rho.clone();
    let mut left = CMatrix::identity(l.nrows(), l.ncols());
    let mut coeff = 1.0;
    for n in 1..=order {
        left = l * left;
        coeff *= t / n as f64;
        out += &left * rho * left.adjoint() * re(coeff);
    }
    out
}
