// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

//! Explicit CP-violation witnesses for the anticommutator-only memory map
//! when `W` has an off-diagonal element.
//!
//! Ansatz: `|Ψ⟩ = ψ_n e^{iθ}|n⟩ + ψ_l|l⟩` on the system (ancilla in `|0⟩`),
//! `|Φ⟩` a basis state, with the relative phase `θ` fixed from the phase
//! `φ_{l,n}` of `⟨l|W|n⟩`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::choi::{choi, max_entangled, measure};
use crate::error::{Error, Result};
use crate::kernel::{KernelSplit, Part, TwoTimeOperatorFunction};
use crate::operator::{CVector, C64};
use crate::propagate::{solve_nonlocal, MapTrajectory, TimeGrid};

/// Points in the `|ψ_n|` sweep.
pub const AMPLITUDE_POINTS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseRule {
    /// `θ_n − θ_l = π − φ_{l,n}`.
    PiMinusPhi,
    /// `θ_n − θ_l = −φ_{l,n}`, which makes the second-order term of `𝓜`
    /// as negative as possible.
    MinusPhi,
}

impl PhaseRule {
    pub fn phase(self, phi: f64) -> f64 {
        match self {
            PhaseRule::PiMinusPhi => PI - phi,
            PhaseRule::MinusPhi => -phi,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub t: f64,
    pub node: usize,
    pub rule: PhaseRule,
    /// `(l, n)` of the seeding element `⟨l|W|n⟩`.
    pub pair: (usize, usize),
    pub psi_n: f64,
    pub relative_phase: f64,
    pub phi_index: usize,
    /// `[re, im]` components in the `sys + d·anc` ordering.
    pub psi: Vec<[f64; 2]>,
    pub phi: Vec<[f64; 2]>,
    pub measure: f64,
    /// Choi minimum eigenvalue at `t`.
    pub choi_lambda_min: f64,
    /// `𝓜` at the Choi minimum eigenvector with `|Φ⟩ = |Φ⁺⟩/√d`; equals
    /// `λ_min/d`.
    pub choi_measure: f64,
    /// `λ_min ≤ 𝓜 < 0`, i.e. the Choi spectrum confirms the witness.
    pub cross_validated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    /// Largest `|∫∫⟨l|W|n⟩|`, `l ≠ n`; zero for diagonal `W`.
    pub max_offdiagonal: f64,
    pub phase_phi: Option<f64>,
    pub threshold: f64,
    /// Rules tried, in order.
    pub rules: Vec<PhaseRule>,
    /// Rules that produced a witness somewhere on the grid.
    pub rules_with_witness: Vec<PhaseRule>,
    pub witness: Option<Witness>,
}

fn to_pairs(v: &CVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

/// `∫₀ᵀ dt₁ ∫₀^{t₁} dt₂ W(t₁,t₂)` by nested trapezoids on the grid.
fn integrated_w(w: &TwoTimeOperatorFunction, grid: &TimeGrid) -> crate::operator::CMatrix {
    let d = w.dim();
    let h = grid.step();
    let inner: Vec<_> = (0..grid.len())
        .map(|m| {
            let mut acc = crate::operator::CMatrix::zeros(d, d);
            if m == 0 {
                return acc;
            }
            for j in 0..=m {
                let wt = if j == 0 || j == m { 0.5 * h } else { h };
                acc += w.eval(grid.node(m), grid.node(j)) * C64::new(wt, 0.0);
            }
            acc
        })
        .collect();
    let mut out = crate::operator::CMatrix::zeros(d, d);
    for m in 1..grid.len() {
        out += (&inner[m - 1] + &inner[m]) * C64::new(0.5 * h, 0.0);
    }
    out
}

/// Solves the anticommutator-only memory equation for `W` and searches the
/// phase ansatz for `𝓜 < −10·ε_CP`. Both phase rules are tried, the
/// `π − φ` rule first; the first witness in time order is returned.
pub fn z_counterexample(
    w: &TwoTimeOperatorFunction,
    grid: &TimeGrid,
    eps_cp: f64,
) -> Result<CounterexampleReport> {
    let traj = solve_nonlocal(&KernelSplit::from_w(w.clone()), grid, Part::Z)?;
    search(w, &traj, eps_cp)
}

/// Search on an already solved anticommutator-only trajectory.
pub fn search(
    w: &TwoTimeOperatorFunction,
    traj: &MapTrajectory,
    eps_cp: f64,
) -> Result<CounterexampleReport> {
    let d = w.dim();
    if traj.dim != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: traj.dim,
        });
    }
    let threshold = -10.0 * eps_cp;
    let rules = vec![PhaseRule::PiMinusPhi, PhaseRule::MinusPhi];
    let total = integrated_w(w, &traj.grid);
    let mut best: Option<(usize, usize, f64)> = None;
    for l in 0..d {
        for n in 0..d {
            if l != n {
                let mag = total[(l, n)].norm();
                if best.is_none_or(|(_, _, b)| mag > b) {
                    best = Some((l, n, mag));
                }
            }
        }
    }
    let (l, n, max_off) = best.expect("d ≥ 2");
    let mut report = CounterexampleReport {
        max_offdiagonal: max_off,
        phase_phi: None,
        threshold,
        rules: rules.clone(),
        rules_with_witness: Vec::new(),
        witness: None,
    };
    if max_off <= 1e-12 {
        return Ok(report);
    }
    let phi = total[(l, n)].arg();
    report.phase_phi = Some(phi);

    let big = d * d;
    for &rule in &rules {
        let theta = rule.phase(phi);
        let mut found: Option<Witness> = None;
        'nodes: for m in 0..traj.maps.len() {
            let map = traj.map(m);
            for k in 1..=AMPLITUDE_POINTS {
                let a = k as f64 / (AMPLITUDE_POINTS + 1) as f64;
                let b = (1.0 - a * a).sqrt();
                let mut psi = CVector::zeros(big);
                psi[n] = C64::from_polar(a, theta);
                psi[l] = C64::new(b, 0.0);
                for p in 0..d {
                    let mut phi_v = CVector::zeros(big);
                    phi_v[p] = C64::new(1.0, 0.0);
                    let value = measure(&map, &psi, &phi_v)?;
                    if value < threshold {
                        let e = choi(&map).eig()?;
                        let v0: CVector = e.eigenvectors.column(0).into_owned();
                        let choi_measure = measure(&map, &v0, &max_entangled(d))?;
                        found = Some(Witness {
                            t: traj.grid.node(m),
                            node: m,
                            rule,
                            pair: (l, n),
                            psi_n: a,
                            relative_phase: theta,
                            phi_index: p,
                            psi: to_pairs(&psi),
                            phi: to_pairs(&phi_v),
                            measure: value,
                            choi_lambda_min: e.min(),
                            choi_measure,
                            cross_validated: e.min() <= value + 1e-12 && e.min() < threshold,
                        });
                        break 'nodes;
                    }
                }
            }
        }
        if let Some(wit) = found {
            report.rules_with_witness.push(rule);
            let earlier = report.witness.as_ref().is_none_or(|cur| wit.node < cur.node);
            if earlier {
                report.witness = Some(wit);
            }
        }
    }
    Ok(report)
}
