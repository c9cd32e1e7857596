// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

//! The strict condition on `W` for the anticommutator-only memory map: `W`
//! must be diagonal, with a definite sign of its integrated real part.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::choi::{choi, cp_check};
use super::kraus::DEFAULT_EPS_CP;
use crate::error::{Error, Result};
use crate::kernel::{KernelSplit, Part, TwoTimeOperatorFunction};
use crate::operator::{frobenius, identity, CMatrix, C64};
use crate::propagate::{solve_nonlocal, TimeGrid};

/// Which sign of `Re ∫∫⟨n|W|n⟩` is compatible with complete positivity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignConvention {
    /// `Re ∫₀ᵗ∫₀^{t₁} ⟨n|W|n⟩ ≤ 0`: the scalar map grows like `cosh`.
    NonPositive,
    /// `Re ∫₀ᵗ∫₀^{t₁} ⟨n|W|n⟩ ≥ 0`.
    NonNegative,
    /// The oracle could not separate the two readings.
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignResolution {
    /// Every node CP for `W = +𝟙`.
    pub plus_identity_cp: bool,
    /// Every node CP for `W = −𝟙`.
    pub minus_identity_cp: bool,
    pub convention: SignConvention,
}

fn scalar_w_is_cp(sign: f64) -> Result<bool> {
    let w = TwoTimeOperatorFunction::constant(identity(2) * C64::new(sign, 0.0));
    let traj = solve_nonlocal(&KernelSplit::from_w(w), &TimeGrid::new(2.0, 400)?, Part::Z)?;
    for m in 0..traj.maps.len() {
        if !cp_check(&choi(&traj.map(m)), DEFAULT_EPS_CP)?.completely_positive {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Runs the anticommutator-only memory equation for `W = ±𝟙` (d = 2, T = 2)
/// and reads off which sign keeps every node CP.
pub fn resolve_sign_convention() -> Result<SignResolution> {
    static CACHE: OnceLock<SignResolution> = OnceLock::new();
    if let Some(r) = CACHE.get() {
        return Ok(*r);
    }
    let plus = scalar_w_is_cp(1.0)?;
    let minus = scalar_w_is_cp(-1.0)?;
    let convention = match (plus, minus) {
        (false, true) => SignConvention::NonPositive,
        (true, false) => SignConvention::NonNegative,
        _ => SignConvention::Undetermined,
    };
    let r = SignResolution {
        plus_identity_cp: plus,
        minus_identity_cp: minus,
        convention,
    };
    Ok(*CACHE.get_or_init(|| r))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WConditionReport {
    /// `max |⟨m|W|n⟩|`, `m ≠ n`, over the sampled triangle.
    pub max_offdiagonal: f64,
    pub diagonal: bool,
    /// `Re ∫₀ᵀ dt₁ ∫₀^{t₁} dt₂ ⟨n|W|n⟩` per basis vector.
    pub integrated_diagonal: Vec<f64>,
    /// Largest difference between entries of `integrated_diagonal`.
    pub diagonal_spread: f64,
    /// Verdict under the `Re ≤ 0` reading.
    pub passes_nonpositive_reading: bool,
    /// Verdict under the `Re ≥ 0` reading.
    pub passes_nonnegative_reading: bool,
    pub resolution: SignResolution,
    /// Verdict under the resolved reading; `None` if unresolved.
    pub verdict: Option<bool>,
    pub tolerance: f64,
}

/// Samples `U†W U` on every node pair `t_j ≤ t_m` of the grid.
pub fn w_strict_condition_check(
    w: &TwoTimeOperatorFunction,
    grid: &TimeGrid,
    basis: &CMatrix,
    tol: f64,
) -> Result<WConditionReport> {
    let d = w.dim();
    if basis.nrows() != d || basis.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: basis.nrows().max(basis.ncols()),
        });
    }
    let ortho = frobenius(&(basis.adjoint() * basis - identity(d)));
    if ortho > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "basis is not orthonormal (‖U†U − 𝟙‖ = {ortho:.3e})"
        )));
    }
    let h = grid.step();
    let mut max_off: f64 = 0.0;
    // Inner trapezoid over t₂, then outer trapezoid over t₁.
    let mut inner = vec![vec![0.0; d]; grid.len()];
    for m in 0..grid.len() {
        for j in 0..=m {
            let x = basis.adjoint() * w.eval(grid.node(m), grid.node(j)) * basis;
            for a in 0..d {
                for b in 0..d {
                    if a != b {
                        max_off = max_off.max(x[(a, b)].norm());
                    }
                }
            }
            if m > 0 {
                let wt = if j == 0 || j == m { 0.5 * h } else { h };
                for n in 0..d {
                    inner[m][n] += wt * x[(n, n)].re;
                }
            }
        }
    }
    let mut integrated = vec![0.0; d];
    for m in 1..grid.len() {
        for n in 0..d {
            integrated[n] += 0.5 * h * (inner[m - 1][n] + inner[m][n]);
        }
    }
    let diagonal = max_off <= tol;
    let spread = integrated.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - integrated.iter().cloned().fold(f64::INFINITY, f64::min);
    let nonpos = diagonal && integrated.iter().all(|&x| x <= tol);
    let nonneg = diagonal && integrated.iter().all(|&x| x >= -tol);
    let resolution = resolve_sign_convention()?;
    let verdict = match resolution.convention {
        SignConvention::NonPositive => Some(nonpos),
        SignConvention::NonNegative => Some(nonneg),
        SignConvention::Undetermined => None,
    };
    Ok(WConditionReport {
        max_offdiagonal: max_off,
        diagonal,
        integrated_diagonal: integrated,
        diagonal_spread: spread,
        passes_nonpositive_reading: nonpos,
        passes_nonnegative_reading: nonneg,
        resolution,
        verdict,
        tolerance: tol,
    })
}
