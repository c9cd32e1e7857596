// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::choi::ChoiMatrix;
use crate::error::{Error, Result};
use crate::operator::{conj_kron, frobenius, CMatrix, Superop, C64};

/// Relative Choi eigenvalue cutoff for Kraus extraction.
pub const DEFAULT_EPS_K: f64 = 1e-12;
/// CP tolerance per unit dimension.
pub const DEFAULT_EPS_CP: f64 = 1e-8;
/// Largest condition number treated as invertible.
pub const DEFAULT_COND_LIMIT: f64 = 1e12;

#[derive(Clone, Debug)]
pub struct KrausSet {
    pub dim: usize,
    pub operators: Vec<CMatrix>,
    /// Choi eigenvalues absorbed into the operators.
    pub weights: Vec<f64>,
}

impl KrausSet {
    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// `Σⱼ Kⱼ(·)Kⱼ†`.
    pub fn reconstruct(&self) -> Superop {
        let big = self.dim * self.dim;
        let mut m = CMatrix::zeros(big, big);
        for k in &self.operators {
            m += conj_kron(k);
        }
        Superop::from_matrix(self.dim, m).expect("consistent dimensions")
    }

    /// `‖Σⱼ Kⱼ†Kⱼ − 𝟙‖_F`.
    pub fn completeness_defect(&self) -> f64 {
        let mut s = CMatrix::zeros(self.dim, self.dim);
        for k in &self.operators {
            s += k.adjoint() * k;
        }
        frobenius(&(s - CMatrix::identity(self.dim, self.dim)))
    }
}

/// Kraus operators `Kⱼ = √λⱼ·unvec(vⱼ)` from the Choi eigenpairs with
/// `λⱼ > ε_K·tr C`. Fails if the Choi matrix is not PSD within
/// `DEFAULT_EPS_CP·d`.
pub fn kraus_extract(c: &ChoiMatrix, eps_k: f64) -> Result<KrausSet> {
    let e = c.eig()?;
    let d = c.dim;
    if e.min() < -DEFAULT_EPS_CP * d as f64 {
        return Err(Error::NotCompletelyPositive {
            lambda_min: e.min(),
        });
    }
    let cutoff = eps_k * c.trace().re.abs();
    let mut operators = Vec::new();
    let mut weights = Vec::new();
    for (idx, &lambda) in e.eigenvalues.iter().enumerate().rev() {
        if lambda <= cutoff {
            continue;
        }
        let v = e.eigenvectors.column(idx);
        let k = CMatrix::from_fn(d, d, |a, i| v[a + d * i] * C64::new(lambda.sqrt(), 0.0));
        operators.push(k);
        weights.push(lambda);
    }
    Ok(KrausSet {
        dim: d,
        operators,
        weights,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "clause", rename_all = "kebab-case")]
pub enum KrausClause {
    /// `Kⱼ` is singular or too ill-conditioned to invert.
    Singular { index: usize, condition: f64 },
    /// `Kⱼ⁻¹Kⱼ ≠ 𝟙`.
    Diagonal { index: usize, residual: f64 },
    /// `Kⱼ⁻¹Kₖ ≠ 0` for `j ≠ k`.
    OffDiagonal { j: usize, k: usize, residual: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KrausConditionReport {
    pub holds: bool,
    pub operators: usize,
    pub conditions: Vec<f64>,
    /// Largest `‖Kⱼ⁻¹Kₖ − 𝟙δⱼₖ‖_F` over invertible pairs.
    pub max_residual: f64,
    /// Every failed clause; empty when the condition holds.
    pub failures: Vec<KrausClause>,
}

pub fn condition_number(m: &CMatrix) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Checks `Kⱼ⁻¹Kₖ = 𝟙δⱼₖ` for every pair. With more than one operator the
/// off-diagonal clause fails for any invertible set.
pub fn kraus_condition_check(set: &KrausSet, tol: f64, cond_limit: f64) -> KrausConditionReport {
    let d = set.dim;
    let conditions: Vec<f64> = set.operators.iter().map(condition_number).collect();
    let mut failures = Vec::new();
    let mut max_residual: f64 = 0.0;
    for (j, kj) in set.operators.iter().enumerate() {
        if !(conditions[j] <= cond_limit) {
            failures.push(KrausClause::Singular {
                index: j,
                condition: conditions[j],
            });
            continue;
        }
        let lu = kj.clone().lu();
        for (k, kk) in set.operators.iter().enumerate() {
            let Some(prod) = lu.solve(kk) else {
                failures.push(KrausClause::Singular {
                    index: j,
                    condition: f64::INFINITY,
                });
                break;
            };
            let target = if j == k {
                CMatrix::identity(d, d)
            } else {
                CMatrix::zeros(d, d)
            };
            let residual = frobenius(&(prod - target));
            max_residual = max_residual.max(residual);
            if residual > tol {
                failures.push(if j == k {
                    KrausClause::Diagonal { index: j, residual }
                } else {
                    KrausClause::OffDiagonal { j, k, residual }
                });
            }
        }
    }
    KrausConditionReport {
        holds: failures.is_empty() && !set.is_empty(),
        operators: set.len(),
        conditions,
        max_residual,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cp::choi::{choi, transpose_map};
    use crate::operator::{identity, sandwich_superop, sigma_z};

    fn unitary() -> CMatrix {
        let c = C64::new(0.6, 0.0);
        let s = C64::new(0.0, 0.8);
        CMatrix::from_row_slice(2, 2, &[c, s, s, c])
    }

    #[test]
    fn identity_has_single_kraus() {
        let set = kraus_extract(&choi(&Superop::identity(2)), DEFAULT_EPS_K).unwrap();
        assert_eq!(set.len(), 1);
        let k = &set.operators[0];
        let phase = k[(0, 0)];
        assert!(frobenius(&(k - identity(2) * phase)) < 1e-12);
        assert!((phase.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unitary_conjugation_recovers_unitary() {
        let u = unitary();
        let set = kraus_extract(&choi(&sandwich_superop(&u, &u.adjoint()).unwrap()), DEFAULT_EPS_K).unwrap();
        assert_eq!(set.len(), 1);
        let k = &set.operators[0];
        let phase = k[(0, 0)] / u[(0, 0)];
        assert!(frobenius(&(k - &u * phase)) < 1e-12);
        assert!(set.completeness_defect() < 1e-12);
        assert!(kraus_condition_check(&set, 1e-8, DEFAULT_COND_LIMIT).holds);
    }

    #[test]
    fn dephasing_has_two_kraus_and_fails_offdiagonal_clause() {
        // Coherence factor e^{-1}: ρ ↦ p ρ + (1-p) σ_z ρ σ_z
        let p = (1.0 + (-1.0f64).exp()) / 2.0;
        let map = Superop::identity(2)
            .scale(C64::new(p, 0.0))
            .add(&sandwich_superop(&sigma_z(), &sigma_z()).unwrap().scale(C64::new(1.0 - p, 0.0)));
        let set = kraus_extract(&choi(&map), DEFAULT_EPS_K).unwrap();
        assert_eq!(set.len(), 2);
        assert!(set.reconstruct().distance(&map) < 1e-12);
        assert!(set.completeness_defect() < 1e-12);
        let report = kraus_condition_check(&set, 1e-8, DEFAULT_COND_LIMIT);
        assert!(!report.holds);
        assert!(report.failures.iter().all(|f| matches!(f, KrausClause::OffDiagonal { .. })));
    }

    #[test]
    fn single_invertible_nonunitary_passes() {
        let k = CMatrix::from_row_slice(2, 2, &[C64::new(2.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.5, 0.0)]);
        let set = KrausSet {
            dim: 2,
            operators: vec![k],
            weights: vec![1.0],
        };
        assert!(kraus_condition_check(&set, 1e-8, DEFAULT_COND_LIMIT).holds);
    }

    #[test]
    fn singular_operator_reported_distinctly() {
        let set = KrausSet {
            dim: 2,
            operators: vec![crate::operator::ket_bra(2, 0, 1)],
            weights: vec![1.0],
        };
        let r = kraus_condition_check(&set, 1e-8, DEFAULT_COND_LIMIT);
        assert!(matches!(r.failures[0], KrausClause::Singular { index: 0, .. }));
    }

    #[test]
    fn non_cp_map_rejected() {
        assert!(matches!(
            kraus_extract(&choi(&transpose_map(2)), DEFAULT_EPS_K),
            Err(Error::NotCompletelyPositive { .. })
        ));
    }
}
