// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{GKSLKernel, ScalarProfile, TwoTimeOperatorFunction, HERMITIAN_TOL};
use crate::operator::{hermitian_asymmetry, hermitian_eig, ket_bra, CMatrix, MatrixDoc, C64};

/// A system coupled through `gS⊗B` to a bath summarized by its correlation
/// function `C(τ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RedfieldModel {
    pub h_s: CMatrix,
    pub s: CMatrix,
    pub correlation: ScalarProfile,
    pub coupling: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RedfieldDoc {
    pub h_s: MatrixDoc,
    pub s: MatrixDoc,
    pub correlation: ScalarProfile,
    #[serde(default = "one")]
    pub coupling_g: f64,
}

fn one() -> f64 {
    1.0
}

impl RedfieldModel {
    /// `H_S = (ω/2)σ_z`, `S = σ_x`, `C(τ) = e^{−κτ}`.
    pub fn qubit(omega: f64, kappa: f64, coupling: f64) -> Self {
        Self {
            h_s: crate::operator::sigma_z() * C64::new(omega / 2.0, 0.0),
            s: crate::operator::sigma_x(),
            correlation: ScalarProfile::Exponential { kappa },
            coupling,
        }
    }

    pub fn from_doc(doc: &RedfieldDoc) -> Result<Self> {
        let h_s = doc.h_s.to_matrix()?;
        let s = doc.s.to_matrix()?;
        doc.correlation.validate("correlation")?;
        let m = Self {
            h_s,
            s,
            correlation: doc.correlation.clone(),
            coupling: doc.coupling_g,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.h_s.nrows();
        crate::operator::check_dim(d)?;
        if self.s.nrows() != d || self.s.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: self.s.nrows().max(self.s.ncols()),
            });
        }
        let asym = hermitian_asymmetry(&self.h_s);
        if asym > HERMITIAN_TOL {
            return Err(Error::schema("h_s", format!("not Hermitian (asymmetry {asym:.3e})")));
        }
        let c0 = self.correlation.eval(0.0, 0.0);
        if c0.im.abs() > 1e-12 || c0.re < 0.0 {
            return Err(Error::schema("correlation", format!("C(0) = {c0} is not real and non-negative")));
        }
        if !(self.coupling.is_finite() && self.coupling >= 0.0) {
            return Err(Error::schema("coupling_g", "must be finite and non-negative"));
        }
        Ok(())
    }
}

/// The memory kernel with `H' = 0` and one Lindblad family
/// `L(t,t') = C(τ)·S^I(−τ)`, `τ = t − t'`, expanded over the eigenoperators
/// of `H_S`: `S^I(−τ) = Σⱼₖ e^{−i(Eⱼ−Eₖ)τ} ⟨j|S|k⟩ |j⟩⟨k|`.
pub fn redfield_kernel(model: &RedfieldModel) -> Result<GKSLKernel> {
    model.validate()?;
    let d = model.h_s.nrows();
    let e = hermitian_eig(&model.h_s)?;
    let u = &e.eigenvectors;
    let s_eig = u.adjoint() * &model.s * u;
    let mut l = TwoTimeOperatorFunction::zero(d);
    // Group eigenoperators with equal Bohr frequency.
    let mut groups: Vec<(f64, CMatrix)> = Vec::new();
    for j in 0..d {
        for k in 0..d {
            let sjk = s_eig[(j, k)];
            if sjk.norm() == 0.0 {
                continue;
            }
            let omega = e.eigenvalues[j] - e.eigenvalues[k];
            let op = u * ket_bra(d, j, k) * u.adjoint() * sjk;
            match groups.iter_mut().find(|(w, _)| (w - omega).abs() < 1e-12) {
                Some((_, acc)) => *acc += op,
                None => groups.push((omega, op)),
            }
        }
    }
    for (omega, op) in groups {
        let profile = if omega == 0.0 {
            model.correlation.clone()
        } else {
            ScalarProfile::Product {
                factors: vec![
                    model.correlation.clone(),
                    ScalarProfile::Oscillatory { omega: -omega },
                ],
            }
        };
        l.push(profile, op);
    }
    GKSLKernel::new(TwoTimeOperatorFunction::zero(d), vec![l], model.coupling)
}
