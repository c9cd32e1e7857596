// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::profile::ScalarProfile;
use crate::error::{Error, Result};
use crate::operator::{CMatrix, MatrixDoc, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub profile: ScalarProfile,
    pub operator: CMatrix,
}

/// `X(t, t') = Σₖ pₖ(t, t')·Oₖ`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoTimeOperatorFunction {
    dim: usize,
    terms: Vec<Term>,
}

impl TwoTimeOperatorFunction {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: Vec::new(),
        }
    }

    pub fn new(dim: usize, terms: Vec<Term>) -> Result<Self> {
        for term in &terms {
            if term.operator.nrows() != dim || term.operator.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: term.operator.nrows().max(term.operator.ncols()),
                });
            }
        }
        Ok(Self { dim, terms })
    }

    /// `p(t, t')·O` as a one-term function.
    pub fn single(profile: ScalarProfile, operator: CMatrix) -> Self {
        let dim = operator.nrows();
        Self {
            dim,
            terms: vec![Term { profile, operator }],
        }
    }

    pub fn constant(operator: CMatrix) -> Self {
        Self::single(ScalarProfile::one(), operator)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, profile: ScalarProfile, operator: CMatrix) {
        debug_assert_eq!(operator.nrows(), self.dim);
        self.terms.push(Term { profile, operator });
    }

    pub fn eval(&self, t: f64, tp: f64) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for term in &self.terms {
            let c = term.profile.eval(t, tp);
            if c != C64::new(0.0, 0.0) {
                out += &term.operator * c;
            }
        }
        out
    }

    /// Multiplies every operator by `s`.
    pub fn scaled(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    profile: t.profile.clone(),
                    operator: &t.operator * s,
                })
                .collect(),
        }
    }

    /// `X(t,t')†·X(t,t')`, expanded term by term.
    pub fn gram(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for a in &self.terms {
            for b in &self.terms {
                let profile = ScalarProfile::Product {
                    factors: vec![
                        ScalarProfile::Conjugate {
                            of: Box::new(a.profile.clone()),
                        },
                        b.profile.clone(),
                    ],
                };
                out.push(profile, a.operator.adjoint() * &b.operator);
            }
        }
        out
    }

    pub fn extend(&mut self, other: &Self) {
        self.terms.extend(other.terms.iter().cloned());
    }

    pub fn is_convolution(&self) -> bool {
        self.terms.iter().all(|t| t.profile.is_convolution())
    }

    pub fn horizon_limit(&self) -> Option<f64> {
        self.terms
            .iter()
            .filter_map(|t| t.profile.horizon_limit())
            .reduce(f64::min)
    }

    pub fn to_doc(&self) -> Vec<TermDoc> {
        self.terms
            .iter()
            .map(|t| TermDoc {
                profile: t.profile.clone(),
                operator: MatrixDoc::from_matrix(&t.operator),
            })
            .collect()
    }

    pub fn from_doc(dim: usize, docs: &[TermDoc], field: &str) -> Result<Self> {
        let mut terms = Vec::with_capacity(docs.len());
        for (i, doc) in docs.iter().enumerate() {
            let here = format!("{field}[{i}]");
            doc.profile.validate(&format!("{here}.profile"))?;
            if doc.operator.dim != dim {
                return Err(Error::schema(
                    format!("{here}.operator.dim"),
                    format!("expected {dim}, found {}", doc.operator.dim),
                ));
            }
            let operator = doc.operator.to_matrix().map_err(|e| match e {
                Error::Schema { field: f, message } => {
                    Error::schema(format!("{here}.operator.{f}"), message)
                }
                other => other,
            })?;
            terms.push(Term {
                profile: doc.profile.clone(),
                operator,
            });
        }
        Self::new(dim, terms)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub profile: ScalarProfile,
    pub operator: MatrixDoc,
}

/// File form of a stand-alone operator function (used for `W` inputs).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFunctionDoc {
    pub dim: usize,
    pub terms: Vec<TermDoc>,
}

impl OperatorFunctionDoc {
    pub fn parse(text: &str) -> Result<TwoTimeOperatorFunction> {
        let doc: OperatorFunctionDoc = serde_json::from_str(text)?;
        crate::operator::check_dim(doc.dim)?;
        TwoTimeOperatorFunction::from_doc(doc.dim, &doc.terms, "terms")
    }

    pub fn from_function(f: &TwoTimeOperatorFunction) -> Self {
        Self {
            dim: f.dim(),
            terms: f.to_doc(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{frobenius, sigma_minus, sigma_x, sigma_z};

    #[test]
    fn evaluation_is_sum_of_terms() {
        let mut f = TwoTimeOperatorFunction::single(ScalarProfile::Exponential { kappa: 1.0 }, sigma_z());
        f.push(ScalarProfile::one(), sigma_x());
        let v = f.eval(1.0, 0.0);
        let expect = sigma_z() * C64::new((-1.0f64).exp(), 0.0) + sigma_x();
        assert!(frobenius(&(v - expect)) < 1e-15);
    }

    #[test]
    fn gram_matches_direct_product() {
        let mut f = TwoTimeOperatorFunction::single(ScalarProfile::Oscillatory { omega: 0.7 }, sigma_minus());
        f.push(ScalarProfile::Gaussian { tau: 1.3 }, sigma_z() * C64::new(0.2, 0.4));
        let g = f.gram();
        for &(t, tp) in &[(0.5, 0.2), (1.9, 0.0), (2.0, 1.1)] {
            let l = f.eval(t, tp);
            assert!(frobenius(&(g.eval(t, tp) - l.adjoint() * &l)) < 1e-14);
        }
    }

    #[test]
    fn dimension_checked() {
        let term = Term {
            profile: ScalarProfile::one(),
            operator: CMatrix::identity(3, 3),
        };
        assert!(TwoTimeOperatorFunction::new(2, vec![term]).is_err());
    }
}
