// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

//! Scalar two-time profiles `p(t, t')`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::C64;

fn unit() -> [f64; 2] {
    [1.0, 0.0]
}

/// A single-variable function, used as a factor of a separable profile.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Factor {
    Constant {
        #[serde(default = "unit")]
        value: [f64; 2],
    },
    /// `e^{−κ s}`
    Exponential { kappa: f64 },
    /// `e^{iω s}`
    Oscillatory { omega: f64 },
    /// `e^{−(s/τ)²}`
    Gaussian { tau: f64 },
}

impl Factor {
    pub fn eval(&self, s: f64) -> C64 {
        match *self {
            Factor::Constant { value: [re, im] } => C64::new(re, im),
            Factor::Exponential { kappa } => C64::new((-kappa * s).exp(), 0.0),
            Factor::Oscillatory { omega } => C64::from_polar(1.0, omega * s),
            Factor::Gaussian { tau } => C64::new((-(s / tau).powi(2)).exp(), 0.0),
        }
    }

    fn validate(&self, field: &str) -> Result<()> {
        let ok = match *self {
            Factor::Constant { value } => value.iter().all(|x| x.is_finite()),
            Factor::Exponential { kappa } => kappa.is_finite(),
            Factor::Oscillatory { omega } => omega.is_finite(),
            Factor::Gaussian { tau } => tau.is_finite() && tau > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::schema(field, format!("invalid parameters in {self:?}")))
        }
    }

    fn is_real(&self) -> bool {
        match *self {
            Factor::Constant { value } => value[1] == 0.0,
            Factor::Oscillatory { omega } => omega == 0.0,
            _ => true,
        }
    }
}

/// Uniformly sampled `p(t, t')` on `[0, horizon]²`, bilinearly interpolated.
/// `values[i][j]` holds `p(i·h, j·h)` as `[re, im]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tabulated {
    pub horizon: f64,
    pub values: Vec<Vec<[f64; 2]>>,
}

impl Tabulated {
    pub fn from_fn(horizon: f64, steps: usize, f: impl Fn(f64, f64) -> C64) -> Self {
        let h = horizon / steps as f64;
        let values = (0..=steps)
            .map(|i| {
                (0..=steps)
                    .map(|j| {
                        let z = f(i as f64 * h, j as f64 * h);
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        Self { horizon, values }
    }

    pub fn steps(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    fn at(&self, i: usize, j: usize) -> C64 {
        let [re, im] = self.values[i][j];
        C64::new(re, im)
    }

    /// Arguments outside `[0, horizon]` are clamped to the boundary.
    pub fn eval(&self, t: f64, tp: f64) -> C64 {
        let n = self.steps();
        let h = self.horizon / n as f64;
        let locate = |x: f64| -> (usize, f64) {
            let u = (x / h).clamp(0.0, n as f64);
            let i = (u.floor() as usize).min(n - 1);
            (i, u - i as f64)
        };
        let (i, a) = locate(t);
        let (j, b) = locate(tp);
        self.at(i, j) * ((1.0 - a) * (1.0 - b))
            + self.at(i + 1, j) * (a * (1.0 - b))
            + self.at(i, j + 1) * ((1.0 - a) * b)
            + self.at(i + 1, j + 1) * (a * b)
    }

    fn validate(&self, field: &str) -> Result<()> {
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::schema(
                format!("{field}.horizon"),
                "must be positive and finite",
            ));
        }
        let rows = self.values.len();
        if rows < 2 {
            return Err(Error::schema(
                format!("{field}.values"),
                "needs at least a 2×2 grid",
            ));
        }
        for (i, row) in self.values.iter().enumerate() {
            if row.len() != rows {
                return Err(Error::schema(
                    format!("{field}.values[{i}]"),
                    format!("expected {rows} samples, found {}", row.len()),
                ));
            }
            if row.iter().flatten().any(|x| !x.is_finite()) {
                return Err(Error::schema(
                    format!("{field}.values[{i}]"),
                    "non-finite sample",
                ));
            }
        }
        Ok(())
    }

    /// True when every sample depends only on `i − j`.
    fn is_toeplitz(&self) -> bool {
        let n = self.values.len();
        (1..n).all(|i| (1..n).all(|j| self.values[i][j] == self.values[i - 1][j - 1]))
    }
}

/// Scalar function of `(t, t')`.
///
/// The lag kinds (`constant`, `exponential`, `oscillatory`, `gaussian`) are
/// functions of `t − t'`. `product` and `conjugate` close the family under
/// the operations needed to express `L†L` terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ScalarProfile {
    Constant {
        #[serde(default = "unit")]
        value: [f64; 2],
    },
    /// `e^{−κ(t−t')}`
    Exponential { kappa: f64 },
    /// `e^{iω(t−t')}`
    Oscillatory { omega: f64 },
    /// `e^{−((t−t')/τ)²}`
    Gaussian { tau: f64 },
    /// `f(t)·g(t')`
    Separable { f: Factor, g: Factor },
    Tabulated(Tabulated),
    Product { factors: Vec<ScalarProfile> },
    Conjugate { of: Box<ScalarProfile> },
}

impl ScalarProfile {
    pub fn constant(value: C64) -> Self {
        ScalarProfile::Constant {
            value: [value.re, value.im],
        }
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    fn lag_factor(&self) -> Option<Factor> {
        Some(match *self {
            ScalarProfile::Constant { value } => Factor::Constant { value },
            ScalarProfile::Exponential { kappa } => Factor::Exponential { kappa },
            ScalarProfile::Oscillatory { omega } => Factor::Oscillatory { omega },
            ScalarProfile::Gaussian { tau } => Factor::Gaussian { tau },
            _ => return None,
        })
    }

    pub fn eval(&self, t: f64, tp: f64) -> C64 {
        match self {
            ScalarProfile::Constant { value } => C64::new(value[0], value[1]),
            ScalarProfile::Exponential { kappa } => C64::new((-kappa * (t - tp)).exp(), 0.0),
            ScalarProfile::Oscillatory { omega } => C64::from_polar(1.0, omega * (t - tp)),
            ScalarProfile::Gaussian { tau } => C64::new((-((t - tp) / tau).powi(2)).exp(), 0.0),
            ScalarProfile::Separable { f, g } => f.eval(t) * g.eval(tp),
            ScalarProfile::Tabulated(tab) => tab.eval(t, tp),
            ScalarProfile::Product { factors } => factors
                .iter()
                .fold(C64::new(1.0, 0.0), |acc, p| acc * p.eval(t, tp)),
            ScalarProfile::Conjugate { of } => of.eval(t, tp).conj(),
        }
    }

    /// Whether the profile depends on `t − t'` only.
    pub fn is_convolution(&self) -> bool {
        match self {
            ScalarProfile::Separable { f, g } => {
                matches!(f, Factor::Constant { .. }) && matches!(g, Factor::Constant { .. })
            }
            ScalarProfile::Tabulated(tab) => tab.is_toeplitz(),
            ScalarProfile::Product { factors } => factors.iter().all(Self::is_convolution),
            ScalarProfile::Conjugate { of } => of.is_convolution(),
            _ => self.lag_factor().is_some(),
        }
    }

    /// Conservative structural test for real values.
    pub fn is_real(&self) -> bool {
        match self {
            ScalarProfile::Separable { f, g } => f.is_real() && g.is_real(),
            ScalarProfile::Tabulated(tab) => tab.values.iter().flatten().all(|z| z[1] == 0.0),
            ScalarProfile::Product { factors } => factors.iter().all(Self::is_real),
            ScalarProfile::Conjugate { of } => of.is_real(),
            _ => self.lag_factor().is_some_and(|f| f.is_real()),
        }
    }

    /// Smallest horizon over which the profile is defined, if limited.
    pub fn horizon_limit(&self) -> Option<f64> {
        match self {
            ScalarProfile::Tabulated(tab) => Some(tab.horizon),
            ScalarProfile::Product { factors } => factors
                .iter()
                .filter_map(Self::horizon_limit)
                .reduce(f64::min),
            ScalarProfile::Conjugate { of } => of.horizon_limit(),
            _ => None,
        }
    }

    pub fn validate(&self, field: &str) -> Result<()> {
        match self {
            ScalarProfile::Separable { f, g } => {
                f.validate(&format!("{field}.f"))?;
                g.validate(&format!("{field}.g"))
            }
            ScalarProfile::Tabulated(tab) => tab.validate(field),
            ScalarProfile::Product { factors } => {
                if factors.is_empty() {
                    return Err(Error::schema(
                        format!("{field}.factors"),
                        "needs at least one factor",
                    ));
                }
                factors
                    .iter()
                    .enumerate()
                    .try_for_each(|(i, p)| p.validate(&format!("{field}.factors[{i}]")))
            }
            ScalarProfile::Conjugate { of } => of.validate(&format!("{field}.of")),
            _ => self
                .lag_factor()
                .expect("lag kind")
                .validate(field),
        }
    }
}
