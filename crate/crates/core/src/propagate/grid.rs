// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform grid `t_m = m·T/M`, `m = 0..=M`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub horizon: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(horizon: f64, steps: usize) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        if steps == 0 {
            return Err(Error::InvalidArgument("steps must be at least 1".into()));
        }
        Ok(Self { horizon, steps })
    }

    pub fn step(&self) -> f64 {
        self.horizon / self.steps as f64
    }

    pub fn node(&self, m: usize) -> f64 {
        if m == self.steps {
            self.horizon
        } else {
            m as f64 * self.step()
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.steps).map(|m| self.node(m))
    }

    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn refined(&self, factor: usize) -> Self {
        Self {
            horizon: self.horizon,
            steps: self.steps * factor,
        }
    }
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            horizon: 2.0,
            steps: 400,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_exact() {
        let g = TimeGrid::new(2.0, 3).unwrap();
        assert_eq!(g.node(0), 0.0);
        assert_eq!(g.node(3), 2.0);
        assert_eq!(g.nodes().count(), 4);
        assert!(TimeGrid::new(0.0, 3).is_err());
        assert!(TimeGrid::new(1.0, 0).is_err());
    }
}
