// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

//! Numerical tools for GKSL-like master equations with two-time kernels:
//! kernel assembly, time-local and time-non-local propagation, series
//! solutions, and complete-positivity certification.

pub mod corpus;
pub mod cp;
pub mod error;
pub mod experiments;
pub mod kernel;
pub mod operator;
pub mod propagate;

pub use error::{Error, Result};
