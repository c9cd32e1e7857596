// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

//! Coupling-strength scans, correlation-function kernels and the
//! convolution special case.

mod convolution;
mod gscan;
mod redfield;

pub use convolution::{convolution_case, ConvolutionReport, ZKrausNode, KRAUS_CONDITION_TOL};
pub use gscan::{fit_line, g_scan, log_spaced, GScanPoint, GScanResult};
pub use redfield::{redfield_kernel, RedfieldDoc, RedfieldModel};
