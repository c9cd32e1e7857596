// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

//! Two-time operator functions and the GKSL-like kernel built from them.

mod function;
mod gksl;
mod profile;

pub use function::{OperatorFunctionDoc, Term, TermDoc, TwoTimeOperatorFunction};
pub use gksl::{
    GKSLKernel, KernelDoc, KernelSplit, Part, PartKernel, SuperKernel, DEFAULT_CHECK_HORIZON,
    HERMITIAN_TOL,
};
pub use profile::{Factor, ScalarProfile, Tabulated};
