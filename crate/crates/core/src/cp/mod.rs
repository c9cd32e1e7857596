// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

//! Complete-positivity certification of dynamical maps.

mod choi;
mod counterexample;
mod divisibility;
mod kraus;
mod report;
mod wcond;

pub use choi::{
    choi, cp_check, max_entangled, measure, measure_sample, superop_from_choi, transpose_map,
    ChoiMatrix, CpVerdict, MeasureSample, DEFAULT_SEED,
};
pub use counterexample::{
    search as counterexample_search, z_counterexample, CounterexampleReport, PhaseRule, Witness,
    AMPLITUDE_POINTS,
};
pub use divisibility::{divisibility_check, IntervalStatus, IntervalVerdict};
pub use kraus::{
    condition_number, kraus_condition_check, kraus_extract, KrausClause, KrausConditionReport,
    KrausSet, DEFAULT_COND_LIMIT, DEFAULT_EPS_CP, DEFAULT_EPS_K,
};
pub use report::{certify, CertifyOptions, ChoiWitness, CpReport, NodeReport};
pub use wcond::{
    resolve_sign_convention, w_strict_condition_check, SignConvention, SignResolution,
    WConditionReport,
};
