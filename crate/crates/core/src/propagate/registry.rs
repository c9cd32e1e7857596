// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::grid::TimeGrid;
use super::series::{Locality, DEFAULT_ORDER};
use super::trajectory::{Family, MapTrajectory};
use super::TransformInner;
use crate::error::{Error, Result};
use crate::kernel::{KernelSplit, Part};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveOptions {
    /// Truncation order for series families.
    pub order: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            order: DEFAULT_ORDER,
        }
    }
}

/// One solution strategy for the map `Λ_t`.
pub trait Propagator: Send + Sync {
    fn name(&self) -> &'static str;
    fn family(&self) -> Family;
    fn describe(&self) -> &'static str;
    fn propagate(
        &self,
        split: &KernelSplit,
        grid: &TimeGrid,
        options: &SolveOptions,
    ) -> Result<MapTrajectory>;
}

struct Local(Part);
struct Nonlocal(Part);
struct Series(Locality);
struct Transform;
struct WeakZ;
struct Weak;

impl Propagator for Local {
    fn name(&self) -> &'static str {
        self.family().as_str()
    }
    fn family(&self) -> Family {
        super::local_family(self.0)
    }
    fn describe(&self) -> &'static str {
        match self.0 {
            Part::Full => "time-local equation, full kernel (RK4)",
            Part::B => "time-local equation, sandwich part only (RK4)",
            Part::Z => "time-local equation, anticommutator part only (RK4)",
        }
    }
    fn propagate(&self, split: &KernelSplit, grid: &TimeGrid, _: &SolveOptions) -> Result<MapTrajectory> {
        super::solve_local_part(split, grid, self.0)
    }
}

impl Propagator for Nonlocal {
    fn name(&self) -> &'static str {
        self.family().as_str()
    }
    fn family(&self) -> Family {
        super::nonlocal_family(self.0)
    }
    fn describe(&self) -> &'static str {
        match self.0 {
            Part::Full => "memory equation, full kernel (Volterra march)",
            Part::B => "memory equation, sandwich part only (Volterra march)",
            Part::Z => "memory equation, anticommutator part only (Volterra march)",
        }
    }
    fn propagate(&self, split: &KernelSplit, grid: &TimeGrid, _: &SolveOptions) -> Result<MapTrajectory> {
        super::solve_nonlocal(split, grid, self.0)
    }
}

impl Propagator for Series {
    fn name(&self) -> &'static str {
        self.family().as_str()
    }
    fn family(&self) -> Family {
        match self.0 {
            Locality::Local => Family::SeriesLocalB,
            Locality::Nonlocal => Family::SeriesNonlocalB,
        }
    }
    fn describe(&self) -> &'static str {
        match self.0 {
            Locality::Local => "iterated-integral series, local nesting",
            Locality::Nonlocal => "iterated-integral series, time-ordered nesting",
        }
    }
    fn propagate(&self, split: &KernelSplit, grid: &TimeGrid, o: &SolveOptions) -> Result<MapTrajectory> {
        super::series_b(split, grid, o.order, self.0)
    }
}

impl Propagator for Transform {
    fn name(&self) -> &'static str {
        "series-local-full"
    }
    fn family(&self) -> Family {
        Family::SeriesLocalFull
    }
    fn describe(&self) -> &'static str {
        "time-local full map via the V-similarity transform"
    }
    fn propagate(&self, split: &KernelSplit, grid: &TimeGrid, _: &SolveOptions) -> Result<MapTrajectory> {
        super::solve_local_full_via_transform(split, grid, TransformInner::Ode)
    }
}

impl Propagator for WeakZ {
    fn name(&self) -> &'static str {
        "weak-local-Z"
    }
    fn family(&self) -> Family {
        Family::WeakLocalZ
    }
    fn describe(&self) -> &'static str {
        "anticommutator part as V ρ V†"
    }
    fn propagate(&self, split: &KernelSplit, grid: &TimeGrid, _: &SolveOptions) -> Result<MapTrajectory> {
        super::weak_local_z(split, grid)
    }
}

impl Propagator for Weak {
    fn name(&self) -> &'static str {
        "weak-nonlocal-full"
    }
    fn family(&self) -> Family {
        Family::WeakNonlocalFull
    }
    fn describe(&self) -> &'static str {
        "weak-coupling localized memory equation"
    }
    fn propagate(&self, split: &KernelSplit, grid: &TimeGrid, _: &SolveOptions) -> Result<MapTrajectory> {
        super::weak_coupling_localize(split, grid)
    }
}

/// Name → strategy table.
pub struct Registry {
    entries: Vec<Box<dyn Propagator>>,
    aliases: Vec<(&'static str, &'static str)>,
}

impl Registry {
    pub fn empty() -> Self {
        Self {
            entries: Vec::new(),
            aliases: Vec::new(),
        }
    }

    /// Every built-in family, plus the short aliases `series`, `transform`
    /// and `weak`.
    pub fn standard() -> Self {
        let mut r = Self::empty();
        for part in [Part::Full, Part::B, Part::Z] {
            r.register(Box::new(Local(part)));
        }
        for part in [Part::Full, Part::B, Part::Z] {
            r.register(Box::new(Nonlocal(part)));
        }
        r.register(Box::new(Series(Locality::Local)));
        r.register(Box::new(Series(Locality::Nonlocal)));
        r.register(Box::new(Transform));
        r.register(Box::new(WeakZ));
        r.register(Box::new(Weak));
        r.alias("series", "series-local-B");
        r.alias("transform", "series-local-full");
        r.alias("weak", "weak-nonlocal-full");
        r
    }

    /// Adds a strategy; a later registration under the same name wins.
    pub fn register(&mut self, p: Box<dyn Propagator>) {
        self.entries.retain(|e| e.name() != p.name());
        self.entries.push(p);
    }

    pub fn alias(&mut self, alias: &'static str, target: &'static str) {
        self.aliases.push((alias, target));
    }

    pub fn get(&self, name: &str) -> Result<&dyn Propagator> {
        let target = self
            .aliases
            .iter()
            .find(|(a, _)| *a == name)
            .map(|(_, t)| *t)
            .unwrap_or(name);
        self.entries
            .iter()
            .find(|e| e.name() == target)
            .map(|e| e.as_ref())
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown solver family \"{name}\"; expected one of {}",
                    self.names().join(", ")
                ))
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        let mut out: Vec<_> = self.entries.iter().map(|e| e.name()).collect();
        out.extend(self.aliases.iter().map(|(a, _)| *a));
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Propagator> {
        self.entries.iter().map(|e| e.as_ref())
    }
}

impl Default for Registry {
    fn default() -> Self {
        Self::standard()
    }
}
