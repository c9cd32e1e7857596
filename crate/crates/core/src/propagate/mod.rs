// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

//! Solvers for the time-local and time-non-local equations and their
//! sandwich-only / anticommutator-only companions.
//!
//! Every solver takes a [`KernelSplit`] so problems given directly by `W`
//! run through the same code as full kernels.

pub mod grid;
mod local;
mod oexp;
mod registry;
mod series;
pub mod trajectory;
mod volterra;

use rayon::prelude::*;

pub use grid::TimeGrid;
pub use oexp::OrderedExponential;
pub use registry::{Propagator, Registry, SolveOptions};
pub use series::{sandwich_series_oracle, Locality, DEFAULT_ORDER};
pub use trajectory::{Family, MapTrajectory, NodeMap, TrajectoryDoc, TRAJECTORY_FORMAT};

use crate::error::{Error, Result};
use crate::kernel::{KernelSplit, Part, TwoTimeOperatorFunction};
use crate::operator::{conj_kron, CMatrix, Superop};

fn checked(traj: MapTrajectory) -> Result<MapTrajectory> {
    for (m, map) in traj.maps.iter().enumerate() {
        if map.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Solver(format!(
                "{} solution diverged at t = {}",
                traj.family,
                traj.grid.node(m)
            )));
        }
    }
    Ok(traj)
}

fn node_index(grid: &TimeGrid, t: f64) -> Result<usize> {
    let x = t / grid.step();
    let m = x.round();
    if !(0.0..=grid.steps as f64).contains(&m) || (x - m).abs() > 1e-9 * grid.steps.max(1) as f64 {
        return Err(Error::InvalidArgument(format!("t = {t} is not a grid node")));
    }
    Ok(m as usize)
}

/// `G_t = ∫₀ᵗ 𝓚(t,t') dt'` for the full kernel at a grid node.
pub fn effective_generator(split: &KernelSplit, t: f64, grid: &TimeGrid) -> Result<Superop> {
    let m = node_index(grid, t)?;
    Ok(local::effective_generator(&split.part(Part::Full), grid, m))
}

fn local_family(part: Part) -> Family {
    match part {
        Part::Full => Family::LocalFull,
        Part::B => Family::LocalB,
        Part::Z => Family::LocalZ,
    }
}

fn nonlocal_family(part: Part) -> Family {
    match part {
        Part::Full => Family::NonlocalFull,
        Part::B => Family::NonlocalB,
        Part::Z => Family::NonlocalZ,
    }
}

/// `dΛ/dt = (∫₀ᵗ 𝓚_{t,t'} dt') Λ_t` driven by the selected part.
pub fn solve_local_part(split: &KernelSplit, grid: &TimeGrid, part: Part) -> Result<MapTrajectory> {
    checked(local::solve_local_with(&split.part(part), grid, local_family(part)))
}

pub fn solve_local(split: &KernelSplit, grid: &TimeGrid) -> Result<MapTrajectory> {
    solve_local_part(split, grid, Part::Full)
}

pub fn solve_local_b(split: &KernelSplit, grid: &TimeGrid) -> Result<MapTrajectory> {
    solve_local_part(split, grid, Part::B)
}

pub fn solve_local_z(split: &KernelSplit, grid: &TimeGrid) -> Result<MapTrajectory> {
    solve_local_part(split, grid, Part::Z)
}

/// `dΛ/dt = ∫₀ᵗ 𝓚_{t,t'} Λ_{t'} dt'` driven by the selected part.
pub fn solve_nonlocal(split: &KernelSplit, grid: &TimeGrid, part: Part) -> Result<MapTrajectory> {
    checked(volterra::solve_nonlocal_with(
        &split.part(part),
        grid,
        nonlocal_family(part),
    ))
}

/// [`solve_nonlocal`] evaluating every node pair `(t_m, t_j)` directly, even
/// for convolution kernels.
pub fn solve_nonlocal_two_time(
    split: &KernelSplit,
    grid: &TimeGrid,
    part: Part,
) -> Result<MapTrajectory> {
    let kernel = split.part(part);
    let big = split.dim() * split.dim();
    let memory = volterra::node_kernel_general(&kernel, grid);
    let maps = volterra::march(big, grid.steps, grid.step(), memory.as_ref(), None);
    checked(MapTrajectory::new(
        *grid,
        split.dim(),
        nonlocal_family(part),
        maps,
    ))
}

/// Truncated iterated-integral series of the sandwich-only equation.
pub fn series_b(
    split: &KernelSplit,
    grid: &TimeGrid,
    order: usize,
    locality: Locality,
) -> Result<MapTrajectory> {
    if order == 0 {
        return Err(Error::InvalidArgument("series order must be at least 1".into()));
    }
    let kernel = split.part(Part::B);
    let big = split.dim() * split.dim();
    let terms = match locality {
        Locality::Local => {
            let table = local::generator_table(&kernel, grid);
            let nodes: Vec<CMatrix> = table.into_iter().step_by(2).collect();
            series::series_terms(big, grid, order, locality, Some(&nodes), None)
        }
        Locality::Nonlocal => {
            let memory = volterra::node_kernel(&kernel, grid);
            series::series_terms(big, grid, order, locality, None, Some(memory.as_ref()))
        }
    };
    let family = match locality {
        Locality::Local => Family::SeriesLocalB,
        Locality::Nonlocal => Family::SeriesNonlocalB,
    };
    checked(series::assemble(&terms, grid, split.dim(), family))
}

/// `V_t` and `V_t⁻¹` generated by the `W` operator of the split.
pub fn ordered_exponential(w: &TwoTimeOperatorFunction, grid: &TimeGrid) -> OrderedExponential {
    oexp::ordered_exponential(w, grid)
}

/// How the transformed sandwich-only equation is solved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformInner {
    /// Fourth-order one-step integration.
    Ode,
    /// Local-pattern series truncated at the given order.
    Series(usize),
}

/// Time-local full solution as `Λ_t = V_t (Λ̂_t ·) V_t†`, where `Λ̂` solves
/// the sandwich-only equation with `L̂_{t,s} = V_t⁻¹ L_{t,s} V_t`.
pub fn solve_local_full_via_transform(
    split: &KernelSplit,
    grid: &TimeGrid,
    inner: TransformInner,
) -> Result<MapTrajectory> {
    let d = split.dim();
    let big = d * d;
    let oe = oexp::ordered_exponential(split.w_op(), grid);
    let (v_half, w_half) = oe.half_lattice();
    let hq = grid.step() / 2.0;
    let table: Vec<CMatrix> = (0..=2 * grid.steps)
        .into_par_iter()
        .map(|k| {
            let t = k as f64 * hq;
            local::trapezoid(k, hq, big, big, |s| {
                let mut acc = CMatrix::zeros(big, big);
                for l in split.lindblad() {
                    acc += conj_kron(&(&w_half[k] * l.eval(t, s) * &v_half[k]));
                }
                acc
            })
        })
        .collect();
    let hat = match inner {
        TransformInner::Ode => local::rk4_left(&table, grid.step(), CMatrix::identity(big, big)),
        TransformInner::Series(order) => {
            let nodes: Vec<CMatrix> = table.iter().step_by(2).cloned().collect();
            let terms =
                series::series_terms(big, grid, order, Locality::Local, Some(&nodes), None);
            series::assemble(&terms, grid, d, Family::SeriesLocalFull).maps
        }
    };
    let maps = hat
        .iter()
        .zip(&oe.v)
        .map(|(x, v)| conj_kron(v) * x)
        .collect();
    let mut traj = MapTrajectory::new(*grid, d, Family::SeriesLocalFull, maps);
    traj.warnings
        .extend(local::step_size_warning(&table, grid.step()));
    checked(traj)
}

/// The anticommutator-only map in the localized form, `ρ ↦ V_t ρ V_t†`.
pub fn weak_local_z(split: &KernelSplit, grid: &TimeGrid) -> Result<MapTrajectory> {
    let oe = oexp::ordered_exponential(split.w_op(), grid);
    let maps = oe.v.iter().map(conj_kron).collect();
    checked(MapTrajectory::new(*grid, split.dim(), Family::WeakLocalZ, maps))
}

/// Weak-coupling localization: the `W` terms act on `Λ_t`, the sandwich term
/// keeps `Λ_{t'}`. Solved as `Λ_t = 𝒱_t Λ̄_t` where `Λ̄` obeys the
/// sandwich-only non-local equation with `L̄_{t,s} = V_t⁻¹ L_{t,s} V_s`.
pub fn weak_coupling_localize(split: &KernelSplit, grid: &TimeGrid) -> Result<MapTrajectory> {
    let d = split.dim();
    let big = d * d;
    let oe = oexp::ordered_exponential(split.w_op(), grid);
    let g = *grid;
    let (v, vinv) = (&oe.v, &oe.vinv);
    let memory = move |m: usize, j: usize| {
        let (t, s) = (g.node(m), g.node(j));
        let mut acc = CMatrix::zeros(big, big);
        for l in split.lindblad() {
            acc += conj_kron(&(&vinv[m] * l.eval(t, s) * &v[j]));
        }
        acc
    };
    let bar = volterra::march(big, grid.steps, grid.step(), &memory, None);
    let maps = bar
        .iter()
        .zip(v)
        .map(|(x, v)| conj_kron(v) * x)
        .collect();
    checked(MapTrajectory::new(*grid, d, Family::WeakNonlocalFull, maps))
}

/// The same localized equation marched directly, with `−∫₀ᵗ 𝓩_{t,s} ds` as a
/// time-local term. Used to cross-check [`weak_coupling_localize`].
pub fn weak_coupling_direct(split: &KernelSplit, grid: &TimeGrid) -> Result<MapTrajectory> {
    let big = split.dim() * split.dim();
    let b = split.part(Part::B);
    let memory = volterra::node_kernel(&b, grid);
    let gz: Vec<CMatrix> = local::generator_table(&split.part(Part::Z), grid)
        .into_iter()
        .step_by(2)
        .collect();
    let maps = volterra::march(big, grid.steps, grid.step(), memory.as_ref(), Some(&gz));
    checked(MapTrajectory::new(
        *grid,
        split.dim(),
        Family::WeakNonlocalFull,
        maps,
    ))
}
