// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

//! Trapezoidal predictor–corrector march for
//! `dΛ/dt = ∫₀ᵗ 𝓚(t,t')Λ_{t'} dt' + G_t Λ_t`.

use rayon::prelude::*;

use super::grid::TimeGrid;
use super::trajectory::{Family, MapTrajectory};
use crate::kernel::SuperKernel;
use crate::operator::{CMatrix, C64};

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Memory kernel sampled on node pairs `(m, j)`, `j ≤ m`.
pub(crate) type NodeKernel<'a> = dyn Fn(usize, usize) -> CMatrix + Sync + 'a;

/// Marches the Volterra equation over `steps` nodes of width `h` from
/// `Λ₀ = 𝟙`. `local`, when present, is the node-indexed time-local generator.
///
/// Each step is Heun's method: explicit Euler predictor, trapezoidal corrector.
/// The memory integral at node `m` uses trapezoid weights over `t_0..t_m`.
pub(crate) fn march(
    big: usize,
    steps: usize,
    h: f64,
    memory: &NodeKernel<'_>,
    local: Option<&[CMatrix]>,
) -> Vec<CMatrix> {
    let mut maps: Vec<CMatrix> = Vec::with_capacity(steps + 1);
    maps.push(CMatrix::identity(big, big));
    let local_at = |m: usize, x: &CMatrix| -> CMatrix {
        match local {
            Some(g) => &g[m] * x,
            None => CMatrix::zeros(big, big),
        }
    };
    // F_0: the memory integral is empty at t = 0.
    let mut f_prev = local_at(0, &maps[0]);
    for m in 0..steps {
        let next = m + 1;
        // History part of the memory integral at t_{m+1}, all nodes j ≤ m.
        let terms: Vec<CMatrix> = (0..=m)
            .into_par_iter()
            .map(|j| {
                let w = if j == 0 { 0.5 * h } else { h };
                memory(next, j) * &maps[j] * re(w)
            })
            .collect();
        let mut history = CMatrix::zeros(big, big);
        for t in &terms {
            history += t;
        }
        let k_diag = memory(next, next) * re(0.5 * h);
        let rhs = |x: &CMatrix| -> CMatrix { &history + &k_diag * x + local_at(next, x) };

        let predicted = &maps[m] + &f_prev * re(h);
        let f_pred = rhs(&predicted);
        let corrected = &maps[m] + (&f_prev + &f_pred) * re(0.5 * h);
        f_prev = rhs(&corrected);
        maps.push(corrected);
    }
    maps
}

/// Node-pair samples of a superoperator kernel. Convolution kernels are
/// evaluated once per lag.
pub(crate) fn node_kernel<'a>(
    kernel: &'a dyn SuperKernel,
    grid: &TimeGrid,
) -> Box<NodeKernel<'a>> {
    let grid = *grid;
    if kernel.is_convolution() {
        let lags: Vec<CMatrix> = (0..=grid.steps)
            .into_par_iter()
            .map(|k| kernel.eval(grid.node(k), 0.0))
            .collect();
        Box::new(move |m, j| lags[m - j].clone())
    } else {
        Box::new(move |m, j| kernel.eval(grid.node(m), grid.node(j)))
    }
}

/// Node-pair samples without the lag cache, for cross-checks.
pub(crate) fn node_kernel_general<'a>(
    kernel: &'a dyn SuperKernel,
    grid: &TimeGrid,
) -> Box<NodeKernel<'a>> {
    let grid = *grid;
    Box::new(move |m, j| kernel.eval(grid.node(m), grid.node(j)))
}

pub fn solve_nonlocal_with(
    kernel: &dyn SuperKernel,
    grid: &TimeGrid,
    family: Family,
) -> MapTrajectory {
    let big = kernel.dim() * kernel.dim();
    let memory = node_kernel(kernel, grid);
    let maps = march(big, grid.steps, grid.step(), memory.as_ref(), None);
    MapTrajectory::new(*grid, kernel.dim(), family, maps)
}
