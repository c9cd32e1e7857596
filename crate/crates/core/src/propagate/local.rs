// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

//! Time-local equations `dΛ/dt = G_t Λ_t` with `G_t = ∫₀ᵗ 𝓚(t,t') dt'`.
//!
//! The `t'` integral uses the composite trapezoid rule on the half-step
//! lattice `k·h/2`, so the generator is available at every node and at every
//! midpoint required by the classical fourth-order Runge–Kutta step.

use rayon::prelude::*;

use super::grid::TimeGrid;
use super::trajectory::{Family, MapTrajectory};
use crate::kernel::SuperKernel;
use crate::operator::{frobenius, CMatrix, Superop, C64};

/// Trapezoid approximation of `∫₀ᵗ f(s) ds` with panel width `hq`, where
/// `t = panels·hq`.
pub(crate) fn trapezoid<F>(panels: usize, hq: f64, rows: usize, cols: usize, f: F) -> CMatrix
where
    F: Fn(f64) -> CMatrix,
{
    let mut acc = CMatrix::zeros(rows, cols);
    if panels == 0 {
        return acc;
    }
    for j in 0..=panels {
        let w = if j == 0 || j == panels { 0.5 } else { 1.0 };
        acc += f(j as f64 * hq) * C64::new(w * hq, 0.0);
    }
    acc
}

/// `G_t` on the half-step lattice: entry `k` is the generator at `k·h/2`.
pub(crate) fn generator_table(kernel: &dyn SuperKernel, grid: &TimeGrid) -> Vec<CMatrix> {
    let hq = grid.step() / 2.0;
    let big = kernel.dim() * kernel.dim();
    if kernel.is_convolution() {
        // Same trapezoid sums, accumulated over the lag.
        let lags: Vec<CMatrix> = (0..=2 * grid.steps)
            .into_par_iter()
            .map(|k| kernel.eval(k as f64 * hq, 0.0))
            .collect();
        let mut out = Vec::with_capacity(lags.len());
        let mut acc = CMatrix::zeros(big, big);
        out.push(acc.clone());
        for w in lags.windows(2) {
            acc += (&w[0] + &w[1]) * C64::new(0.5 * hq, 0.0);
            out.push(acc.clone());
        }
        return out;
    }
    (0..=2 * grid.steps)
        .into_par_iter()
        .map(|k| {
            let t = k as f64 * hq;
            trapezoid(k, hq, big, big, |s| kernel.eval(t, s))
        })
        .collect()
}

/// `G_t = ∫₀ᵗ 𝓚(t,t') dt'` at the grid node `m`.
pub fn effective_generator(kernel: &dyn SuperKernel, grid: &TimeGrid, m: usize) -> Superop {
    let hq = grid.step() / 2.0;
    let t = grid.node(m);
    let big = kernel.dim() * kernel.dim();
    Superop::new_unchecked(
        kernel.dim(),
        trapezoid(2 * m, hq, big, big, |s| kernel.eval(t, s)),
    )
}

/// Classical RK4 for `dX/dt = A(t)·X` with `A` tabulated on the half-step
/// lattice. Returns `X` at every node.
pub(crate) fn rk4_left(table: &[CMatrix], h: f64, x0: CMatrix) -> Vec<CMatrix> {
    let steps = (table.len() - 1) / 2;
    let mut out = Vec::with_capacity(steps + 1);
    let mut x = x0;
    out.push(x.clone());
    let c = |s: f64| C64::new(s, 0.0);
    for m in 0..steps {
        let (a0, am, a1) = (&table[2 * m], &table[2 * m + 1], &table[2 * m + 2]);
        let k1 = a0 * &x;
        let k2 = am * (&x + &k1 * c(h / 2.0));
        let k3 = am * (&x + &k2 * c(h / 2.0));
        let k4 = a1 * (&x + &k3 * c(h));
        x += (k1 + (k2 + k3) * c(2.0) + k4) * c(h / 6.0);
        out.push(x.clone());
    }
    out
}

/// Same as [`rk4_left`] for `dX/dt = X·A(t)`.
pub(crate) fn rk4_right(table: &[CMatrix], h: f64, x0: CMatrix) -> Vec<CMatrix> {
    let steps = (table.len() - 1) / 2;
    let mut out = Vec::with_capacity(steps + 1);
    let mut x = x0;
    out.push(x.clone());
    let c = |s: f64| C64::new(s, 0.0);
    for m in 0..steps {
        let (a0, am, a1) = (&table[2 * m], &table[2 * m + 1], &table[2 * m + 2]);
        let k1 = &x * a0;
        let k2 = (&x + &k1 * c(h / 2.0)) * am;
        let k3 = (&x + &k2 * c(h / 2.0)) * am;
        let k4 = (&x + &k3 * c(h)) * a1;
        x += (k1 + (k2 + k3) * c(2.0) + k4) * c(h / 6.0);
        out.push(x.clone());
    }
    out
}

pub(crate) fn step_size_warning(table: &[CMatrix], h: f64) -> Option<String> {
    let last = table.last().map(frobenius).unwrap_or(0.0);
    (h * last > 1.0).then(|| {
        format!("step size too coarse: h·‖G_T‖ = {:.3} exceeds 1", h * last)
    })
}

/// Integrates the time-local equation driven by `kernel` from `Λ₀ = 𝟙`.
pub fn solve_local_with(kernel: &dyn SuperKernel, grid: &TimeGrid, family: Family) -> MapTrajectory {
    let big = kernel.dim() * kernel.dim();
    let table = generator_table(kernel, grid);
    let maps = rk4_left(&table, grid.step(), CMatrix::identity(big, big));
    let mut traj = MapTrajectory::new(*grid, kernel.dim(), family, maps);
    traj.warnings.extend(step_size_warning(&table, grid.step()));
    traj
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{GKSLKernel, Part, ScalarProfile, TwoTimeOperatorFunction};
    use crate::operator::{identity, ket_bra, sigma_z, C64};

    fn exp_dephasing() -> GKSLKernel {
        GKSLKernel::new(
            TwoTimeOperatorFunction::zero(2),
            vec![TwoTimeOperatorFunction::single(
                ScalarProfile::Exponential { kappa: 1.0 },
                sigma_z(),
            )],
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn generator_vanishes_at_zero() {
        let k = exp_dephasing();
        let split = k.split();
        let g = effective_generator(&split.part(Part::Full), &TimeGrid::default(), 0);
        assert_eq!(g.frobenius(), 0.0);
    }

    #[test]
    fn generator_exact_for_constant_kernel() {
        let k = GKSLKernel::new(
            TwoTimeOperatorFunction::constant(sigma_z() * C64::new(0.3, 0.0)),
            vec![TwoTimeOperatorFunction::constant(ket_bra(2, 0, 1))],
            1.0,
        )
        .unwrap();
        let split = k.split();
        let grid = TimeGrid::new(2.0, 40).unwrap();
        let g = effective_generator(&split.part(Part::Full), &grid, 25);
        let expect = Superop::new_unchecked(2, split.full(0.0, 0.0)).scale(C64::new(grid.node(25), 0.0));
        assert!(g.distance(&expect) < 1e-13);
    }

    #[test]
    fn dephasing_rate_converges_at_second_order() {
        // Coherence entry of G_t is -2γ(t) with γ(t) = (1 - e^{-2t})/2.
        let k = exp_dephasing();
        let split = k.split();
        let t = 1.0;
        let exact = -(1.0 - (-2.0f64 * t).exp());
        let err = |steps: usize| {
            let grid = TimeGrid::new(2.0, steps).unwrap();
            let g = effective_generator(&split.part(Part::Full), &grid, steps / 2);
            let coh = g.apply(&ket_bra(2, 0, 1))[(0, 1)];
            (coh.re - exact).abs()
        };
        let (e1, e2) = (err(40), err(80));
        assert!(e1 < 1e-3);
        let order = (e1 / e2).log2();
        assert!((order - 2.0).abs() < 0.05, "order {order}");
    }

    #[test]
    fn rk4_scalar_order_four() {
        // dx/dt = t x, x(1) = e^{1/2}
        let run = |steps: usize| {
            let h = 1.0 / steps as f64;
            let table: Vec<_> = (0..=2 * steps)
                .map(|k| CMatrix::from_element(1, 1, C64::new(k as f64 * h / 2.0, 0.0)))
                .collect();
            let out = rk4_left(&table, h, identity(1));
            (out[steps][(0, 0)].re - 0.5f64.exp()).abs()
        };
        let order = (run(20) / run(40)).log2();
        assert!(order > 3.8, "order {order}");
    }

    struct TwoTime<'a>(&'a dyn SuperKernel);

    impl SuperKernel for TwoTime<'_> {
        fn dim(&self) -> usize {
            self.0.dim()
        }
        fn eval(&self, t: f64, tp: f64) -> CMatrix {
            self.0.eval(t, tp)
        }
    }

    #[test]
    fn lag_accumulation_matches_direct_table() {
        let k = exp_dephasing();
        let split = k.split();
        let part = split.part(Part::Full);
        assert!(part.is_convolution());
        let grid = TimeGrid::new(1.5, 60).unwrap();
        let fast = generator_table(&part, &grid);
        let slow = generator_table(&TwoTime(&part), &grid);
        for (a, b) in fast.iter().zip(&slow) {
            assert!(frobenius(&(a - b)) < 1e-13);
        }
    }
}
