// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

//! Chronological exponential `V_t` and its inverse generated by
//! `Ω_t = ∫₀ᵗ W(t,s) ds`.

use rayon::prelude::*;

use super::grid::TimeGrid;
use super::local::{rk4_left, rk4_right, trapezoid};
use crate::kernel::TwoTimeOperatorFunction;
use crate::operator::{frobenius, CMatrix, C64};

#[derive(Clone, Debug)]
pub struct OrderedExponential {
    pub grid: TimeGrid,
    /// `V_{t_m}`, solving `dV/dt = −Ω_t V_t`.
    pub v: Vec<CMatrix>,
    /// `V_{t_m}⁻¹`, solving `dV⁻¹/dt = V⁻¹ Ω_t`.
    pub vinv: Vec<CMatrix>,
    /// `Ω` on the half-step lattice.
    omega: Vec<CMatrix>,
}

impl OrderedExponential {
    pub fn dim(&self) -> usize {
        self.v[0].nrows()
    }

    /// `max_m ‖V_m V_m⁻¹ − 𝟙‖_F`.
    pub fn product_defect(&self) -> f64 {
        let d = self.dim();
        self.v
            .iter()
            .zip(&self.vinv)
            .map(|(v, w)| frobenius(&(v * w - CMatrix::identity(d, d))))
            .fold(0.0, f64::max)
    }

    /// Largest deviation of the integrated inverse from direct inversion.
    pub fn inverse_defect(&self) -> f64 {
        self.v
            .iter()
            .zip(&self.vinv)
            .map(|(v, w)| match v.clone().try_inverse() {
                Some(inv) => frobenius(&(inv - w)),
                None => f64::INFINITY,
            })
            .fold(0.0, f64::max)
    }

    pub fn omega_at_node(&self, m: usize) -> &CMatrix {
        &self.omega[2 * m]
    }

    /// `(V, V⁻¹)` on the half-step lattice. Odd entries use cubic Hermite
    /// interpolation with the exact derivatives `−ΩV` and `V⁻¹Ω`.
    pub(crate) fn half_lattice(&self) -> (Vec<CMatrix>, Vec<CMatrix>) {
        let h = self.grid.step();
        let c = |s: f64| C64::new(s, 0.0);
        let n = self.v.len();
        let mut v_half = Vec::with_capacity(2 * n - 1);
        let mut w_half = Vec::with_capacity(2 * n - 1);
        for m in 0..n {
            v_half.push(self.v[m].clone());
            w_half.push(self.vinv[m].clone());
            if m + 1 < n {
                let (o0, o1) = (&self.omega[2 * m], &self.omega[2 * m + 2]);
                let dv0 = -(o0 * &self.v[m]);
                let dv1 = -(o1 * &self.v[m + 1]);
                v_half.push((&self.v[m] + &self.v[m + 1]) * c(0.5) + (dv0 - dv1) * c(h / 8.0));
                let dw0 = &self.vinv[m] * o0;
                let dw1 = &self.vinv[m + 1] * o1;
                w_half.push(
                    (&self.vinv[m] + &self.vinv[m + 1]) * c(0.5) + (dw0 - dw1) * c(h / 8.0),
                );
            }
        }
        (v_half, w_half)
    }
}

/// `Ω_t` on the half-step lattice.
pub(crate) fn omega_table(w: &TwoTimeOperatorFunction, grid: &TimeGrid) -> Vec<CMatrix> {
    let hq = grid.step() / 2.0;
    let d = w.dim();
    (0..=2 * grid.steps)
        .into_par_iter()
        .map(|k| {
            let t = k as f64 * hq;
            trapezoid(k, hq, d, d, |s| w.eval(t, s))
        })
        .collect()
}

/// Integrates `V` and `V⁻¹` from their own equations with RK4.
pub fn ordered_exponential(w: &TwoTimeOperatorFunction, grid: &TimeGrid) -> OrderedExponential {
    let d = w.dim();
    let omega = omega_table(w, grid);
    let neg: Vec<CMatrix> = omega.iter().map(|o| -o).collect();
    let v = rk4_left(&neg, grid.step(), CMatrix::identity(d, d));
    let vinv = rk4_right(&omega, grid.step(), CMatrix::identity(d, d));
    OrderedExponential {
        grid: *grid,
        v,
        vinv,
        omega,
    }
}
