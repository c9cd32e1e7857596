// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

//! Seeded random operators and kernels used by tests and experiments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::kernel::{Factor, GKSLKernel, ScalarProfile, TwoTimeOperatorFunction};
use crate::operator::{CMatrix, C64};

/// Seed of the shared randomized corpus.
pub const CORPUS_SEED: u64 = 0x6b73_6c63;

pub fn random_matrix<R: Rng>(rng: &mut R, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn random_hermitian<R: Rng>(rng: &mut R, d: usize) -> CMatrix {
    let a = random_matrix(rng, d);
    (&a + a.adjoint()) * C64::new(0.5, 0.0)
}

/// Unit-trace positive definite matrix.
pub fn random_state<R: Rng>(rng: &mut R, d: usize) -> CMatrix {
    let a = random_matrix(rng, d);
    let rho = &a * a.adjoint();
    let tr = rho.trace();
    rho / tr
}

/// Normalized complex-normal vector.
pub fn random_unit_vector<R: Rng>(rng: &mut R, n: usize) -> nalgebra::DVector<C64> {
    let v = nalgebra::DVector::from_fn(n, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

/// A smooth two-time kernel with a Hamiltonian part and two Lindblad
/// families, mixing convolution and separable profiles.
pub fn random_kernel<R: Rng>(rng: &mut R, d: usize) -> GKSLKernel {
    let s = |x: f64| C64::new(x, 0.0);
    let mut h = TwoTimeOperatorFunction::single(
        ScalarProfile::Exponential { kappa: 0.5 },
        random_hermitian(rng, d) * s(0.3),
    );
    h.push(ScalarProfile::one(), random_hermitian(rng, d) * s(0.2));
    let mut l1 = TwoTimeOperatorFunction::single(
        ScalarProfile::Oscillatory { omega: 1.3 },
        random_matrix(rng, d) * s(0.3),
    );
    l1.push(
        ScalarProfile::Gaussian { tau: 1.1 },
        random_matrix(rng, d) * s(0.3),
    );
    let l2 = TwoTimeOperatorFunction::single(
        ScalarProfile::Separable {
            f: Factor::Exponential { kappa: 0.4 },
            g: Factor::Oscillatory { omega: 0.9 },
        },
        random_matrix(rng, d) * s(0.25),
    );
    GKSLKernel::new(h, vec![l1, l2], 1.0).expect("valid random kernel")
}

/// A smooth operator function for `W` tests: a constant part and a decaying
/// two-time part.
pub fn random_w<R: Rng>(rng: &mut R, d: usize) -> TwoTimeOperatorFunction {
    let s = |x: f64| C64::new(x, 0.0);
    let mut w = TwoTimeOperatorFunction::constant(random_matrix(rng, d) * s(0.3));
    w.push(
        ScalarProfile::Separable {
            f: Factor::Gaussian { tau: 1.5 },
            g: Factor::Oscillatory { omega: 0.7 },
        },
        random_matrix(rng, d) * s(0.3),
    );
    w.push(
        ScalarProfile::Exponential { kappa: 1.0 },
        random_matrix(rng, d) * s(0.3),
    );
    w
}

/// `n` kernels alternating between `d = 2` and `d = 3`.
pub fn kernel_corpus(seed: u64, n: usize) -> Vec<GKSLKernel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|i| random_kernel(&mut rng, 2 + i % 2)).collect()
}
