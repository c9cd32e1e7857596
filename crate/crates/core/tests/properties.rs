// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

use gkslcp::corpus::{random_hermitian, random_kernel, random_matrix, random_state};
use gkslcp::cp::{choi, cp_check, kraus_extract, measure_sample, DEFAULT_EPS_CP, DEFAULT_EPS_K};
use gkslcp::experiments::{redfield_kernel, RedfieldModel};
use gkslcp::kernel::{GKSLKernel, Part, ScalarProfile, TwoTimeOperatorFunction};
use gkslcp::operator::{frobenius, hermitian_asymmetry, sandwich_superop, Superop, C64};
use gkslcp::propagate::{solve_nonlocal, solve_nonlocal_two_time, Registry, SolveOptions, TimeGrid};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_cp_map(rng: &mut ChaCha8Rng, d: usize, count: usize) -> Superop {
    let mut map = Superop::zeros(d);
    for _ in 0..count {
        let k = random_matrix(rng, d) * C64::new(0.5, 0.0);
        map = map.add(&sandwich_superop(&k, &k.adjoint()).unwrap());
    }
    map
}

fn random_superop(rng: &mut ChaCha8Rng, d: usize) -> Superop {
    Superop::from_matrix(d, random_matrix(rng, d * d)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn choi_is_linear(seed in any::<u64>(), d in 2usize..=3, a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (random_superop(&mut rng, d), random_superop(&mut rng, d));
        let (ca, cb) = (C64::new(a, 0.3), C64::new(b, -0.1));
        let lhs = choi(&x.scale(ca).add(&y.scale(cb))).matrix;
        let rhs = choi(&x).matrix * ca + choi(&y).matrix * cb;
        prop_assert!(frobenius(&(lhs - rhs)) <= 1e-12 * (1.0 + frobenius(&choi(&x).matrix)));
    }

    #[test]
    fn cp_maps_have_nonnegative_measure(seed in any::<u64>(), d in 2usize..=3, n in 1usize..64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let map = random_cp_map(&mut rng, d, 1 + (seed % 3) as usize);
        prop_assume!(cp_check(&choi(&map), DEFAULT_EPS_CP).unwrap().completely_positive);
        let s = measure_sample(&map, n, seed).unwrap();
        prop_assert!(s.minimum >= -DEFAULT_EPS_CP * d as f64);
    }

    #[test]
    fn kraus_round_trip(seed in any::<u64>(), d in 2usize..=4, count in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let map = random_cp_map(&mut rng, d, count);
        let set = kraus_extract(&choi(&map), DEFAULT_EPS_K).unwrap();
        prop_assert!(set.len() <= count.min(d * d));
        prop_assert!(set.reconstruct().distance(&map) <= 1e-8 * (1.0 + map.frobenius()));
    }

    #[test]
    fn kernel_preserves_hermiticity_and_trace(seed in any::<u64>(), d in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = random_kernel(&mut rng, d);
        for _ in 0..100 {
            let t = rng.random_range(0.0..2.0);
            let tp = rng.random_range(0.0..=t);
            let rho = random_state(&mut rng, d);
            let out = k.eval_superop(t, tp).unwrap().apply(&rho);
            prop_assert!(hermitian_asymmetry(&out) <= 1e-12);
            prop_assert!(out.trace().norm() <= 1e-12);
        }
    }

    #[test]
    fn c_number_damping_rates_nonnegative(seed in any::<u64>(), kappa in 0.0f64..3.0, omega in -3.0f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let profiles = [
            ScalarProfile::Exponential { kappa },
            ScalarProfile::Oscillatory { omega },
            ScalarProfile::Product { factors: vec![ScalarProfile::Gaussian { tau: 1.0 + kappa }, ScalarProfile::Oscillatory { omega }] },
        ];
        let lindblad = profiles
            .iter()
            .map(|p| TwoTimeOperatorFunction::single(p.clone(), random_matrix(&mut rng, 2)))
            .collect();
        let k = GKSLKernel::new(TwoTimeOperatorFunction::zero(2), lindblad, 0.7).unwrap();
        prop_assert!(k.is_c_number());
        for i in 0..3 {
            for m in 0..=20 {
                prop_assert!(k.damping_rate(i, m as f64 * 0.1, 50).unwrap() >= 0.0);
            }
        }
    }

    #[test]
    fn redfield_kernels_are_valid(seed in any::<u64>(), omega in 0.1f64..3.0, kappa in 0.1f64..3.0, g in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = 2 + (seed % 2) as usize;
        let model = RedfieldModel {
            h_s: random_hermitian(&mut rng, d) * C64::new(omega, 0.0),
            s: random_hermitian(&mut rng, d),
            correlation: ScalarProfile::Exponential { kappa },
            coupling: g,
        };
        let k = redfield_kernel(&model).unwrap();
        prop_assert!(k.is_convolution());
        k.check_hermitian(2.0, 10).unwrap();
        for _ in 0..20 {
            let t = rng.random_range(0.0..2.0);
            let tp = rng.random_range(0.0..=t);
            let rho = random_state(&mut rng, d);
            let out = k.eval_superop(t, tp).unwrap().apply(&rho);
            prop_assert!(out.trace().norm() <= 1e-12);
            prop_assert!(hermitian_asymmetry(&out) <= 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn every_family_starts_at_identity_and_preserves_hermiticity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = 2 + (seed % 2) as usize;
        let k = random_kernel(&mut rng, d).with_coupling(0.5);
        let split = k.split();
        let grid = TimeGrid::new(1.0, 40).unwrap();
        let rho = random_state(&mut rng, d);
        for p in Registry::standard().iter() {
            let traj = p.propagate(&split, &grid, &SolveOptions::default()).unwrap();
            prop_assert_eq!(traj.map(0), Superop::identity(d));
            for m in 0..grid.len() {
                prop_assert!(hermitian_asymmetry(&traj.map(m).apply(&rho)) <= 1e-9, "{}", p.name());
            }
            if p.family().is_trace_preserving() {
                for m in 0..grid.len() {
                    prop_assert!((traj.map(m).apply(&rho).trace() - C64::new(1.0, 0.0)).norm() <= 1e-8);
                }
            }
        }
    }

    #[test]
    fn convolution_solver_is_a_restriction(seed in any::<u64>(), kappa in 0.2f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = RedfieldModel {
            h_s: random_hermitian(&mut rng, 2),
            s: random_hermitian(&mut rng, 2),
            correlation: ScalarProfile::Exponential { kappa },
            coupling: 0.6,
        };
        let split = redfield_kernel(&model).unwrap().split();
        let grid = TimeGrid::new(1.0, 60).unwrap();
        let fast = solve_nonlocal(&split, &grid, Part::Full).unwrap();
        let slow = solve_nonlocal_two_time(&split, &grid, Part::Full).unwrap();
        prop_assert!(fast.sup_distance(&slow) <= 1e-10);
    }
}
