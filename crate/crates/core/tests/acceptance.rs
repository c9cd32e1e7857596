// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Failures are reported but do not fail the target unless
//! `GKSLCP_ACCEPTANCE_STRICT=1` is set.

use std::time::Instant;

use gkslcp::corpus::{kernel_corpus, random_matrix, random_w, CORPUS_SEED};
use gkslcp::cp::{
    certify, measure_sample, z_counterexample, CertifyOptions, IntervalStatus,
    DEFAULT_EPS_CP, DEFAULT_SEED,
};
use gkslcp::experiments::{fit_line, g_scan, log_spaced, redfield_kernel, RedfieldModel};
use gkslcp::kernel::{
    Factor, GKSLKernel, KernelSplit, Part, ScalarProfile, Tabulated, TwoTimeOperatorFunction,
};
use gkslcp::operator::{frobenius, identity, sigma_plus, sigma_x, sigma_z, CMatrix, C64};
use gkslcp::propagate::{
    sandwich_series_oracle, ordered_exponential, series_b, solve_local, solve_local_full_via_transform,
    solve_nonlocal, weak_coupling_localize, Locality, MapTrajectory, TimeGrid, TransformInner,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CORPUS_SIZE: usize = 20;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn no_div() -> CertifyOptions {
    CertifyOptions {
        divisibility: false,
        ..CertifyOptions::default()
    }
}

fn states(d: usize) -> Vec<CMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    (0..4)
        .map(|_| {
            let a = random_matrix(&mut rng, d);
            let r = &a * a.adjoint();
            let tr = r.trace();
            r / tr
        })
        .collect()
}

fn series_oracle() -> Outcome {
    let start = Instant::now();
    let grid = TimeGrid::new(1.0, 2000).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut ops = vec![sigma_plus()];
    for _ in 0..2 {
        let a = random_matrix(&mut rng, 2);
        let norm = a.clone().svd(false, false).singular_values[0];
        ops.push(a / re(norm));
    }
    let mut worst: f64 = 0.0;
    for l in &ops {
        let f = TwoTimeOperatorFunction::constant(l.clone());
        let split = KernelSplit::with_parts(vec![f], TwoTimeOperatorFunction::zero(2));
        let traj = series_b(&split, &grid, 12, Locality::Local).unwrap();
        for m in (0..grid.len()).step_by(100) {
            let t = grid.node(m);
            // G^B_t = t·L⊗L̄, so the local series runs in τ = t²/2.
            for rho in states(2) {
                let got = traj.map(m).apply(&rho);
                let expect = sandwich_series_oracle(l, t * t / 2.0, &rho, 12);
                worst = worst.max(frobenius(&(got - &expect)) / frobenius(&expect));
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-6 && elapsed < 1.0,
        format!("max relative error {worst:.2e}, {elapsed:.2} s"),
    )
}

fn corpus_local_cp(corpus: &[GKSLKernel], grid: &TimeGrid) -> (Outcome, Vec<MapTrajectory>) {
    let start = Instant::now();
    let mut ok = true;
    let (mut min_lambda, mut trace_dev) = (f64::INFINITY, 0.0_f64);
    let mut trajs = Vec::new();
    for k in corpus {
        let traj = solve_local(&k.split(), grid).unwrap();
        let r = certify(&traj, &no_div()).unwrap();
        ok &= r.all_cp && r.max_trace_dev <= 1e-8;
        min_lambda = min_lambda.min(r.min_lambda);
        trace_dev = trace_dev.max(r.max_trace_dev);
        trajs.push(traj);
    }
    let elapsed = start.elapsed().as_secs_f64();
    (
        outcome(
            ok && elapsed < 30.0,
            format!(
                "{} kernels, min λ {min_lambda:.2e}, max trace deviation {trace_dev:.2e}, {elapsed:.1} s",
                corpus.len()
            ),
        ),
        trajs,
    )
}

fn transform(corpus: &[GKSLKernel], local: &[MapTrajectory], grid: &TimeGrid) -> Outcome {
    let mut worst: f64 = 0.0;
    for (k, traj) in corpus.iter().zip(local) {
        let tf = solve_local_full_via_transform(&k.split(), grid, TransformInner::Ode).unwrap();
        worst = worst.max(traj.sup_distance(&tf));
    }
    outcome(worst <= 1e-6, format!("sup distance {worst:.2e}"))
}

fn divisibility(grid: &TimeGrid) -> Outcome {
    let dephasing = GKSLKernel::new(
        TwoTimeOperatorFunction::zero(2),
        vec![TwoTimeOperatorFunction::constant(sigma_z())],
        1.0,
    )
    .unwrap();
    let r = certify(&solve_local(&dephasing.split(), grid).unwrap(), &CertifyOptions::default()).unwrap();
    let dephasing_ok = r.cp_divisible == Some(true);

    // Slowly decaying memory makes the coherence oscillate through zero.
    let table = Tabulated::from_fn(grid.horizon, grid.steps, |t, s| re((-0.2 * (t - s)).exp()));
    let l = TwoTimeOperatorFunction::single(ScalarProfile::Tabulated(table), sigma_z());
    let k = GKSLKernel::new(TwoTimeOperatorFunction::zero(2), vec![l], 1.0).unwrap();
    let r2 = certify(&solve_nonlocal(&k.split(), grid, Part::Full).unwrap(), &CertifyOptions::default()).unwrap();
    let bad: Vec<_> = r2
        .nodes
        .iter()
        .filter(|n| n.div_status == Some(IntervalStatus::NotCp))
        .collect();
    let endpoints = r2.nodes[0].cp && r2.nodes[grid.steps].cp;
    let first = bad.first().map(|n| (n.t, n.div_lambda_min.unwrap_or(f64::NAN)));
    outcome(
        dephasing_ok && !bad.is_empty() && endpoints,
        format!(
            "dephasing divisible: {dephasing_ok}; memory kernel: {} non-CP intervals, first ending at {:?}, endpoints CP: {endpoints}",
            bad.len(),
            first
        ),
    )
}

fn nonlocal_b(corpus: &[GKSLKernel], grid: &TimeGrid) -> Outcome {
    let mut ok = true;
    let mut min_lambda = f64::INFINITY;
    for k in corpus {
        let r = certify(&solve_nonlocal(&k.split(), grid, Part::B).unwrap(), &no_div()).unwrap();
        ok &= r.all_cp;
        min_lambda = min_lambda.min(r.min_lambda);
    }
    outcome(ok, format!("min λ {min_lambda:.2e}"))
}

fn counterexamples(grid: &TimeGrid) -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, w) in [("σx", sigma_x()), ("σ+", sigma_plus())] {
        let r = z_counterexample(&TwoTimeOperatorFunction::constant(w), grid, DEFAULT_EPS_CP).unwrap();
        match r.witness {
            Some(wit) => {
                let good = wit.t <= 2.0 && wit.measure < -1e-7 && wit.choi_lambda_min < -1e-7;
                ok &= good;
                detail.push(format!(
                    "{name}: t={} 𝓜={:.2e} λ={:.2e} rule {:?}",
                    wit.t, wit.measure, wit.choi_lambda_min, wit.rule
                ));
            }
            None => {
                ok = false;
                detail.push(format!("{name}: no witness"));
            }
        }
    }
    // Uniform diagonal W with the resolved non-positive sign.
    let w = TwoTimeOperatorFunction::constant(identity(2) * re(-1.0));
    let r = z_counterexample(&w, grid, DEFAULT_EPS_CP).unwrap();
    let traj = solve_nonlocal(&KernelSplit::from_w(w), grid, Part::Z).unwrap();
    let c = certify(&traj, &no_div()).unwrap();
    ok &= r.witness.is_none() && c.all_cp;
    detail.push(format!("−𝟙: witness {}, all CP {}", r.witness.is_some(), c.all_cp));
    outcome(ok, detail.join("; "))
}

fn weak_coupling(corpus: &[GKSLKernel], grid: &TimeGrid) -> Outcome {
    let g_list = log_spaced(0.05, 0.4, 6);
    let mut ok = true;
    let mut slopes = Vec::new();
    for k in &corpus[..3] {
        let r = g_scan(k, grid, &g_list).unwrap();
        let (s, res) = (r.slope.unwrap_or(f64::NAN), r.residual.unwrap_or(f64::NAN));
        ok &= (s - 3.0).abs() <= 0.3 && res < 0.1;
        slopes.push(format!("{s:.3} (res {res:.3})"));
    }
    let mut weak_cp = true;
    for k in &corpus[..3] {
        for &g in g_list.iter().filter(|&&g| g <= 0.3) {
            let traj = weak_coupling_localize(&k.with_coupling(g).split(), grid).unwrap();
            weak_cp &= certify(&traj, &no_div()).unwrap().all_cp;
        }
    }
    outcome(
        ok && weak_cp,
        format!("slopes [{}], weak maps CP for g ≤ 0.3: {weak_cp}", slopes.join(", ")),
    )
}

fn redfield(grid: &TimeGrid) -> Outcome {
    let k = redfield_kernel(&RedfieldModel::qubit(1.0, 1.0, 1.0)).unwrap();
    let g_list = log_spaced(0.05, 0.4, 6);
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for &g in &g_list {
        let split = k.with_coupling(g).split();
        let a = solve_local(&split, grid).unwrap();
        let b = solve_nonlocal(&split, grid, Part::Full).unwrap();
        x.push(g.ln());
        y.push(a.sup_distance(&b).ln());
    }
    let (slope, _, res) = fit_line(&x, &y).unwrap();
    outcome(
        (slope - 3.0).abs() <= 0.3,
        format!("local vs nonlocal slope {slope:.3} (res {res:.3})"),
    )
}

fn ordered_exp(grid: &TimeGrid) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let w = random_w(&mut rng, 2 + i % 2);
        worst = worst.max(ordered_exponential(&w, grid).product_defect());
    }
    outcome(worst <= 1e-9, format!("max ‖VV⁻¹ − 𝟙‖ {worst:.2e}"))
}

fn order(errors: &[f64]) -> f64 {
    errors
        .windows(2)
        .map(|e| (e[0] / e[1]).log2())
        .fold(f64::INFINITY, f64::min)
}

fn self_convergence() -> Outcome {
    let steps = [100, 200, 400, 800];
    let t = 2.0_f64;

    // Memory kernel e^{−τ}: coherence obeys c'' + c' + 2c = 0.
    let l = TwoTimeOperatorFunction::single(ScalarProfile::Exponential { kappa: 0.5 }, sigma_z());
    let memory = GKSLKernel::new(TwoTimeOperatorFunction::zero(2), vec![l], 1.0).unwrap();
    let w = 7.0_f64.sqrt() / 2.0;
    let exact_nl = (-t / 2.0).exp() * ((w * t).cos() + (w * t).sin() / (2.0 * w));

    // Local kernel constant in t′: coherence exp(−2∫₀ᵗ s e^{−s} ds).
    let l = TwoTimeOperatorFunction::single(
        ScalarProfile::Separable {
            f: Factor::Exponential { kappa: 0.5 },
            g: Factor::Constant { value: [1.0, 0.0] },
        },
        sigma_z(),
    );
    let local = GKSLKernel::new(TwoTimeOperatorFunction::zero(2), vec![l], 1.0).unwrap();
    let exact_l = (-2.0 * (1.0 - (1.0 + t) * (-t).exp())).exp();

    let coherence = |traj: &MapTrajectory| {
        let rho = traj.last().apply(&gkslcp::operator::ket_bra(2, 0, 1));
        rho[(0, 1)].re
    };
    let mut e_nl = Vec::new();
    let mut e_l = Vec::new();
    for &m in &steps {
        let grid = TimeGrid::new(t, m).unwrap();
        e_nl.push((coherence(&solve_nonlocal(&memory.split(), &grid, Part::Full).unwrap()) - exact_nl).abs());
        e_l.push((coherence(&solve_local(&local.split(), &grid).unwrap()) - exact_l).abs());
    }
    let (p_nl, p_l) = (order(&e_nl), order(&e_l));
    outcome(
        p_nl >= 1.8 && p_l >= 3.5,
        format!("Volterra order {p_nl:.2}, ODE order {p_l:.2}"),
    )
}

fn run_once(dir: &std::path::Path, tag: &str) -> Vec<u8> {
    let grid = TimeGrid::new(1.0, 100).unwrap();
    let k = &kernel_corpus(CORPUS_SEED, 1)[0];
    let traj = solve_nonlocal(&k.split(), &grid, Part::Full).unwrap();
    let report = certify(&traj, &CertifyOptions::default()).unwrap();
    let scan = g_scan(k, &grid, &log_spaced(0.05, 0.4, 4)).unwrap();
    let sample = measure_sample(&traj.last(), 64, DEFAULT_SEED).unwrap();
    let mut out = serde_json::to_vec_pretty(&traj.to_doc()).unwrap();
    out.extend(serde_json::to_vec_pretty(&report).unwrap());
    out.extend(serde_json::to_vec_pretty(&scan).unwrap());
    out.extend(serde_json::to_vec_pretty(&sample).unwrap());
    out.extend(report.to_csv().into_bytes());
    let path = dir.join(format!("determinism-{tag}.json"));
    std::fs::write(&path, &out).unwrap();
    std::fs::read(&path).unwrap()
}

fn determinism() -> Outcome {
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR"));
    let a = run_once(dir, "a");
    let b = run_once(dir, "b");
    outcome(a == b, format!("{} bytes, identical: {}", a.len(), a == b))
}

fn main() {
    let grid = TimeGrid::default();
    let corpus = kernel_corpus(CORPUS_SEED, CORPUS_SIZE);
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    results.push(("series oracle equivalence", series_oracle()));
    let (local_cp, local) = corpus_local_cp(&corpus, &grid);
    results.push(("local-full CP on the corpus", local_cp));
    results.push(("transform consistency", transform(&corpus, &local, &grid)));
    results.push(("divisibility", divisibility(&grid)));
    results.push(("nonlocal-B CP on the corpus", nonlocal_b(&corpus, &grid)));
    results.push(("anticommutator counterexamples", counterexamples(&grid)));
    results.push(("weak-coupling scaling", weak_coupling(&corpus, &grid)));
    results.push(("correlation-function kernel scaling", redfield(&grid)));
    results.push(("ordered exponential inverse", ordered_exp(&grid)));
    results.push(("solver self-convergence", self_convergence()));
    results.push(("determinism", determinism()));

    let mut failed = 0;
    println!();
    for (i, (name, o)) in results.iter().enumerate() {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!o.pass);
        println!("{tag} [{:>2}] {name}: {}", i + 1, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if std::env::var("GKSLCP_ACCEPTANCE_STRICT").as_deref() == Ok("1") {
        assert_eq!(failed, 0, "acceptance criteria failed");
    }
    if failed > 0 {
        println!("set GKSLCP_ACCEPTANCE_STRICT=1 to fail on FAIL lines");
    }
}
