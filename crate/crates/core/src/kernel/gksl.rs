// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

//! The GKSL-like kernel and its `𝓑 − 𝓩` decomposition.

use serde::{Deserialize, Serialize};

use super::function::{TermDoc, TwoTimeOperatorFunction};
use crate::error::{Error, Result};
use crate::operator::{
    anticommutator_like, check_dim, conj_kron, hermitian_asymmetry, CMatrix, Superop, C64, I,
};

/// Tolerance for the sampled Hermiticity of `H'`.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Horizon sampled by [`GKSLKernel::check_hermitian`] when no tabulated
/// profile sets one.
pub const DEFAULT_CHECK_HORIZON: f64 = 2.0;

/// `𝓛(t,t')ρ = g²(−i[H',ρ] + Σᵢ LⁱρLⁱ† − ½{Lⁱ†Lⁱ, ρ})`.
#[derive(Clone, Debug, PartialEq)]
pub struct GKSLKernel {
    dim: usize,
    hermitian: TwoTimeOperatorFunction,
    lindblad: Vec<TwoTimeOperatorFunction>,
    coupling: f64,
}

impl GKSLKernel {
    pub fn new(
        hermitian: TwoTimeOperatorFunction,
        lindblad: Vec<TwoTimeOperatorFunction>,
        coupling: f64,
    ) -> Result<Self> {
        let dim = hermitian.dim();
        check_dim(dim)?;
        for (i, l) in lindblad.iter().enumerate() {
            if l.dim() != dim {
                return Err(Error::schema(
                    format!("lindblad[{i}]"),
                    format!("dimension {} differs from {dim}", l.dim()),
                ));
            }
        }
        if !(coupling.is_finite() && coupling >= 0.0) {
            return Err(Error::schema("coupling_g", "must be finite and non-negative"));
        }
        Ok(Self {
            dim,
            hermitian,
            lindblad,
            coupling,
        })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            hermitian: TwoTimeOperatorFunction::zero(dim),
            lindblad: Vec::new(),
            coupling: 1.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn hermitian_part(&self) -> &TwoTimeOperatorFunction {
        &self.hermitian
    }

    pub fn lindblad_parts(&self) -> &[TwoTimeOperatorFunction] {
        &self.lindblad
    }

    pub fn with_coupling(&self, g: f64) -> Self {
        Self {
            coupling: g,
            ..self.clone()
        }
    }

    /// The kernel superoperator at `(t, t')`, including the `g²` prefactor.
    pub fn eval_superop(&self, t: f64, tp: f64) -> Result<Superop> {
        if tp > t {
            return Err(Error::TimeOrder { t, t_prime: tp });
        }
        Ok(Superop::new_unchecked(self.dim, self.split().full(t, tp)))
    }

    pub fn split(&self) -> KernelSplit {
        let g = self.coupling;
        let lindblad: Vec<_> = self
            .lindblad
            .iter()
            .map(|l| l.scaled(C64::new(g, 0.0)))
            .collect();
        let mut w = self.hermitian.scaled(I * (g * g));
        for l in &lindblad {
            w.extend(&l.gram().scaled(C64::new(0.5, 0.0)));
        }
        KernelSplit {
            dim: self.dim,
            lindblad,
            w,
        }
    }

    /// Samples `H'(t, t')` on the triangle `0 ≤ t' ≤ t ≤ horizon`.
    pub fn check_hermitian(&self, horizon: f64, samples: usize) -> Result<()> {
        let n = samples.max(1);
        let h = horizon / n as f64;
        let mut worst = 0.0_f64;
        for i in 0..=n {
            for j in 0..=i {
                let m = self.hermitian.eval(i as f64 * h, j as f64 * h);
                worst = worst.max(hermitian_asymmetry(&m));
            }
        }
        if worst > HERMITIAN_TOL {
            return Err(Error::NotHermitian {
                asymmetry: worst,
                tolerance: HERMITIAN_TOL,
            });
        }
        Ok(())
    }

    /// Tabulated profiles must cover the requested horizon.
    pub fn check_horizon(&self, horizon: f64) -> Result<()> {
        let limit = std::iter::once(&self.hermitian)
            .chain(&self.lindblad)
            .filter_map(|f| f.horizon_limit())
            .reduce(f64::min);
        match limit {
            Some(lim) if lim < horizon * (1.0 - 1e-12) => Err(Error::InvalidArgument(format!(
                "tabulated profile covers [0, {lim}] but the horizon is {horizon}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn is_convolution(&self) -> bool {
        self.hermitian.is_convolution() && self.lindblad.iter().all(|l| l.is_convolution())
    }

    /// True when every Lindblad function is a single term, i.e. a c-number
    /// profile times a fixed operator.
    pub fn is_c_number(&self) -> bool {
        self.lindblad.iter().all(|l| l.terms().len() <= 1)
    }

    /// `γⁱ(t) = g²∫₀ᵗ |hⁱ(t,t')|² dt'` by the trapezoid rule with `steps`
    /// panels, for single-term Lindblad functions.
    pub fn damping_rate(&self, index: usize, t: f64, steps: usize) -> Result<f64> {
        let l = self
            .lindblad
            .get(index)
            .ok_or_else(|| Error::InvalidArgument(format!("no Lindblad function {index}")))?;
        let [term] = l.terms() else {
            return Err(Error::InvalidArgument(format!(
                "lindblad[{index}] is not a c-number profile times one operator"
            )));
        };
        let n = steps.max(1);
        let h = t / n as f64;
        let mut acc = 0.0;
        for j in 0..=n {
            let w = if j == 0 || j == n { 0.5 } else { 1.0 };
            acc += w * term.profile.eval(t, j as f64 * h).norm_sqr();
        }
        Ok(self.coupling * self.coupling * acc * h)
    }

    pub fn to_doc(&self) -> KernelDoc {
        KernelDoc {
            dim: self.dim,
            coupling_g: self.coupling,
            hermitian: self.hermitian.to_doc(),
            lindblad: self.lindblad.iter().map(|l| l.to_doc()).collect(),
        }
    }

    pub fn from_doc(doc: &KernelDoc) -> Result<Self> {
        check_dim(doc.dim)?;
        let hermitian = TwoTimeOperatorFunction::from_doc(doc.dim, &doc.hermitian, "hermitian")?;
        let lindblad = doc
            .lindblad
            .iter()
            .enumerate()
            .map(|(i, terms)| {
                TwoTimeOperatorFunction::from_doc(doc.dim, terms, &format!("lindblad[{i}]"))
            })
            .collect::<Result<Vec<_>>>()?;
        let kernel = Self::new(hermitian, lindblad, doc.coupling_g)?;
        let horizon = kernel
            .hermitian
            .horizon_limit()
            .unwrap_or(DEFAULT_CHECK_HORIZON);
        kernel.check_hermitian(horizon, 16).map_err(|e| match e {
            Error::NotHermitian { asymmetry, .. } => Error::schema(
                "hermitian",
                format!("sampled H' is not Hermitian (asymmetry {asymmetry:.3e})"),
            ),
            other => other,
        })?;
        Ok(kernel)
    }

    /// Parses and validates a kernel document.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: KernelDoc = serde_json::from_str(text)?;
        Self::from_doc(&doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("kernel documents always serialize")
    }
}

/// Kernel file schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelDoc {
    pub dim: usize,
    #[serde(default = "default_coupling")]
    pub coupling_g: f64,
    #[serde(default)]
    pub hermitian: Vec<TermDoc>,
    #[serde(default)]
    pub lindblad: Vec<Vec<TermDoc>>,
}

fn default_coupling() -> f64 {
    1.0
}

/// `𝓑(t,t')ρ = Σ LρL†`, `𝓩(t,t')ρ = Wρ + ρW†` with
/// `W = iH' + ½ΣL†L`. Both already carry the coupling.
#[derive(Clone, Debug)]
pub struct KernelSplit {
    dim: usize,
    lindblad: Vec<TwoTimeOperatorFunction>,
    w: TwoTimeOperatorFunction,
}

impl KernelSplit {
    /// A pure-`𝓩` problem given directly by `W`.
    pub fn from_w(w: TwoTimeOperatorFunction) -> Self {
        Self {
            dim: w.dim(),
            lindblad: Vec::new(),
            w,
        }
    }

    /// Sandwich operators and `W` given separately; both are used as is.
    pub fn with_parts(lindblad: Vec<TwoTimeOperatorFunction>, w: TwoTimeOperatorFunction) -> Self {
        Self {
            dim: w.dim(),
            lindblad,
            w,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn w_op(&self) -> &TwoTimeOperatorFunction {
        &self.w
    }

    pub fn lindblad(&self) -> &[TwoTimeOperatorFunction] {
        &self.lindblad
    }

    pub fn has_b(&self) -> bool {
        !self.lindblad.is_empty()
    }

    pub fn w_at(&self, t: f64, tp: f64) -> CMatrix {
        self.w.eval(t, tp)
    }

    /// Matrix of `𝓑(t,t')`.
    pub fn b(&self, t: f64, tp: f64) -> CMatrix {
        let big = self.dim * self.dim;
        let mut out = CMatrix::zeros(big, big);
        for l in &self.lindblad {
            out += conj_kron(&l.eval(t, tp));
        }
        out
    }

    /// Matrix of `𝓩(t,t')`.
    pub fn z(&self, t: f64, tp: f64) -> CMatrix {
        anticommutator_like(&self.w.eval(t, tp))
    }

    /// Matrix of `𝓑 − 𝓩`.
    pub fn full(&self, t: f64, tp: f64) -> CMatrix {
        self.b(t, tp) - self.z(t, tp)
    }

    pub fn part(&self, part: Part) -> PartKernel<'_> {
        PartKernel { split: self, part }
    }

    pub fn is_convolution(&self) -> bool {
        self.w.is_convolution() && self.lindblad.iter().all(|l| l.is_convolution())
    }
}

/// Which piece of the kernel drives an equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Part {
    /// `𝓑 − 𝓩`
    Full,
    /// `𝓑`
    B,
    /// `−𝓩`
    Z,
}

/// A superoperator-valued function of `(t, t')`, the input of every solver.
pub trait SuperKernel: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, t: f64, tp: f64) -> CMatrix;

    /// True when `eval(t, t')` depends on `t − t'` only.
    fn is_convolution(&self) -> bool {
        false
    }
}

#[derive(Clone, Copy)]
pub struct PartKernel<'a> {
    split: &'a KernelSplit,
    part: Part,
}

impl SuperKernel for PartKernel<'_> {
    fn dim(&self) -> usize {
        self.split.dim
    }

    fn eval(&self, t: f64, tp: f64) -> CMatrix {
        match self.part {
            Part::Full => self.split.full(t, tp),
            Part::B => self.split.b(t, tp),
            Part::Z => -self.split.z(t, tp),
        }
    }

    fn is_convolution(&self) -> bool {
        match self.part {
            Part::Z => self.split.w.is_convolution(),
            _ => self.split.is_convolution(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::profile::ScalarProfile;
    use crate::operator::test_util::*;
    use crate::operator::{frobenius, identity, ket_bra, sigma_minus, sigma_x, sigma_z, ONE};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dephasing() -> GKSLKernel {
        GKSLKernel::new(
            TwoTimeOperatorFunction::zero(2),
            vec![TwoTimeOperatorFunction::constant(sigma_z())],
            1.0,
        )
        .unwrap()
    }

    use crate::corpus::random_kernel;

    #[test]
    fn dephasing_action_on_coherence() {
        let s = dephasing().eval_superop(1.0, 0.5).unwrap();
        let out = s.apply(&ket_bra(2, 0, 1));
        assert!(frobenius(&(out + ket_bra(2, 0, 1) * C64::new(2.0, 0.0))) < 1e-15);
    }

    #[test]
    fn commutator_action() {
        let k = GKSLKernel::new(TwoTimeOperatorFunction::constant(sigma_z()), vec![], 1.0).unwrap();
        let out = k.eval_superop(0.3, 0.1).unwrap().apply(&ket_bra(2, 0, 1));
        assert!(frobenius(&(out - ket_bra(2, 0, 1) * C64::new(0.0, -2.0))) < 1e-15);
    }

    #[test]
    fn time_order_enforced() {
        assert!(matches!(
            dephasing().eval_superop(0.5, 1.0),
            Err(Error::TimeOrder { .. })
        ));
    }

    #[test]
    fn w_for_lowering_operator() {
        let k = GKSLKernel::new(
            TwoTimeOperatorFunction::zero(2),
            vec![TwoTimeOperatorFunction::constant(sigma_minus())],
            1.0,
        )
        .unwrap();
        let w = k.split().w_at(1.0, 0.0);
        assert!(frobenius(&(w - ket_bra(2, 1, 1) * C64::new(0.5, 0.0))) < 1e-15);
    }

    #[test]
    fn w_for_pure_hamiltonian() {
        let k = GKSLKernel::new(TwoTimeOperatorFunction::constant(sigma_x()), vec![], 1.0).unwrap();
        let w = k.split().w_at(1.0, 0.0);
        assert!(frobenius(&(w - sigma_x() * I)) < 1e-15);
    }

    #[test]
    fn coupling_scales_kernel_quadratically() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let k = random_kernel(&mut rng, 2);
        let a = k.eval_superop(1.0, 0.3).unwrap();
        let b = k.with_coupling(0.5).eval_superop(1.0, 0.3).unwrap();
        assert!(a.scale(C64::new(0.25, 0.0)).distance(&b) < 1e-14);
    }

    #[test]
    fn split_recombines_and_w_matches_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let k = random_kernel(&mut rng, 2).with_coupling(0.8);
        let split = k.split();
        for _ in 0..20 {
            let t: f64 = rng.random_range(0.0..2.0);
            let tp: f64 = rng.random_range(0.0..t);
            let rho = random_matrix(&mut rng, 2);
            let h = k.hermitian_part().eval(t, tp) * C64::new(0.64, 0.0);
            let mut direct = (&h * &rho - &rho * &h) * (-I);
            let mut w = &h * I;
            for part in k.lindblad_parts() {
                let l = part.eval(t, tp) * C64::new(0.8, 0.0);
                direct += &l * &rho * l.adjoint()
                    - (l.adjoint() * &l * &rho + &rho * l.adjoint() * &l) * C64::new(0.5, 0.0);
                w += l.adjoint() * &l * C64::new(0.5, 0.0);
            }
            let via_split = Superop::new_unchecked(2, split.b(t, tp))
                .sub(&Superop::new_unchecked(2, split.z(t, tp)))
                .apply(&rho);
            assert!(frobenius(&(&via_split - &direct)) < 1e-12);
            assert!(frobenius(&(split.w_at(t, tp) - w)) < 1e-12);
        }
    }

    #[test]
    fn generator_is_traceless_and_hermiticity_preserving() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let k = random_kernel(&mut rng, 3);
        for _ in 0..100 {
            let t: f64 = rng.random_range(0.0..2.0);
            let tp: f64 = rng.random_range(0.0..=t);
            let s = k.eval_superop(t, tp).unwrap();
            let rho = random_state(&mut rng, 3);
            let out = s.apply(&rho);
            assert!(out.trace().norm() <= 1e-12);
            assert!(hermitian_asymmetry(&out) <= 1e-12);
        }
    }

    #[test]
    fn hermiticity_check_rejects_complex_profile() {
        let h = TwoTimeOperatorFunction::single(ScalarProfile::Oscillatory { omega: 1.0 }, sigma_z());
        let k = GKSLKernel::new(h, vec![], 1.0).unwrap();
        assert!(k.check_hermitian(2.0, 8).is_err());
        let ok = GKSLKernel::new(TwoTimeOperatorFunction::constant(identity(2)), vec![], 1.0).unwrap();
        assert!(ok.check_hermitian(2.0, 8).is_ok());
    }

    #[test]
    fn damping_rate_nonnegative_and_closed_form() {
        let k = GKSLKernel::new(
            TwoTimeOperatorFunction::zero(2),
            vec![TwoTimeOperatorFunction::single(
                ScalarProfile::Exponential { kappa: 1.0 },
                sigma_z(),
            )],
            1.0,
        )
        .unwrap();
        for i in 0..=20 {
            let t = 0.1 * i as f64;
            let gamma = k.damping_rate(0, t, 2000).unwrap();
            assert!(gamma >= 0.0);
            let exact = (1.0 - (-2.0 * t).exp()) / 2.0;
            assert!((gamma - exact).abs() < 1e-6);
        }
        let _ = ONE;
    }
}
