// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::random_unit_vector;
use crate::error::{Error, Result};
use crate::operator::{hermitian_eig, CMatrix, CVector, HermitianEigen, Superop, C64};

/// `(Λ⊗𝟙)|Φ⁺⟩⟨Φ⁺|` with `|Φ⁺⟩ = Σᵢ|i⟩|i⟩`.
///
/// Index of `|a⟩_sys|i⟩_anc` is `a + d·i`, so
/// `C[a + d·i, b + d·j] = ⟨a|Λ(|i⟩⟨j|)|b⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    pub dim: usize,
    pub matrix: CMatrix,
}

impl ChoiMatrix {
    pub fn eig(&self) -> Result<HermitianEigen> {
        hermitian_eig(&self.matrix)
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }
}

pub fn choi(map: &Superop) -> ChoiMatrix {
    let d = map.dim();
    let s = map.matrix();
    let big = d * d;
    let matrix = CMatrix::from_fn(big, big, |r, c| {
        let (a, i) = (r % d, r / d);
        let (b, j) = (c % d, c / d);
        s[(a + d * b, i + d * j)]
    });
    ChoiMatrix { dim: d, matrix }
}

/// Inverse of [`choi`].
pub fn superop_from_choi(c: &ChoiMatrix) -> Superop {
    let d = c.dim;
    let big = d * d;
    let matrix = CMatrix::from_fn(big, big, |r, col| {
        let (a, b) = (r % d, r / d);
        let (i, j) = (col % d, col / d);
        c.matrix[(a + d * i, b + d * j)]
    });
    Superop::from_matrix(d, matrix).expect("square Choi matrix")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CpVerdict {
    pub lambda_min: f64,
    pub completely_positive: bool,
    /// `ε_CP·d`, the threshold actually applied.
    pub threshold: f64,
}

/// CP iff `λ_min ≥ −ε_CP·d`.
pub fn cp_check(c: &ChoiMatrix, eps_cp: f64) -> Result<CpVerdict> {
    let lambda_min = c.eig()?.min();
    let threshold = eps_cp * c.dim as f64;
    Ok(CpVerdict {
        lambda_min,
        completely_positive: lambda_min >= -threshold,
        threshold,
    })
}

/// `⟨Ψ|(Λ⊗𝟙)(|Φ⟩⟨Φ|)|Ψ⟩` for `d²`-dimensional vectors indexed `sys + d·anc`.
pub fn measure(map: &Superop, psi: &CVector, phi: &CVector) -> Result<f64> {
    let d = map.dim();
    if psi.len() != d * d || phi.len() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: psi.len().max(phi.len()),
        });
    }
    // A[x,a] = Σᵢ conj(Ψ[x + d·i])·Φ[a + d·i]
    let a = CMatrix::from_fn(d, d, |x, p| {
        (0..d).map(|i| psi[x + d * i].conj() * phi[p + d * i]).sum()
    });
    let s = map.matrix();
    let mut acc = C64::new(0.0, 0.0);
    for x in 0..d {
        for y in 0..d {
            for p in 0..d {
                for q in 0..d {
                    acc += a[(x, p)] * a[(y, q)].conj() * s[(x + d * y, p + d * q)];
                }
            }
        }
    }
    Ok(acc.re)
}

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_260_101;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureSample {
    pub minimum: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Minimum of `𝓜` over `n` pairs of random unit vectors.
pub fn measure_sample(map: &Superop, samples: usize, seed: u64) -> Result<MeasureSample> {
    if samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = map.dim() * map.dim();
    let mut minimum = f64::INFINITY;
    for _ in 0..samples {
        let phi = random_unit_vector(&mut rng, n);
        let psi = random_unit_vector(&mut rng, n);
        minimum = minimum.min(measure(map, &psi, &phi)?);
    }
    Ok(MeasureSample {
        minimum,
        samples,
        seed,
    })
}

/// `|Φ⁺⟩/√d`.
pub fn max_entangled(d: usize) -> CVector {
    let mut v = CVector::zeros(d * d);
    for i in 0..d {
        v[i + d * i] = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    }
    v
}

/// `ρ ↦ ρᵀ`.
pub fn transpose_map(d: usize) -> Superop {
    let big = d * d;
    let matrix = CMatrix::from_fn(big, big, |r, c| {
        let (a, b) = (r % d, r / d);
        let (i, j) = (c % d, c / d);
        if a == j && b == i {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    Superop::from_matrix(d, matrix).expect("square")
}
