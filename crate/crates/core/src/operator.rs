// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense operator and superoperator algebra on small Hilbert spaces.
//!
//! Vectorization is column-stacking throughout: `vec(A)[i + d*j] = A[i, j]`.
//! Under this convention the map `ρ ↦ AρB` has the matrix `Bᵀ ⊗ A`.
//! Every superoperator stored in memory or on disk uses it.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Smallest and largest supported Hilbert-space dimension.
pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 8;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn check_dim(d: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&d) {
        Ok(())
    } else {
        Err(Error::schema(
            "dim",
            format!("must lie in [{MIN_DIM}, {MAX_DIM}], got {d}"),
        ))
    }
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

pub fn dagger(a: &CMatrix) -> CMatrix {
    a.adjoint()
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `|i⟩⟨j|` in dimension `d`.
pub fn ket_bra(d: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    m[(i, j)] = ONE;
    m
}

pub fn sigma_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn sigma_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn sigma_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// Lowering operator `|0⟩⟨1|`: takes `|1⟩` to `|0⟩`.
pub fn sigma_minus() -> CMatrix {
    ket_bra(2, 0, 1)
}

/// Raising operator `|1⟩⟨0|`.
pub fn sigma_plus() -> CMatrix {
    ket_bra(2, 1, 0)
}

/// Maximum entrywise modulus of `A − A†`.
pub fn hermitian_asymmetry(a: &CMatrix) -> f64 {
    let diff = a - a.adjoint();
    diff.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn is_hermitian(a: &CMatrix, tol: f64) -> bool {
    a.is_square() && hermitian_asymmetry(a) <= tol
}

/// Column-stacking vectorization.
pub fn vectorize(a: &CMatrix) -> CVector {
    // nalgebra storage is column-major, which is exactly column stacking.
    CVector::from_column_slice(a.as_slice())
}

pub fn unvectorize(v: &CVector, d: usize) -> Result<CMatrix> {
    if v.len() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: v.len(),
        });
    }
    Ok(CMatrix::from_column_slice(d, d, v.as_slice()))
}

/// A linear map on `d×d` matrices, stored as a `d²×d²` matrix acting on
/// column-stacked vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Superop {
    dim: usize,
    matrix: CMatrix,
}

impl Superop {
    pub fn from_matrix(dim: usize, matrix: CMatrix) -> Result<Self> {
        let big = dim * dim;
        if matrix.nrows() != big || matrix.ncols() != big {
            return Err(Error::DimensionMismatch {
                expected: big,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self { dim, matrix })
    }

    pub(crate) fn new_unchecked(dim: usize, matrix: CMatrix) -> Self {
        debug_assert_eq!(matrix.nrows(), dim * dim);
        Self { dim, matrix }
    }

    pub fn identity(dim: usize) -> Self {
        Self::new_unchecked(dim, CMatrix::identity(dim * dim, dim * dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new_unchecked(dim, CMatrix::zeros(dim * dim, dim * dim))
    }

    /// Hilbert-space dimension `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let out = &self.matrix * vectorize(rho);
        CMatrix::from_column_slice(self.dim, self.dim, out.as_slice())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Superop) -> Superop {
        Self::new_unchecked(self.dim, &self.matrix * &other.matrix)
    }

    pub fn scale(&self, s: C64) -> Superop {
        Self::new_unchecked(self.dim, &self.matrix * s)
    }

    pub fn add(&self, other: &Superop) -> Superop {
        Self::new_unchecked(self.dim, &self.matrix + &other.matrix)
    }

    pub fn sub(&self, other: &Superop) -> Superop {
        Self::new_unchecked(self.dim, &self.matrix - &other.matrix)
    }

    pub fn frobenius(&self) -> f64 {
        frobenius(&self.matrix)
    }

    pub fn distance(&self, other: &Superop) -> f64 {
        frobenius(&(&self.matrix - &other.matrix))
    }

    /// Largest `|tr Λ(|i⟩⟨j|) − δᵢⱼ|` over matrix units; zero iff the map is
    /// trace preserving.
    pub fn trace_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0_f64;
        for col in 0..d * d {
            let mut tr = ZERO;
            for i in 0..d {
                tr += self.matrix[(i + d * i, col)];
            }
            let (i, j) = (col % d, col / d);
            if i == j {
                tr -= ONE;
            }
            worst = worst.max(tr.norm());
        }
        worst
    }
}

/// The superoperator of `ρ ↦ AρB`.
pub fn sandwich_superop(a: &CMatrix, b: &CMatrix) -> Result<Superop> {
    let d = a.nrows();
    for m in [a, b] {
        if !m.is_square() || m.nrows() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: m.nrows().max(m.ncols()),
            });
        }
    }
    Ok(Superop::new_unchecked(d, b.transpose().kronecker(a)))
}

/// `ρ ↦ LρL†`, written directly into the `d²×d²` matrix.
pub(crate) fn conj_kron(l: &CMatrix) -> CMatrix {
    l.map(|z| z.conj()).kronecker(l)
}

/// `ρ ↦ Wρ + ρW†`.
pub(crate) fn anticommutator_like(w: &CMatrix) -> CMatrix {
    let d = w.nrows();
    let id = CMatrix::identity(d, d);
    id.kronecker(w) + w.map(|z| z.conj()).kronecker(&id)
}

#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal columns, ordered like `eigenvalues`.
    pub eigenvectors: CMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.eigenvalues.len();
        let lambda = CMatrix::from_diagonal(&CVector::from_iterator(
            n,
            self.eigenvalues.iter().map(|&x| C64::new(x, 0.0)),
        ));
        &self.eigenvectors * lambda * self.eigenvectors.adjoint()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Relative asymmetry tolerated by [`hermitian_eig`].
pub const HERMITIAN_REL_TOL: f64 = 1e-9;

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized as
/// `(A + A†)/2` after checking `‖A − A†‖_F ≤ 1e-9 · ‖A‖_F`.
pub fn hermitian_eig(a: &CMatrix) -> Result<HermitianEigen> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: a.ncols(),
        });
    }
    let asym = frobenius(&(a - a.adjoint()));
    let tol = HERMITIAN_REL_TOL * frobenius(a).max(f64::MIN_POSITIVE);
    if asym > tol {
        return Err(Error::NotHermitian {
            asymmetry: asym,
            tolerance: tol,
        });
    }
    let sym = (a + a.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let n = a.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// On-disk matrix: `dim` plus row-major `[re, im]` pairs.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let dim = m.nrows();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let z = m[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        Self { dim, entries }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.entries.len() != self.dim * self.dim {
            return Err(Error::schema(
                "entries",
                format!(
                    "expected {} [re, im] pairs for dim {}, found {}",
                    self.dim * self.dim,
                    self.dim,
                    self.entries.len()
                ),
            ));
        }
        if self.entries.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::schema("entries", "non-finite value"));
        }
        Ok(CMatrix::from_row_iterator(
            self.dim,
            self.dim,
            self.entries.iter().map(|&[re, im]| C64::new(re, im)),
        ))
    }
}

#[cfg(test)]
pub(crate) mod test_util {
    pub use crate::corpus::{random_hermitian, random_matrix, random_state};
}
