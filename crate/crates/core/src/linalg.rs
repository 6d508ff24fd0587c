//! Dense complex linear algebra helpers shared by every module.
//!
//! All matrix functions of Hermitian operators go through a spectral
//! decomposition of the re-symmetrized matrix `(M + M†)/2`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

#[inline]
pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn zeros(n: usize) -> CMatrix {
    CMatrix::zeros(n, n)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn diagonal(values: &[f64]) -> CMatrix {
    let n = values.len();
    let mut m = CMatrix::zeros(n, n);
    for (i, &v) in values.iter().enumerate() {
        m[(i, i)] = c(v);
    }
    m
}

/// `(M + M†)/2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c(0.5)
}

/// Largest absolute entry.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest absolute entry of `M − M†`.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// `[A, B] = AB − BA`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Spectral decomposition of the Hermitian part of `m`.
///
/// Eigenvalues are returned in ascending order with matching eigenvector
/// columns.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = hermitize(m).symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn eigvalsh(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = hermitize(m).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `f(M)` for Hermitian `M`, applied through its eigenvalues.
pub fn hermitian_function(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (values, vectors) = eigh(m);
    let mut scaled = vectors.clone();
    for (j, &lambda) in values.iter().enumerate() {
        let fj = c(f(lambda));
        scaled.column_mut(j).iter_mut().for_each(|z| *z *= fj);
    }
    scaled * vectors.adjoint()
}

/// Sum of singular values.
pub fn trace_norm(m: &CMatrix) -> f64 {
    m.clone().singular_values().iter().sum()
}

/// Natural logarithm of a determinant, `ln|det| + i·arg`, from an LU
/// factorization. The imaginary part is the accumulated phase and is only
/// meaningful modulo 2π.
pub fn log_det(m: &CMatrix) -> Complex64 {
    let n = m.nrows();
    let lu = m.clone().lu();
    let u = lu.u();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        acc += u[(i, i)].ln();
    }
    let sign: Complex64 = lu.p().determinant();
    if sign.re < 0.0 {
        acc += Complex64::new(0.0, std::f64::consts::PI);
    }
    acc
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn outer(ket: &CVector, bra: &CVector) -> CMatrix {
    ket * bra.adjoint()
}
