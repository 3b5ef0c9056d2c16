//! Kronecker product and `vec` calculus helpers.

use super::matrix::{DenseMatrix, DenseVector};
use crate::scalar::Real;

/// `A ⊗ B = [a_ij B]`, of shape `(m p) x (n q)`.
pub fn kron<T: Real>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> DenseMatrix<T> {
    let (m, n) = a.shape();
    let (p, q) = b.shape();
    let mut out = DenseMatrix::zeros(m * p, n * q);
    for j in 0..n {
        for i in 0..m {
            let aij = a[(i, j)];
            if aij == T::zero() {
                continue;
            }
            for l in 0..q {
                for k in 0..p {
                    out[(i * p + k, j * q + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Column stacking.
pub fn vec<T: Real>(m: &DenseMatrix<T>) -> DenseVector<T> {
    DenseVector::from_slice(m.as_slice())
}

/// `diag(v)`; with `v = vec(A)` this is `D_A`.
pub fn diag_of<T: Real>(v: &[T]) -> DenseMatrix<T> {
    DenseMatrix::diag_of(v)
}

/// Vec-permutation matrix `Π` of order `mn` with `Π vec(M) = vec(Mᵀ)` for
/// every `m x n` matrix `M`.
pub fn vec_permutation<T: Real>(m: usize, n: usize) -> DenseMatrix<T> {
    let mut pi = DenseMatrix::zeros(m * n, m * n);
    for i in 0..m {
        for j in 0..n {
            // M[i,j] sits at j*m+i in vec(M) and at i*n+j in vec(Mᵀ).
            pi[(i * n + j, j * m + i)] = T::one();
        }
    }
    pi
}
