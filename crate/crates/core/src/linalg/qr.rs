//! Householder orthogonal triangularization.

use super::matrix::DenseMatrix;
use crate::error::{LseError, Result};
use crate::scalar::Real;

use super::norms::vec_norm2;

/// Full QR factorization `M = Q R` by Householder reflections.
///
/// `Q` is `rows x rows` orthogonal, `R` is `rows x cols` upper triangular with
/// a nonnegative diagonal. Requires `rows >= cols`.
pub fn householder_qr<T: Real>(m: &DenseMatrix<T>) -> Result<(DenseMatrix<T>, DenseMatrix<T>)> {
    let (rows, cols) = m.shape();
    if rows < cols {
        return Err(LseError::dim(
            "householder_qr",
            format!("need rows >= cols, got {rows}x{cols}"),
        ));
    }
    let mut r = m.clone();
    let mut reflectors: Vec<Option<(Vec<T>, T)>> = Vec::with_capacity(cols);

    for k in 0..cols {
        let x = &r.col(k)[k..];
        let alpha = vec_norm2(x);
        // Nothing to annihilate below the diagonal: skip the reflection.
        if alpha == T::zero() || x[1..].iter().all(|&v| v == T::zero()) {
            reflectors.push(None);
            continue;
        }
        let x0 = x[0];
        let sign = if x0 >= T::zero() { T::one() } else { -T::one() };
        let mut v = x.to_vec();
        v[0] = x0 + sign * alpha;
        let vtv: T = v.iter().map(|&a| a * a).sum();
        let beta = (T::one() + T::one()) / vtv;

        for j in k..cols {
            let col = &mut r.col_mut(j)[k..];
            let s = beta * super::matrix::dot(&v, col);
            for (c, &vi) in col.iter_mut().zip(&v) {
                *c -= s * vi;
            }
        }
        let col = r.col_mut(k);
        col[k] = -sign * alpha;
        for c in &mut col[k + 1..] {
            *c = T::zero();
        }
        reflectors.push(Some((v, beta)));
    }

    // Accumulate Q = H_0 H_1 ... H_{cols-1} applied to the identity.
    let mut q = DenseMatrix::identity(rows);
    for (k, refl) in reflectors.iter().enumerate().rev() {
        let Some((v, beta)) = refl else { continue };
        for j in 0..rows {
            let col = &mut q.col_mut(j)[k..];
            let s = *beta * super::matrix::dot(v, col);
            if s == T::zero() {
                continue;
            }
            for (c, &vi) in col.iter_mut().zip(v) {
                *c -= s * vi;
            }
        }
    }

    for i in 0..cols {
        if r[(i, i)] < T::zero() {
            for j in i..cols {
                r[(i, j)] = -r[(i, j)];
            }
            for c in q.col_mut(i) {
                *c = -*c;
            }
        }
    }
    Ok((q, r))
}

/// Orthogonal column compression of a wide matrix: `C Q = [S 0]` with `S`
/// lower triangular (`p x p`) and `Q` orthogonal (`n x n`). Requires `p <= n`.
pub fn right_triangularize_rows<T: Real>(
    c: &DenseMatrix<T>,
) -> Result<(DenseMatrix<T>, DenseMatrix<T>)> {
    let (p, n) = c.shape();
    if p > n {
        return Err(LseError::dim(
            "right_triangularize_rows",
            format!("need p <= n, got {p}x{n}"),
        ));
    }
    let (q, r) = householder_qr(&c.transpose())?;
    let s = r.block(0, 0, p, p).transpose();
    Ok((q, s))
}
