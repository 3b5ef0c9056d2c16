//! Singular value decomposition by one-sided (Hestenes) Jacobi rotations.

use super::matrix::{dot, DenseMatrix};
use super::norms::vec_norm2;
use super::triangular::rank_tolerance;
use crate::scalar::Real;

const MAX_SWEEPS: usize = 80;

/// Thin SVD `M = U diag(σ) Vᵀ` with singular values in descending order.
#[derive(Clone, Debug)]
pub struct Svd<T> {
    /// `rows x k` with orthonormal columns for every nonzero singular value.
    pub u: DenseMatrix<T>,
    pub singular_values: Vec<T>,
    /// `cols x k` with orthonormal columns.
    pub v: DenseMatrix<T>,
}

pub fn svd<T: Real>(m: &DenseMatrix<T>) -> Svd<T> {
    if m.rows() < m.cols() {
        let t = svd_tall(&m.transpose());
        return Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        };
    }
    svd_tall(m)
}

pub fn singular_values<T: Real>(m: &DenseMatrix<T>) -> Vec<T> {
    svd(m).singular_values
}

fn svd_tall<T: Real>(m: &DenseMatrix<T>) -> Svd<T> {
    let (rows, cols) = m.shape();
    let mut w = m.clone();
    let mut v = DenseMatrix::identity(cols);
    let eps = T::epsilon();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = dot(w.col(p), w.col(p));
                let beta = dot(w.col(q), w.col(q));
                let gamma = dot(w.col(p), w.col(q));
                if gamma == T::zero() || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let two = T::one() + T::one();
                let zeta = (beta - alpha) / (two * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(T, usize)> = (0..cols).map(|j| (vec_norm2(w.col(j)), j)).collect();
    order.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));

    let mut u = DenseMatrix::zeros(rows, cols);
    let mut v_sorted = DenseMatrix::zeros(cols, cols);
    let mut sigma = Vec::with_capacity(cols);
    for (dst, &(s, j)) in order.iter().enumerate() {
        sigma.push(s);
        if s > T::zero() {
            for (o, &x) in u.col_mut(dst).iter_mut().zip(w.col(j)) {
                *o = x / s;
            }
        }
        v_sorted.col_mut(dst).copy_from_slice(v.col(j));
    }
    Svd {
        u,
        singular_values: sigma,
        v: v_sorted,
    }
}

fn rotate<T: Real>(m: &mut DenseMatrix<T>, p: usize, q: usize, c: T, s: T) {
    for i in 0..m.rows() {
        let a = m[(i, p)];
        let b = m[(i, q)];
        m[(i, p)] = c * a - s * b;
        m[(i, q)] = s * a + c * b;
    }
}

/// Moore–Penrose pseudo-inverse. Singular values at or below
/// `max(rows, cols) * eps * σ_max` are treated as zero.
pub fn pseudo_inverse<T: Real>(m: &DenseMatrix<T>) -> DenseMatrix<T> {
    let (rows, cols) = m.shape();
    let Svd {
        u,
        singular_values,
        v,
    } = svd(m);
    let mut out = DenseMatrix::zeros(cols, rows);
    let Some(&smax) = singular_values.first() else {
        return out;
    };
    let tol = rank_tolerance(rows, cols, smax);
    for (k, &s) in singular_values.iter().enumerate() {
        if !(s > tol) {
            continue;
        }
        let inv = T::one() / s;
        for j in 0..rows {
            let ujk = u[(j, k)] * inv;
            if ujk == T::zero() {
                continue;
            }
            for i in 0..cols {
                out[(i, j)] += v[(i, k)] * ujk;
            }
        }
    }
    out
}

/// Numerical rank under the same threshold as [`pseudo_inverse`].
pub fn numerical_rank<T: Real>(m: &DenseMatrix<T>) -> usize {
    let s = singular_values(m);
    let Some(&smax) = s.first() else { return 0 };
    let tol = rank_tolerance(m.rows(), m.cols(), smax);
    s.iter().filter(|&&x| x > tol).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_penrose(m: &DenseMatrix<f64>, x: &DenseMatrix<f64>) {
        let tol = 1e-10 * m.norm_fro().max(1.0) * x.norm_fro().max(1.0);
        let mxm = &(m * x) * m;
        assert!(mxm.max_abs_diff(m) <= tol, "M X M = M");
        let xmx = &(x * m) * x;
        assert!(xmx.max_abs_diff(x) <= tol, "X M X = X");
        let mx = m * x;
        assert!(mx.max_abs_diff(&mx.transpose()) <= tol, "M X symmetric");
        let xm = x * m;
        assert!(xm.max_abs_diff(&xm.transpose()) <= tol, "X M symmetric");
    }

    #[test]
    fn reconstruction_and_ordering() {
        let m = DenseMatrix::<f64>::from_rows(&[[2.0, -1.0, 0.5], [0.3, 4.0, 1.0], [1.0, 1.0, 1.0], [0.0, -2.0, 3.0]]);
        let s = svd(&m);
        assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1]));
        let us = DenseMatrix::from_fn(4, 3, |i, j| s.u[(i, j)] * s.singular_values[j]);
        assert!((&us * &s.v.transpose()).max_abs_diff(&m) < 1e-13);
        let wide = m.transpose();
        let sw = svd(&wide);
        for (a, b) in sw.singular_values.iter().zip(&s.singular_values) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn pinv_trivial_cases() {
        let i3 = DenseMatrix::<f64>::identity(3);
        assert!(pseudo_inverse(&i3).max_abs_diff(&i3) < 1e-15);
        assert_eq!(pseudo_inverse(&DenseMatrix::<f64>::zeros(2, 3)), DenseMatrix::zeros(3, 2));
        let d = DenseMatrix::<f64>::from_rows(&[[2.0, 0.0], [0.0, 0.0]]);
        assert_eq!(pseudo_inverse(&d), DenseMatrix::<f64>::from_rows(&[[0.5, 0.0], [0.0, 0.0]]));
    }

    #[test]
    fn pinv_penrose_identities() {
        let full = DenseMatrix::<f64>::from_rows(&[[1.0, 2.0], [3.0, 4.0], [5.0, 6.5]]);
        let x = pseudo_inverse(&full);
        check_penrose(&full, &x);
        assert!(pseudo_inverse(&x).max_abs_diff(&full) <= 1e-10 * full.norm_fro());

        // rank one
        let r1 = DenseMatrix::<f64>::from_rows(&[[1.0, 2.0, 3.0], [2.0, 4.0, 6.0]]);
        let x1 = pseudo_inverse(&r1);
        check_penrose(&r1, &x1);
        assert_eq!(numerical_rank(&r1), 1);
    }
}
