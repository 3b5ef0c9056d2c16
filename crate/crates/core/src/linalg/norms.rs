use super::matrix::{DenseMatrix, DenseVector};
use super::svd::singular_values;
use crate::scalar::Real;

pub fn vec_norm1<T: Real>(v: &[T]) -> T {
    v.iter().map(|x| x.abs()).sum()
}

pub fn vec_norm_inf<T: Real>(v: &[T]) -> T {
    v.iter().map(|x| x.abs()).fold(T::zero(), T::max)
}

/// Euclidean norm with scaling against overflow and underflow.
pub fn vec_norm2<T: Real>(v: &[T]) -> T {
    let scale = vec_norm_inf(v);
    if scale == T::zero() || !scale.is_finite() {
        return scale;
    }
    let ssq: T = v.iter().map(|&x| (x / scale) * (x / scale)).sum();
    scale * ssq.sqrt()
}

impl<T: Real> DenseVector<T> {
    pub fn norm1(&self) -> T {
        vec_norm1(self)
    }

    pub fn norm2(&self) -> T {
        vec_norm2(self)
    }

    pub fn norm_inf(&self) -> T {
        vec_norm_inf(self)
    }
}

impl<T: Real> DenseMatrix<T> {
    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> T {
        (0..self.cols())
            .map(|j| vec_norm1(self.col(j)))
            .fold(T::zero(), T::max)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> T {
        let mut sums = vec![T::zero(); self.rows()];
        for j in 0..self.cols() {
            for (s, &v) in sums.iter_mut().zip(self.col(j)) {
                *s += v.abs();
            }
        }
        sums.into_iter().fold(T::zero(), T::max)
    }

    pub fn norm_fro(&self) -> T {
        vec_norm2(self.as_slice())
    }

    /// Largest singular value.
    pub fn norm_spectral(&self) -> T {
        singular_values(self).first().copied().unwrap_or_else(T::zero)
    }

    /// Two-norm condition number `σ_max / σ_min` of a square matrix
    /// (infinite when singular).
    pub fn cond2(&self) -> T {
        let s = singular_values(self);
        match (s.first(), s.last()) {
            (Some(&hi), Some(&lo)) if lo > T::zero() => hi / lo,
            (Some(_), Some(_)) => T::infinity(),
            _ => T::zero(),
        }
    }
}
