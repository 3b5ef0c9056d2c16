use super::matrix::{DenseMatrix, DenseVector};
use crate::error::{LseError, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Triangle {
    Lower,
    Upper,
}

/// Pivot threshold `max(rows, cols) * eps * scale`.
pub fn rank_tolerance<T: Real>(rows: usize, cols: usize, scale: T) -> T {
    T::from_count(rows.max(cols)) * T::epsilon() * scale
}

/// Fails if some diagonal entry of the square matrix `t` is not above
/// `tolerance`, returning the offending index.
pub(crate) fn check_diagonal<T: Real>(t: &DenseMatrix<T>, tolerance: T) -> Result<()> {
    for i in 0..t.rows() {
        let d = t[(i, i)].abs();
        // `!(d > tol)` also catches NaN pivots.
        if !(d > tolerance) {
            return Err(LseError::SingularTriangular {
                index: i,
                magnitude: d.to_f64_lossy(),
                tolerance: tolerance.to_f64_lossy(),
            });
        }
    }
    Ok(())
}

/// Solves `T y = rhs` (or `Tᵀ y = rhs` when `transpose` is set) for square
/// triangular `T`. Only the triangle named by `shape` is read.
pub fn triangular_solve<T: Real>(
    t: &DenseMatrix<T>,
    rhs: &[T],
    shape: Triangle,
    transpose: bool,
) -> Result<DenseVector<T>> {
    let n = t.rows();
    if t.cols() != n || rhs.len() != n {
        return Err(LseError::dim(
            "triangular_solve",
            format!("{}x{} matrix with rhs of length {}", t.rows(), t.cols(), rhs.len()),
        ));
    }
    check_diagonal(t, rank_tolerance(n, n, t.norm_inf()))?;
    Ok(triangular_solve_unchecked(t, rhs, shape, transpose))
}

/// Same as [`triangular_solve`] without the singularity check; callers must
/// have validated the diagonal already.
pub(crate) fn triangular_solve_unchecked<T: Real>(
    t: &DenseMatrix<T>,
    rhs: &[T],
    shape: Triangle,
    transpose: bool,
) -> DenseVector<T> {
    let n = t.rows();
    let mut y = rhs.to_vec();
    let at = |i: usize, j: usize| if transpose { t[(j, i)] } else { t[(i, j)] };
    let forward = matches!((shape, transpose), (Triangle::Lower, false) | (Triangle::Upper, true));
    if forward {
        for i in 0..n {
            let mut s = y[i];
            for j in 0..i {
                s -= at(i, j) * y[j];
            }
            y[i] = s / at(i, i);
        }
    } else {
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                s -= at(i, j) * y[j];
            }
            y[i] = s / at(i, i);
        }
    }
    y.into()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_returns_rhs() {
        let v = [1.5, -2.0, 7.0];
        let y = triangular_solve(&DenseMatrix::identity(3), &v, Triangle::Lower, false).unwrap();
        assert_eq!(&y[..], &v);
    }

    #[test]
    fn hand_solvable_lower() {
        let t = DenseMatrix::<f64>::from_rows(&[[2.0, 0.0], [1.0, 3.0]]);
        let y = triangular_solve(&t, &[2.0, 4.0], Triangle::Lower, false).unwrap();
        assert_eq!(&y[..], &[1.0, 1.0]);
        let y = triangular_solve(&t, &[3.0, 3.0], Triangle::Lower, true).unwrap();
        assert_eq!(&y[..], &[1.0, 1.0]);
    }

    #[test]
    fn upper_and_transposed_upper() {
        let t = DenseMatrix::<f64>::from_rows(&[[1.0, 2.0, -1.0], [0.0, 4.0, 3.0], [0.0, 0.0, 5.0]]);
        let x = [1.0, -2.0, 0.5];
        let b = t.mul_vec(&x);
        let y = triangular_solve(&t, &b, Triangle::Upper, false).unwrap();
        assert!(y.max_abs_diff(&x) < 1e-15);
        let bt = t.tr_mul_vec(&x);
        let y = triangular_solve(&t, &bt, Triangle::Upper, true).unwrap();
        assert!(y.max_abs_diff(&x) < 1e-15);
    }

    #[test]
    fn tiny_pivot_is_singular() {
        let t = DenseMatrix::<f64>::diag_of(&[1e-20, 1.0]);
        let err = triangular_solve(&t, &[1.0, 1.0], Triangle::Lower, false).unwrap_err();
        assert!(matches!(err, LseError::SingularTriangular { index: 0, .. }));
        let z = DenseMatrix::<f64>::zeros(2, 2);
        assert!(triangular_solve(&z, &[0.0, 0.0], Triangle::Upper, false).is_err());
    }

    #[test]
    fn empty_system() {
        let y = triangular_solve(&DenseMatrix::<f64>::zeros(0, 0), &[], Triangle::Lower, false).unwrap();
        assert!(y.is_empty());
    }
}
