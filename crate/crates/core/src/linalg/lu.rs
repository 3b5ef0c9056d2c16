use super::matrix::{DenseMatrix, DenseVector};
use super::triangular::rank_tolerance;
use crate::error::{LseError, Result};
use crate::scalar::Real;

/// Solves the square system `M z = rhs` by Gaussian elimination with partial
/// pivoting. A pivot at or below `n * eps * ‖M‖_∞` is reported as singular.
pub fn lu_solve<T: Real>(m: &DenseMatrix<T>, rhs: &[T]) -> Result<DenseVector<T>> {
    let n = m.rows();
    if m.cols() != n || rhs.len() != n {
        return Err(LseError::dim(
            "lu_solve",
            format!("{}x{} matrix with rhs of length {}", m.rows(), m.cols(), rhs.len()),
        ));
    }
    let tol = rank_tolerance(n, n, m.norm_inf());
    let mut a = m.clone();
    let mut b = rhs.to_vec();

    for k in 0..n {
        let (piv, pmax) = (k..n)
            .map(|i| (i, a[(i, k)].abs()))
            .fold((k, T::zero()), |best, cur| if cur.1 > best.1 { cur } else { best });
        if !(pmax > tol) {
            return Err(LseError::Singular { op: "lu_solve" });
        }
        if piv != k {
            for j in 0..n {
                let tmp = a[(k, j)];
                a[(k, j)] = a[(piv, j)];
                a[(piv, j)] = tmp;
            }
            b.swap(k, piv);
        }
        let akk = a[(k, k)];
        for i in k + 1..n {
            let f = a[(i, k)] / akk;
            if f == T::zero() {
                continue;
            }
            a[(i, k)] = T::zero();
            for j in k + 1..n {
                let akj = a[(k, j)];
                a[(i, j)] -= f * akj;
            }
            let bk = b[k];
            b[i] -= f * bk;
        }
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= a[(i, j)] * b[j];
        }
        b[i] = s / a[(i, i)];
    }
    Ok(b.into())
}
