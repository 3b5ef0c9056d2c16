//! Matrix-free applications of `K = (A P)†`, `K Kᵀ` and `C_A† = (I − K A) C†`
//! through the generalized QR factors:
//!
//! ```text
//!     K     = Q [[0, 0], [0, L22⁻¹]] Uᵀ
//!     K Kᵀ  = Q [[0, 0], [0, L22⁻¹ L22⁻ᵀ]] Qᵀ
//!     C_A†  = Q [I; −L22⁻¹ L21] S⁻¹
//! ```
//!
//! Each application costs a couple of orthogonal multiplies and triangular
//! solves; none of the operators is ever formed.

use super::gqr::GqrFactorization;
use crate::linalg::{DenseMatrix, DenseVector};
use crate::scalar::Real;

impl<T: Real> GqrFactorization<T> {
    fn lift_trailing(&self, tail: &[T]) -> DenseVector<T> {
        let mut y = vec![T::zero(); self.p()];
        y.extend_from_slice(tail);
        self.q().mul_vec(&y)
    }

    /// `K v` for `v ∈ ℝᵐ`.
    pub fn apply_k(&self, v: &[T]) -> DenseVector<T> {
        let utv = self.u().tr_mul_vec(v);
        let top = self.m() + self.p() - self.n();
        self.lift_trailing(&self.solve_l22(&utv[top..], false))
    }

    /// `Kᵀ w` for `w ∈ ℝⁿ`.
    pub fn apply_kt(&self, w: &[T]) -> DenseVector<T> {
        let qtw = self.q().tr_mul_vec(w);
        let z = self.solve_l22(&qtw[self.p()..], true);
        let mut full = vec![T::zero(); self.m() - z.len()];
        full.extend_from_slice(&z);
        self.u().mul_vec(&full)
    }

    /// `K Kᵀ w` for `w ∈ ℝⁿ`.
    pub fn apply_kkt(&self, w: &[T]) -> DenseVector<T> {
        let qtw = self.q().tr_mul_vec(w);
        let z = self.solve_l22(&qtw[self.p()..], true);
        self.lift_trailing(&self.solve_l22(&z, false))
    }

    /// `C_A† v` for `v ∈ ℝᵖ`.
    pub fn apply_cadag(&self, v: &[T]) -> DenseVector<T> {
        let w = self.solve_s(v, false);
        let l21w = self.l21().mul_vec(&w);
        let tail = self.solve_l22(&l21w, false);
        let y = w.concat(&tail.map(|t| -t));
        self.q().mul_vec(&y)
    }

    /// `(C_A†)ᵀ w` for `w ∈ ℝⁿ`.
    pub fn apply_cadag_t(&self, w: &[T]) -> DenseVector<T> {
        let z = self.q().tr_mul_vec(w);
        let p = self.p();
        let g = self.solve_l22(&z[p..], true);
        let corr = self.l21().tr_mul_vec(&g);
        let head: Vec<T> = z[..p].iter().zip(corr.iter()).map(|(&a, &b)| a - b).collect();
        self.solve_s(&head, true)
    }

    /// Dense `K` (`n x m`), assembled column by column.
    pub fn dense_k(&self) -> DenseMatrix<T> {
        assemble(self.n(), self.m(), |e| self.apply_k(e))
    }

    /// Dense `K Kᵀ` (`n x n`).
    pub fn dense_kkt(&self) -> DenseMatrix<T> {
        assemble(self.n(), self.n(), |e| self.apply_kkt(e))
    }

    /// Dense `C_A†` (`n x p`).
    pub fn dense_cadag(&self) -> DenseMatrix<T> {
        assemble(self.n(), self.p(), |e| self.apply_cadag(e))
    }
}

fn assemble<T: Real>(
    rows: usize,
    cols: usize,
    apply: impl Fn(&[T]) -> DenseVector<T>,
) -> DenseMatrix<T> {
    let mut out = DenseMatrix::zeros(rows, cols);
    for j in 0..cols {
        let e = DenseVector::basis(cols, j);
        out.col_mut(j).copy_from_slice(&apply(&e));
    }
    out
}
