//! Equality-constrained least squares
//!
//! ```text
//!     minimize ‖A x − b‖₂  subject to  C x = d
//! ```
//!
//! solved through the generalized QR factorization
//! `Uᵀ A Q = [[L11, 0], [L21, L22]]`, `C Q = [S, 0]`.

mod augmented;
mod gqr;
mod operators;

pub use augmented::{augmented_solve, build_augmented, AugmentedSolution};
pub use gqr::{gqr_factorize, solve, GqrFactorization, LseSolution};

use crate::error::{LseError, Result};
use crate::linalg::{DenseMatrix, DenseVector};
use crate::scalar::Real;

/// Problem data `(A, C, b, d)` with `A: m x n`, `C: p x n`.
#[derive(Clone, Debug, PartialEq)]
pub struct LseProblem<T> {
    a: DenseMatrix<T>,
    c: DenseMatrix<T>,
    b: DenseVector<T>,
    d: DenseVector<T>,
}

impl<T: Real> LseProblem<T> {
    /// Validates shapes, finiteness and both rank conditions
    /// `rank(C) = p`, `rank([A; C]) = n`.
    pub fn new(
        a: DenseMatrix<T>,
        c: DenseMatrix<T>,
        b: DenseVector<T>,
        d: DenseVector<T>,
    ) -> Result<Self> {
        let problem = Self::new_unverified(a, c, b, d)?;
        gqr_factorize(&problem)?;
        Ok(problem)
    }

    /// Validates shapes and finiteness only. Rank deficiency surfaces later
    /// from the solvers.
    pub fn new_unverified(
        a: DenseMatrix<T>,
        c: DenseMatrix<T>,
        b: DenseVector<T>,
        d: DenseVector<T>,
    ) -> Result<Self> {
        let (m, n) = a.shape();
        let p = c.rows();
        if c.cols() != n {
            return Err(LseError::dim(
                "LseProblem",
                format!("A has {n} columns but C has {}", c.cols()),
            ));
        }
        if b.len() != m || d.len() != p {
            return Err(LseError::dim(
                "LseProblem",
                format!("b has length {} (want {m}), d has length {} (want {p})", b.len(), d.len()),
            ));
        }
        if !(n >= p && m + p >= n) {
            return Err(LseError::dim(
                "LseProblem",
                format!("need m + p >= n >= p, got m={m}, n={n}, p={p}"),
            ));
        }
        if !a.is_finite() {
            return Err(LseError::NonFinite { what: "A", index: first_bad(a.as_slice()) });
        }
        if !c.is_finite() {
            return Err(LseError::NonFinite { what: "C", index: first_bad(c.as_slice()) });
        }
        if !b.is_finite() {
            return Err(LseError::NonFinite { what: "b", index: first_bad(&b) });
        }
        if !d.is_finite() {
            return Err(LseError::NonFinite { what: "d", index: first_bad(&d) });
        }
        Ok(LseProblem { a, c, b, d })
    }

    pub fn a(&self) -> &DenseMatrix<T> {
        &self.a
    }

    pub fn c(&self) -> &DenseMatrix<T> {
        &self.c
    }

    pub fn b(&self) -> &DenseVector<T> {
        &self.b
    }

    pub fn d(&self) -> &DenseVector<T> {
        &self.d
    }

    /// Rows of `A`.
    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    /// Rows of `C`.
    pub fn p(&self) -> usize {
        self.c.rows()
    }

    /// Same data with `(b, d)` replaced.
    pub fn with_rhs(&self, b: DenseVector<T>, d: DenseVector<T>) -> Result<Self> {
        Self::new_unverified(self.a.clone(), self.c.clone(), b, d)
    }

    /// Problem with every data entry perturbed: `(A + dA, C + dC, b + db, d + dd)`.
    pub fn perturbed(
        &self,
        da: &DenseMatrix<T>,
        dc: &DenseMatrix<T>,
        db: &[T],
        dd: &[T],
    ) -> Result<Self> {
        if da.shape() != self.a.shape() || dc.shape() != self.c.shape() {
            return Err(LseError::dim("LseProblem::perturbed", "perturbation shape mismatch"));
        }
        if db.len() != self.b.len() || dd.len() != self.d.len() {
            return Err(LseError::dim("LseProblem::perturbed", "perturbation length mismatch"));
        }
        Self::new_unverified(&self.a + da, &self.c + dc, &self.b + db, &self.d + dd)
    }

    pub fn cast<U: Real>(&self) -> LseProblem<U> {
        LseProblem {
            a: self.a.cast(),
            c: self.c.cast(),
            b: self.b.cast(),
            d: self.d.cast(),
        }
    }
}

fn first_bad<T: Real>(v: &[T]) -> usize {
    v.iter().position(|x| !x.is_finite()).unwrap_or(0)
}
