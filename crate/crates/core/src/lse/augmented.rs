use super::LseProblem;
use crate::error::{LseError, Result};
use crate::linalg::{lu_solve, DenseMatrix, DenseVector};
use crate::scalar::Real;

/// The saddle-point matrix
///
/// ```text
///     [[0,  0,  C],
///      [0,  Iₘ, A],
///      [Cᵀ, Aᵀ, 0]]
/// ```
///
/// acting on `(λ, r, x)`, of order `p + m + n`.
pub fn build_augmented<T: Real>(problem: &LseProblem<T>) -> DenseMatrix<T> {
    let (m, n, p) = (problem.m(), problem.n(), problem.p());
    let mut aug = DenseMatrix::zeros(p + m + n, p + m + n);
    aug.set_block(0, p + m, problem.c());
    aug.set_block(p, p, &DenseMatrix::identity(m));
    aug.set_block(p, p + m, problem.a());
    aug.set_block(p + m, 0, &problem.c().transpose());
    aug.set_block(p + m, p, &problem.a().transpose());
    aug
}

/// `(λ, r, x)` read off the augmented system.
#[derive(Clone, Debug, PartialEq)]
pub struct AugmentedSolution<T> {
    pub lambda: DenseVector<T>,
    pub r: DenseVector<T>,
    pub x: DenseVector<T>,
}

/// Solves the LSE problem through a dense LU of the augmented matrix.
pub fn augmented_solve<T: Real>(problem: &LseProblem<T>) -> Result<AugmentedSolution<T>> {
    let (m, n, p) = (problem.m(), problem.n(), problem.p());
    let aug = build_augmented(problem);
    let rhs = problem
        .d()
        .concat(problem.b())
        .concat(&vec![T::zero(); n]);
    let z = lu_solve(&aug, &rhs).map_err(|e| match e {
        LseError::Singular { .. } => LseError::Singular { op: "augmented_solve" },
        other => other,
    })?;
    Ok(AugmentedSolution {
        lambda: z.segment(0, p),
        r: z.segment(p, m),
        x: z.segment(p + m, n),
    })
}
