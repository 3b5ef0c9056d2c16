//! Solving equality-constrained linear least squares problems
//! `min ‖Ax − b‖₂ subject to Cx = d` and measuring how sensitive a linear
//! function `Lx` of the solution is to perturbations in `A`, `C`, `b` and `d`.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix the scalar to `f64`.
//!
//! ```
//! use lse_cond::{condition_report, solve, Matrix, NormwiseWeights, Problem, Selection, Vector};
//!
//! let a = Matrix::from_rows(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 1.0, 1.0]]);
//! let c = Matrix::from_rows(&[[1.0, -1.0, 0.0]]);
//! let b = Vector::from(vec![1.0, 2.0, 3.0, 4.0]);
//! let d = Vector::from(vec![0.5]);
//! let s = solve(&Problem::new(a, c, b, d)?)?;
//! assert!((s.x()[0] - s.x()[1] - 0.5).abs() < 1e-14);
//!
//! let report = condition_report(&s, &Selection::identity(3), NormwiseWeights::default())?;
//! assert!(report.exact.kappa_inf_rel <= report.estimated.kappa_inf_upper.total * (1.0 + 1e-12));
//! # Ok::<(), lse_cond::LseError>(())
//! ```

pub mod conditioning;
pub mod error;
pub mod lab;
pub mod linalg;
pub mod lse;
pub mod scalar;
pub mod serde_ext;

pub use conditioning::{
    condition_report, ConditionReport, NormwiseWeights, PerturbationDirection, SelectionMatrix,
};
pub use error::{LseError, RankCondition, Result};
pub use linalg::{DenseMatrix, DenseVector};
pub use lse::{
    augmented_solve, build_augmented, gqr_factorize, solve, GqrFactorization, LseProblem,
    LseSolution,
};
pub use scalar::Real;

pub type Matrix = DenseMatrix<f64>;
pub type Vector = DenseVector<f64>;
pub type Problem = LseProblem<f64>;
pub type Solution = LseSolution<f64>;
pub type Selection = SelectionMatrix<f64>;

pub type Matrix32 = DenseMatrix<f32>;
pub type Vector32 = DenseVector<f32>;
pub type Problem32 = LseProblem<f32>;
pub type Solution32 = LseSolution<f32>;
pub type Selection32 = SelectionMatrix<f32>;
