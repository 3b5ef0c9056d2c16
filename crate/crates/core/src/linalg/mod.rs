//! Dense real linear algebra used throughout the crate.

pub mod kron;
mod lu;
mod matrix;
pub mod norms;
mod qr;
mod svd;
mod triangular;

pub use kron::{diag_of, kron, vec, vec_permutation};
pub use lu::lu_solve;
pub use matrix::{DenseMatrix, DenseVector};
pub use norms::{vec_norm1, vec_norm2, vec_norm_inf};
pub use qr::{householder_qr, right_triangularize_rows};
pub use svd::{numerical_rank, pseudo_inverse, singular_values, svd, Svd};
pub use triangular::{rank_tolerance, triangular_solve, Triangle};

pub(crate) use triangular::{check_diagonal, triangular_solve_unchecked};
