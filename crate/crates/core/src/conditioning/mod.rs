//! Mixed and componentwise condition numbers of `L x`, where `x` solves an
//! LSE problem and `L` selects a linear function of the solution.

pub mod estimate;
pub mod exact;

use serde::{Deserialize, Serialize};

use crate::error::{LseError, Result};
use crate::linalg::{DenseMatrix, DenseVector};
use crate::lse::{build_augmented, LseSolution};
use crate::scalar::Real;

pub use estimate::{
    kappa_c_upper, kappa_inf_upper, one_norm_estimate, one_norm_estimate_with, LinearOperator,
    OneNormEstimate, TermEstimate, TermSummary, UpperBoundReport, UpperBoundSummary, MAX_ITERATIONS,
};
pub use exact::{
    adjoint_apply, build_hj, frechet_apply, kappa1_cox_higham, kappa2_li_wang, kappa_2_bound,
    kappa_c, kappa_inf, kappa_inf_rel, kappa_numerator, ComponentwiseKappa, DerivativeMatrices,
    NormwiseWeights, PerturbationDirection,
};

/// The `k x n` matrix `L` defining the quantity of interest `L x`.
#[derive(Clone, Debug, PartialEq)]
pub struct SelectionMatrix<T>(DenseMatrix<T>);

impl<T: Real> SelectionMatrix<T> {
    pub fn new(l: DenseMatrix<T>) -> Result<Self> {
        if l.rows() == 0 {
            return Err(LseError::InvalidParameter("selection matrix needs k >= 1 rows".into()));
        }
        if l.rows() > l.cols() {
            return Err(LseError::InvalidParameter(format!(
                "selection matrix must have k <= n, got {}x{}",
                l.rows(),
                l.cols()
            )));
        }
        if !l.is_finite() {
            return Err(LseError::NonFinite { what: "L", index: 0 });
        }
        Ok(SelectionMatrix(l))
    }

    pub fn identity(n: usize) -> Self {
        SelectionMatrix(DenseMatrix::identity(n))
    }

    /// 0/1 rows picking the listed (0-based) solution components.
    pub fn from_indices(indices: &[usize], n: usize) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(LseError::InvalidParameter(format!(
                "selection index {bad} out of range for n = {n}"
            )));
        }
        let mut l = DenseMatrix::zeros(indices.len(), n);
        for (row, &i) in indices.iter().enumerate() {
            l[(row, i)] = T::one();
        }
        Self::new(l)
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.rows()
    }

    pub fn n(&self) -> usize {
        self.0.cols()
    }

    pub fn apply(&self, x: &[T]) -> DenseVector<T> {
        self.0.mul_vec(x)
    }

    pub(crate) fn check_against(&self, n: usize) -> Result<()> {
        if self.n() != n {
            return Err(LseError::dim(
                "selection",
                format!("L has {} columns but the solution has length {n}", self.n()),
            ));
        }
        Ok(())
    }
}

/// `maxᵢ |numᵢ| / |denᵢ|`, skipping components where both vanish. A zero
/// `denᵢ` with nonzero `numᵢ` gives `+∞`; such indices are returned.
pub(crate) fn componentwise_max<T: Real>(num: &[T], den: &[T]) -> (T, Vec<usize>) {
    let mut value = T::zero();
    let mut unbounded = Vec::new();
    for (i, (&g, &v)) in num.iter().zip(den).enumerate() {
        if v == T::zero() {
            if g != T::zero() {
                unbounded.push(i);
                value = T::infinity();
            }
        } else {
            value = value.max(g.abs() / v.abs());
        }
    }
    (value, unbounded)
}

/// Exact condition numbers, computed from the dense closed forms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactConditions {
    /// `cond₂` of the augmented saddle-point matrix.
    pub cond_augmented: f64,
    pub kappa_inf_rel: f64,
    #[serde(with = "crate::serde_ext::real")]
    pub kappa_c: f64,
    /// Indices of `L x` that are zero while the numerator is not.
    pub kappa_c_unbounded: Vec<usize>,
    pub kappa_2_bound: f64,
    pub kappa1: f64,
    pub kappa2: f64,
}

/// Upper bounds computed by one-norm estimation on the factored operators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatedConditions {
    pub kappa_inf_upper: UpperBoundSummary,
    pub kappa_c_upper: UpperBoundSummary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub k: usize,
    pub exact: ExactConditions,
    pub estimated: EstimatedConditions,
}

pub fn exact_conditions<T: Real>(
    solution: &LseSolution<T>,
    selection: &SelectionMatrix<T>,
    weights: NormwiseWeights<T>,
) -> Result<ExactConditions> {
    let kc = kappa_c(solution, selection)?;
    Ok(ExactConditions {
        cond_augmented: augmented_condition(solution).to_f64_lossy(),
        kappa_inf_rel: kappa_inf_rel(solution, selection)?.to_f64_lossy(),
        kappa_c: kc.value.to_f64_lossy(),
        kappa_c_unbounded: kc.unbounded,
        kappa_2_bound: kappa_2_bound(solution, selection)?.to_f64_lossy(),
        kappa1: kappa1_cox_higham(solution)?.to_f64_lossy(),
        kappa2: kappa2_li_wang(solution, selection, weights)?.to_f64_lossy(),
    })
}

pub fn estimated_conditions<T: Real>(
    solution: &LseSolution<T>,
    selection: &SelectionMatrix<T>,
) -> Result<EstimatedConditions> {
    Ok(EstimatedConditions {
        kappa_inf_upper: kappa_inf_upper(solution, selection)?.summary(),
        kappa_c_upper: kappa_c_upper(solution, selection)?.summary(),
    })
}

/// Every condition number for `(solution, L)`; `κ₂` uses `weights`.
pub fn condition_report<T: Real>(
    solution: &LseSolution<T>,
    selection: &SelectionMatrix<T>,
    weights: NormwiseWeights<T>,
) -> Result<ConditionReport> {
    Ok(ConditionReport {
        k: selection.k(),
        exact: exact_conditions(solution, selection, weights)?,
        estimated: estimated_conditions(solution, selection)?,
    })
}

/// Two-norm condition number of the augmented saddle-point matrix.
pub fn augmented_condition<T: Real>(solution: &LseSolution<T>) -> T {
    build_augmented(solution.problem()).cond2()
}
