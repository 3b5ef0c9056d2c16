//! One-norm estimation and the estimated upper bounds on `κ∞` and `κ꜀`.

use serde::{Deserialize, Serialize};

use crate::error::{LseError, Result};
use crate::linalg::{DenseMatrix, DenseVector};
use crate::lse::{GqrFactorization, LseSolution};
use crate::scalar::Real;

use super::SelectionMatrix;

/// Default iteration cap of [`one_norm_estimate`].
pub const MAX_ITERATIONS: usize = 5;

/// A linear map known only through products with it and its transpose.
pub trait LinearOperator<T> {
    fn in_dim(&self) -> usize;
    fn out_dim(&self) -> usize;
    fn apply(&self, v: &[T]) -> DenseVector<T>;
    fn apply_adjoint(&self, u: &[T]) -> DenseVector<T>;
}

impl<T: Real> LinearOperator<T> for DenseMatrix<T> {
    fn in_dim(&self) -> usize {
        self.cols()
    }

    fn out_dim(&self) -> usize {
        self.rows()
    }

    fn apply(&self, v: &[T]) -> DenseVector<T> {
        self.mul_vec(v)
    }

    fn apply_adjoint(&self, u: &[T]) -> DenseVector<T> {
        self.tr_mul_vec(u)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OneNormEstimate<T> {
    /// Lower bound on `‖B‖₁`, exact in most cases.
    pub estimate: T,
    pub iterations: usize,
    /// Products with `B` or `Bᵀ`, including the closing safeguard product.
    pub applications: usize,
}

pub fn one_norm_estimate<T: Real>(op: &impl LinearOperator<T>) -> OneNormEstimate<T> {
    one_norm_estimate_with(op, MAX_ITERATIONS)
}

/// Hager's power method on the unit ball of the 1-norm with Higham's
/// safeguards: iteration stops once the gradient test fails to improve or a
/// vertex repeats, and the result is never below `‖B x‖₁ / ‖x‖₁` for the
/// alternating vector `xᵢ = (−1)ⁱ (1 + i/(n−1))`.
pub fn one_norm_estimate_with<T: Real>(
    op: &impl LinearOperator<T>,
    max_iter: usize,
) -> OneNormEstimate<T> {
    let n = op.in_dim();
    if n == 0 || op.out_dim() == 0 {
        return OneNormEstimate {
            estimate: T::zero(),
            iterations: 0,
            applications: 0,
        };
    }
    let max_iter = max_iter.max(1);
    let mut x = vec![T::one() / T::from_count(n); n];
    let mut visited = vec![false; n];
    let mut est = T::zero();
    let mut iterations = 0;
    let mut applications = 0;

    while iterations < max_iter {
        iterations += 1;
        let y = op.apply(&x);
        applications += 1;
        est = est.max(y.norm1());
        if iterations == max_iter {
            break;
        }
        let xi: Vec<T> = y
            .iter()
            .map(|&v| if v < T::zero() { -T::one() } else { T::one() })
            .collect();
        let z = op.apply_adjoint(&xi);
        applications += 1;
        let ztx: T = z.iter().zip(&x).map(|(&a, &b)| a * b).sum();
        let (j, zmax) = argmax_abs(&z);
        if zmax <= ztx || visited[j] {
            break;
        }
        visited[j] = true;
        x = DenseVector::basis(n, j).into_inner();
    }

    let denom = if n > 1 { T::from_count(n - 1) } else { T::one() };
    let alt: Vec<T> = (0..n)
        .map(|i| {
            let mag = T::one() + T::from_count(i) / denom;
            if i % 2 == 0 {
                mag
            } else {
                -mag
            }
        })
        .collect();
    let alt_norm: T = alt.iter().map(|v| v.abs()).sum();
    let alt_est = op.apply(&alt).norm1() / alt_norm;
    applications += 1;

    OneNormEstimate {
        estimate: est.max(alt_est),
        iterations,
        applications,
    }
}

fn argmax_abs<T: Real>(z: &[T]) -> (usize, T) {
    let mut best = (0, T::neg_infinity());
    for (i, &v) in z.iter().enumerate() {
        if v.abs() > best.1 {
            best = (i, v.abs());
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq)]
pub struct TermEstimate<T> {
    pub name: &'static str,
    pub value: T,
    pub iterations: usize,
}

/// Six estimated terms of the upper bound and their normalized sum.
#[derive(Clone, Debug, PartialEq)]
pub struct UpperBoundReport<T> {
    pub terms: Vec<TermEstimate<T>>,
    pub total: T,
}

impl<T: Real> UpperBoundReport<T> {
    pub fn summary(&self) -> UpperBoundSummary {
        UpperBoundSummary {
            terms: self
                .terms
                .iter()
                .map(|t| TermSummary {
                    name: t.name.to_string(),
                    value: t.value.to_f64_lossy(),
                    iterations: t.iterations,
                })
                .collect(),
            total: self.total.to_f64_lossy(),
        }
    }

    pub fn iterations(&self) -> usize {
        self.terms.iter().map(|t| t.iterations).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermSummary {
    pub name: String,
    #[serde(with = "crate::serde_ext::real")]
    pub value: f64,
    pub iterations: usize,
}

/// Serializable `f64` form of [`UpperBoundReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperBoundSummary {
    pub terms: Vec<TermSummary>,
    #[serde(with = "crate::serde_ext::real")]
    pub total: f64,
}

#[derive(Clone, Copy)]
enum Factor {
    K,
    Kkt,
    Cadag,
}

impl Factor {
    fn input_dim<T: Real>(self, f: &GqrFactorization<T>) -> usize {
        match self {
            Factor::K => f.m(),
            Factor::Kkt => f.n(),
            Factor::Cadag => f.p(),
        }
    }

    fn apply<T: Real>(self, f: &GqrFactorization<T>, v: &[T]) -> DenseVector<T> {
        match self {
            Factor::K => f.apply_k(v),
            Factor::Kkt => f.apply_kkt(v),
            Factor::Cadag => f.apply_cadag(v),
        }
    }

    fn apply_t<T: Real>(self, f: &GqrFactorization<T>, w: &[T]) -> DenseVector<T> {
        match self {
            Factor::K => f.apply_kt(w),
            Factor::Kkt => f.apply_kkt(w),
            Factor::Cadag => f.apply_cadag_t(w),
        }
    }
}

/// `Bᵀ` for `B = D_s L M D_w`, where `D_s` is a row scaling. Estimating the
/// one-norm of `Bᵀ` gives the infinity norm of `B`.
struct TermOperator<'a, T> {
    factors: &'a GqrFactorization<T>,
    selection: &'a SelectionMatrix<T>,
    factor: Factor,
    weights: DenseVector<T>,
    row_scale: Vec<T>,
}

impl<T: Real> LinearOperator<T> for TermOperator<'_, T> {
    fn in_dim(&self) -> usize {
        self.selection.k()
    }

    fn out_dim(&self) -> usize {
        self.weights.len()
    }

    fn apply(&self, u: &[T]) -> DenseVector<T> {
        let scaled: Vec<T> = u.iter().zip(&self.row_scale).map(|(&a, &s)| a * s).collect();
        let w = self.selection.matrix().tr_mul_vec(&scaled);
        self.factor.apply_t(self.factors, &w).hadamard(&self.weights)
    }

    fn apply_adjoint(&self, v: &[T]) -> DenseVector<T> {
        let inner = self.factor.apply(self.factors, &self.weights.hadamard(v));
        self.selection.apply(&inner).hadamard(&self.row_scale)
    }
}

const TERM_NAMES: [&str; 6] = [
    "K |A||x|",
    "KK^T |A^T||r|",
    "C_A^+ |C||x|",
    "KK^T |C^T||t|",
    "K |b|",
    "C_A^+ |d|",
];

fn term_weights<T: Real>(solution: &LseSolution<T>) -> [(Factor, DenseVector<T>); 6] {
    let pr = solution.problem();
    let (x, r, t) = (solution.x(), solution.r(), solution.ac_residual());
    [
        (Factor::K, pr.a().abs().mul_vec(&x.abs())),
        (Factor::Kkt, pr.a().abs().tr_mul_vec(&r.abs())),
        (Factor::Cadag, pr.c().abs().mul_vec(&x.abs())),
        (Factor::Kkt, pr.c().abs().tr_mul_vec(&t.abs())),
        (Factor::K, pr.b().abs()),
        (Factor::Cadag, pr.d().abs()),
    ]
}

fn estimate_terms<T: Real>(
    solution: &LseSolution<T>,
    selection: &SelectionMatrix<T>,
    row_scale: Vec<T>,
) -> Vec<TermEstimate<T>> {
    let factors = solution.factors();
    term_weights(solution)
        .into_iter()
        .zip(TERM_NAMES)
        .map(|((factor, weights), name)| {
            debug_assert_eq!(weights.len(), factor.input_dim(factors));
            let op = TermOperator {
                factors,
                selection,
                factor,
                weights,
                row_scale: row_scale.clone(),
            };
            let est = one_norm_estimate(&op);
            TermEstimate {
                name,
                value: est.estimate,
                iterations: est.iterations,
            }
        })
        .collect()
}

/// Estimated upper bound on `κ∞ʳᵉˡ`: the sum of `‖L M D_w‖∞` over the six
/// terms, divided by `‖Lx‖∞`.
pub fn kappa_inf_upper<T: Real>(
    solution: &LseSolution<T>,
    selection: &SelectionMatrix<T>,
) -> Result<UpperBoundReport<T>> {
    selection.check_against(solution.problem().n())?;
    let lx = selection.apply(solution.x()).norm_inf();
    if lx == T::zero() {
        return Err(LseError::ZeroSelection);
    }
    let terms = estimate_terms(solution, selection, vec![T::one(); selection.k()]);
    let total = terms.iter().map(|t| t.value).sum::<T>() / lx;
    Ok(UpperBoundReport { terms, total })
}

/// Estimated upper bound on `κ꜀`, with rows scaled by `1/|(Lx)ᵢ|`. A row
/// with `(Lx)ᵢ = 0` is dropped when it is identically zero in a term and
/// makes that term infinite otherwise.
pub fn kappa_c_upper<T: Real>(
    solution: &LseSolution<T>,
    selection: &SelectionMatrix<T>,
) -> Result<UpperBoundReport<T>> {
    selection.check_against(solution.problem().n())?;
    let lx = selection.apply(solution.x());
    let zero_rows: Vec<usize> = (0..lx.len()).filter(|&i| lx[i] == T::zero()).collect();
    let scale: Vec<T> = lx
        .iter()
        .map(|&v| if v == T::zero() { T::zero() } else { T::one() / v.abs() })
        .collect();
    let mut terms = estimate_terms(solution, selection, scale);
    if !zero_rows.is_empty() {
        let factors = solution.factors();
        for (term, (factor, weights)) in terms.iter_mut().zip(term_weights(solution)) {
            let nonzero = zero_rows.iter().any(|&i| {
                let row = selection.matrix().row(i);
                factor
                    .apply_t(factors, &row)
                    .hadamard(&weights)
                    .iter()
                    .any(|&v| v != T::zero())
            });
            if nonzero {
                term.value = T::infinity();
            }
        }
    }
    let total = terms.iter().map(|t| t.value).sum();
    Ok(UpperBoundReport { terms, total })
}
