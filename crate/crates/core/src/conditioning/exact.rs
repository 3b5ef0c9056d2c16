//! Closed-form condition numbers.
//!
//! With `t = (A C_A†)ᵀ r`, the derivative of `L x` is
//!
//! ```text
//!     δ(Lx) = L K (δb − δA x) + L K Kᵀ (δAᵀ r − δCᵀ t) + L C_A† (δd − δC x)
//!           = L (H vec δA − J vec δC + K δb + C_A† δd)
//!     H = (K Kᵀ) ⊗ rᵀ − xᵀ ⊗ K,    J = xᵀ ⊗ C_A† + (K Kᵀ) ⊗ tᵀ
//! ```
//!
//! The mixed condition number in the infinity norm is
//! `‖ |LH| vec|A| + |LJ| vec|C| + |LK| |b| + |LC_A†| |d| ‖∞`, which is
//! computed here column by column without forming `H` or `J`.

use crate::error::{LseError, Result};
use crate::linalg::{kron, vec_norm2, vec_permutation, DenseMatrix, DenseVector};
use crate::lse::LseSolution;
use crate::scalar::Real;

use super::{componentwise_max, SelectionMatrix};

/// Largest number of entries allowed in a dense Kronecker-structured matrix.
pub const DENSE_KRON_LIMIT: usize = 1_000_000;

/// A perturbation `(δA, δC, δb, δd)` of the problem data.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationDirection<T> {
    pub da: DenseMatrix<T>,
    pub dc: DenseMatrix<T>,
    pub db: DenseVector<T>,
    pub dd: DenseVector<T>,
}

impl<T: Real> PerturbationDirection<T> {
    pub fn zeros(m: usize, n: usize, p: usize) -> Self {
        PerturbationDirection {
            da: DenseMatrix::zeros(m, n),
            dc: DenseMatrix::zeros(p, n),
            db: DenseVector::zeros(m),
            dd: DenseVector::zeros(p),
        }
    }

    /// Trace inner product summed over the four blocks.
    pub fn inner(&self, other: &Self) -> T {
        dot(self.da.as_slice(), other.da.as_slice())
            + dot(self.dc.as_slice(), other.dc.as_slice())
            + dot(&self.db, &other.db)
            + dot(&self.dd, &other.dd)
    }

    pub fn scale(&self, s: T) -> Self {
        PerturbationDirection {
            da: self.da.scale(s),
            dc: self.dc.scale(s),
            db: self.db.scale(s),
            dd: self.dd.scale(s),
        }
    }

    fn check_shape(&self, m: usize, n: usize, p: usize) -> Result<()> {
        let ok = self.da.shape() == (m, n)
            && self.dc.shape() == (p, n)
            && self.db.len() == m
            && self.dd.len() == p;
        if ok {
            Ok(())
        } else {
            Err(LseError::dim(
                "perturbation",
                format!(
                    "expected dA {m}x{n}, dC {p}x{n}, db {m}, dd {p}; got dA {:?}, dC {:?}, db {}, dd {}",
                    self.da.shape(),
                    self.dc.shape(),
                    self.db.len(),
                    self.dd.len()
                ),
            ))
        }
    }
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// Directional derivative `L · x'(A, C, b, d)[δA, δC, δb, δd]`.
pub fn frechet_apply<T: Real>(
    solution: &LseSolution<T>,
    selection: &SelectionMatrix<T>,
    dir: &PerturbationDirection<T>,
) -> Result<DenseVector<T>> {
    let (m, n, p) = dims(solution);
    selection.check_against(n)?;
    dir.check_shape(m, n, p)?;
    let f = solution.factors();
    let (x, r, t) = (solution.x(), solution.r(), solution.ac_residual());

    let b_part = &dir.db - &dir.da.mul_vec(x);
    let n_part = &dir.da.tr_mul_vec(r) - &dir.dc.tr_mul_vec(t);
    let d_part = &dir.dd - &dir.dc.mul_vec(x);

    let dx = &(&f.apply_k(&b_part) + &f.apply_kkt(&n_part)) + &f.apply_cadag(&d_part);
    Ok(selection.apply(&dx))
}

/// Adjoint of [`frechet_apply`] under the trace inner product: for
/// `u ∈ ℝᵏ` it returns the unique direction `D` with
/// `⟨D, δ⟩ = uᵀ · frechet_apply(δ)` for every `δ`.
pub fn adjoint_apply<T: Real>(
    solution: &LseSolution<T>,
    selection: &SelectionMatrix<T>,
    u: &[T],
) -> Result<PerturbationDirection<T>> {
    let (m, n, p) = dims(solution);
    selection.check_against(n)?;
    if u.len() != selection.k() {
        return Err(LseError::dim(
            "adjoint_apply",
            format!("u has length {} but L has {} rows", u.len(), selection.k()),
        ));
    }
    let f = solution.factors();
    let (x, r, t) = (solution.x(), solution.r(), solution.ac_residual());
    let w = selection.matrix().tr_mul_vec(u);
    let kt_w = f.apply_kt(&w);
    let kkt_w = f.apply_kkt(&w);
    let cadag_t_w = f.apply_cadag_t(&w);

    // δA slot: r (KKᵀw)ᵀ − (Kᵀw) xᵀ
    let da = DenseMatrix::from_fn(m, n, |i, j| r[i] * kkt_w[j] - kt_w[i] * x[j]);
    // δC slot: −((C_A†)ᵀw xᵀ + t (KKᵀw)ᵀ)
    let dc = DenseMatrix::from_fn(p, n, |i, j| -(cadag_t_w[i] * x[j] + t[i] * kkt_w[j]));
    Ok(PerturbationDirection {
        da,
        dc,
        db: kt_w,
        dd: cadag_t_w,
    })
}

/// Dense derivative blocks `H` (`n x mn`), `J` (`n x pn`), `K` and `C_A†`.
/// `J` enters the derivative with a minus sign.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeMatrices<T> {
    pub h: DenseMatrix<T>,
    pub j: DenseMatrix<T>,
    pub k: DenseMatrix<T>,
    pub cadag: DenseMatrix<T>,
}

fn guard(op: &'static str, size: usize) -> Result<()> {
    if size > DENSE_KRON_LIMIT {
        Err(LseError::TooLarge {
            op,
            size,
            limit: DENSE_KRON_LIMIT,
        })
    } else {
        Ok(())
    }
}

/// Forms `H` and `J` with explicit Kronecker products.
pub fn build_hj<T: Real>(solution: &LseSolution<T>) -> Result<DerivativeMatrices<T>> {
    let (m, n, p) = dims(solution);
    guard("build_hj", n * m * n)?;
    guard("build_hj", n * p * n)?;
    let f = solution.factors();
    let k = f.dense_k();
    let kkt = f.dense_kkt();
    let cadag = f.dense_cadag();
    let row = |v: &DenseVector<T>| DenseMatrix::from_fn(1, v.len(), |_, j| v[j]);

    let h = &kron(&kkt, &row(solution.r())) - &kron(&row(solution.x()), &k);
    let j = &kron(&row(solution.x()), &cadag) + &kron(&kkt, &row(solution.ac_residual()));
    Ok(DerivativeMatrices { h, j, k, cadag })
}

fn dims<T: Real>(solution: &LseSolution<T>) -> (usize, usize, usize) {
    let pr = solution.problem();
    (pr.m(), pr.n(), pr.p())
}

/// Dense `L M` where the rows are `(Mᵀ ℓᵢ)ᵀ`, using one adjoint application
/// per row of `L`.
fn left_product<T: Real>(
    selection: &SelectionMatrix<T>,
    cols: usize,
    apply_t: impl Fn(&[T]) -> DenseVector<T>,
) -> DenseMatrix<T> {
    let l = selection.matrix();
    let mut out = DenseMatrix::zeros(l.rows(), cols);
    for i in 0..l.rows() {
        let v = apply_t(&l.row(i));
        for (j, &vj) in v.iter().enumerate() {
            out[(i, j)] = vj;
        }
    }
    out
}

/// The vector `|LH| vec|A| + |LJ| vec|C| + |LK| |b| + |LC_A†| |d|` of length `k`.
pub fn kappa_numerator<T: Real>(
    solution: &LseSolution<T>,
    selection: &SelectionMatrix<T>,
) -> Result<DenseVector<T>> {
    let (m, n, p) = dims(solution);
    selection.check_against(n)?;
    let f = solution.factors();
    let pr = solution.problem();
    let (x, r, t) = (solution.x(), solution.r(), solution.ac_residual());
    let k = selection.k();

    let lk = left_product(selection, m, |v| f.apply_kt(v));
    let lkkt = left_product(selection, n, |v| f.apply_kkt(v));
    let lc = left_product(selection, p, |v| f.apply_cadag_t(v));

    let mut acc = vec![T::zero(); k];
    // Column of H for A[i, j]: r_i (L K Kᵀ)[:, j] − x_j (L K)[:, i].
    for j in 0..n {
        for i in 0..m {
            let a = pr.a()[(i, j)].abs();
            if a == T::zero() {
                continue;
            }
            for (row, s) in acc.iter_mut().enumerate() {
                *s += a * (r[i] * lkkt[(row, j)] - x[j] * lk[(row, i)]).abs();
            }
        }
    }
    // Column of J for C[j, i]: x_i (L C_A†)[:, j] + t_j (L K Kᵀ)[:, i].
    for i in 0..n {
        for j in 0..p {
            let c = pr.c()[(j, i)].abs();
            if c == T::zero() {
                continue;
            }
            for (row, s) in acc.iter_mut().enumerate() {
                *s += c * (x[i] * lc[(row, j)] + t[j] * lkkt[(row, i)]).abs();
            }
        }
    }
    for (row, s) in acc.iter_mut().enumerate() {
        for i in 0..m {
            *s += lk[(row, i)].abs() * pr.b()[i].abs();
        }
        for j in 0..p {
            *s += lc[(row, j)].abs() * pr.d()[j].abs();
        }
    }
    Ok(DenseVector::from(acc))
}

/// Absolute mixed condition number in the infinity norm.
pub fn kappa_inf<T: Real>(solution: &LseSolution<T>, selection: &SelectionMatrix<T>) -> Result<T> {
    Ok(kappa_numerator(solution, selection)?.norm_inf())
}

/// `κ∞ / ‖L x‖∞`.
pub fn kappa_inf_rel<T: Real>(
    solution: &LseSolution<T>,
    selection: &SelectionMatrix<T>,
) -> Result<T> {
    let num = kappa_inf(solution, selection)?;
    let lx = selection.apply(solution.x()).norm_inf();
    if lx == T::zero() {
        return Err(LseError::ZeroSelection);
    }
    Ok(num / lx)
}

/// Componentwise condition number and the components that make it infinite.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentwiseKappa<T> {
    pub value: T,
    /// Indices `i` with `(Lx)ᵢ = 0` and a nonzero numerator.
    pub unbounded: Vec<usize>,
}

/// `‖ D_{Lx}⁻¹ (numerator) ‖∞`. Components where both `(Lx)ᵢ` and the
/// numerator vanish are skipped; a zero `(Lx)ᵢ` with a nonzero numerator
/// makes the value `+∞`.
pub fn kappa_c<T: Real>(
    solution: &LseSolution<T>,
    selection: &SelectionMatrix<T>,
) -> Result<ComponentwiseKappa<T>> {
    let num = kappa_numerator(solution, selection)?;
    let lx = selection.apply(solution.x());
    let (value, unbounded) = componentwise_max(&num, &lx);
    Ok(ComponentwiseKappa { value, unbounded })
}

/// `√k · κ∞ʳᵉˡ`, an upper bound on the relative mixed condition number
/// measured in the 2-norm on the solution side.
pub fn kappa_2_bound<T: Real>(
    solution: &LseSolution<T>,
    selection: &SelectionMatrix<T>,
) -> Result<T> {
    Ok(T::from_count(selection.k()).sqrt() * kappa_inf_rel(solution, selection)?)
}

/// Normwise relative condition number of `x` (full solution, no `L`):
///
/// ```text
///     (‖C_A†‖₂‖d‖₂ + ‖K‖₂‖b‖₂ + ‖T₁‖₂‖C‖F + ‖T₂‖₂‖A‖F) / ‖x‖₂
///     T₁ = xᵀ ⊗ C_A† + (tᵀ ⊗ KKᵀ) Π_{p,n}
///     T₂ = −xᵀ ⊗ K + (rᵀ ⊗ KKᵀ) Π_{m,n}
/// ```
pub fn kappa1_cox_higham<T: Real>(solution: &LseSolution<T>) -> Result<T> {
    let (m, n, p) = dims(solution);
    guard("kappa1", n * m * n)?;
    guard("kappa1", (p * n) * (p * n))?;
    guard("kappa1", (m * n) * (m * n))?;
    let pr = solution.problem();
    let f = solution.factors();
    let xn = solution.x().norm2();
    if xn == T::zero() {
        return Err(LseError::UndefinedRatio("kappa1: x = 0"));
    }
    let k = f.dense_k();
    let kkt = f.dense_kkt();
    let cadag = f.dense_cadag();
    let row = |v: &DenseVector<T>| DenseMatrix::from_fn(1, v.len(), |_, j| v[j]);
    let x = row(solution.x());

    let t1 = &kron(&x, &cadag)
        + &kron(&row(solution.ac_residual()), &kkt).matmul(&vec_permutation(p, n));
    let t2 = &kron(&x, &k).scale(-T::one())
        + &kron(&row(solution.r()), &kkt).matmul(&vec_permutation(m, n));

    let total = cadag.norm_spectral() * vec_norm2(pr.d())
        + k.norm_spectral() * vec_norm2(pr.b())
        + t1.norm_spectral() * pr.c().norm_fro()
        + t2.norm_spectral() * pr.a().norm_fro();
    Ok(total / xn)
}

/// Positive weights on `(A, C, b, d)` for the weighted normwise measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormwiseWeights<T> {
    pub alpha_a: T,
    pub alpha_c: T,
    pub alpha_b: T,
    pub alpha_d: T,
}

impl<T: Real> Default for NormwiseWeights<T> {
    fn default() -> Self {
        NormwiseWeights {
            alpha_a: T::one(),
            alpha_c: T::one(),
            alpha_b: T::one(),
            alpha_d: T::one(),
        }
    }
}

impl<T: Real> NormwiseWeights<T> {
    fn validate(&self) -> Result<()> {
        let all = [self.alpha_a, self.alpha_c, self.alpha_b, self.alpha_d];
        if all.iter().all(|&a| a.is_finite() && a > T::zero()) {
            Ok(())
        } else {
            Err(LseError::InvalidParameter(format!(
                "weights must be positive and finite, got {:?}",
                all
            )))
        }
    }
}

/// Weighted normwise condition number of `L x`, through the `k x k` Gram
/// matrix of the derivative:
///
/// ```text
///     G = (‖r‖²/α_A² + ‖t‖²/α_C²) L M² Lᵀ + (‖x‖²/α_A² + 1/α_b²) L M Lᵀ
///       + (‖x‖²/α_C² + 1/α_d²) L C_A† C_A†ᵀ Lᵀ
///       + (L M x tᵀ C_A†ᵀ Lᵀ + L C_A† t xᵀ M Lᵀ) / α_C²
///     κ₂ = ‖G‖₂^{1/2} / ‖Lx‖₂ · (α_A²‖A‖F² + α_C²‖C‖F² + α_b²‖b‖² + α_d²‖d‖²)^{1/2}
/// ```
///
/// with `M = K Kᵀ`.
pub fn kappa2_li_wang<T: Real>(
    solution: &LseSolution<T>,
    selection: &SelectionMatrix<T>,
    weights: NormwiseWeights<T>,
) -> Result<T> {
    weights.validate()?;
    let (_, n, p) = dims(solution);
    selection.check_against(n)?;
    let pr = solution.problem();
    let f = solution.factors();
    let (x, r, t) = (solution.x(), solution.r(), solution.ac_residual());
    let lx = selection.apply(x).norm2();
    if lx == T::zero() {
        return Err(LseError::ZeroSelection);
    }
    let NormwiseWeights {
        alpha_a: wa,
        alpha_c: wc,
        alpha_b: wb,
        alpha_d: wd,
    } = weights;
    let sq = |v: T| v * v;

    let l = selection.matrix();
    let lm = left_product(selection, n, |v| f.apply_kkt(v));
    let lc = left_product(selection, p, |v| f.apply_cadag_t(v));
    let lm_m_lt = lm.matmul(&lm.transpose());
    let lm_lt = lm.matmul(&l.transpose());
    let lc_lct = lc.matmul(&lc.transpose());
    let u = lm.mul_vec(x);
    let v = lc.mul_vec(t);
    let k = l.rows();
    let cross = DenseMatrix::from_fn(k, k, |i, j| u[i] * v[j] + v[i] * u[j]);

    let c1 = sq(r.norm2()) / sq(wa) + sq(t.norm2()) / sq(wc);
    let c2 = sq(x.norm2()) / sq(wa) + T::one() / sq(wb);
    let c3 = sq(x.norm2()) / sq(wc) + T::one() / sq(wd);
    let gram = &(&(&lm_m_lt.scale(c1) + &lm_lt.scale(c2)) + &lc_lct.scale(c3))
        + &cross.scale(T::one() / sq(wc));

    let data = sq(wa) * sq(pr.a().norm_fro())
        + sq(wc) * sq(pr.c().norm_fro())
        + sq(wb) * sq(pr.b().norm2())
        + sq(wd) * sq(pr.d().norm2());
    Ok(gram.norm_spectral().sqrt() / lx * data.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::{build_test_problem, TestProblemConfig};
    use crate::linalg::vec;
    use crate::lse::{solve, LseProblem};

    fn sample() -> LseSolution<f64> {
        let a = DenseMatrix::from_rows(&[
            [1.0, 2.0, 0.5, -1.0],
            [0.0, 1.0, 3.0, 2.0],
            [2.0, -1.0, 1.0, 0.0],
            [1.0, 1.0, 1.0, 1.0],
            [-2.0, 0.5, 0.0, 3.0],
        ]);
        let c = DenseMatrix::from_rows(&[[1.0, 0.0, 2.0, 1.0], [0.0, 1.0, -1.0, 1.0]]);
        let pr = LseProblem::new(
            a,
            c,
            DenseVector::from_slice(&[1.0, -2.0, 0.5, 3.0, 1.0]),
            DenseVector::from_slice(&[2.0, -1.0]),
        )
        .unwrap();
        solve(&pr).unwrap()
    }

    fn direction() -> PerturbationDirection<f64> {
        let mut dir = PerturbationDirection::zeros(5, 4, 2);
        dir.da = DenseMatrix::from_fn(5, 4, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0);
        dir.dc = DenseMatrix::from_fn(2, 4, |i, j| 0.5 * (i as f64) - 0.25 * (j as f64));
        dir.db = DenseVector::from_slice(&[0.1, -0.2, 0.3, 0.0, 1.0]);
        dir.dd = DenseVector::from_slice(&[-1.0, 0.5]);
        dir
    }

    #[test]
    fn frechet_matches_dense_blocks() {
        let s = sample();
        let sel = SelectionMatrix::from_indices(&[0, 2], 4).unwrap();
        let dir = direction();
        let d = build_hj(&s).unwrap();
        let dense = &(&d.h.mul_vec(&vec(&dir.da)) - &d.j.mul_vec(&vec(&dir.dc)))
            + &(&d.k.mul_vec(&dir.db) + &d.cadag.mul_vec(&dir.dd));
        let want = sel.apply(&dense);
        let got = frechet_apply(&s, &sel, &dir).unwrap();
        assert!(got.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn adjoint_duality() {
        let s = sample();
        let sel = SelectionMatrix::new(DenseMatrix::from_rows(&[
            [1.0, -1.0, 0.5, 0.0],
            [0.0, 2.0, 0.0, 1.0],
        ]))
        .unwrap();
        let dir = direction();
        let u = [0.7, -1.3];
        let lhs = DenseVector::from_slice(&u).dot(&frechet_apply(&s, &sel, &dir).unwrap());
        let rhs = adjoint_apply(&s, &sel, &u).unwrap().inner(&dir);
        assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0));
    }

    #[test]
    fn numerator_matches_dense_absolute_products() {
        let s = sample();
        let sel = SelectionMatrix::identity(4);
        let d = build_hj(&s).unwrap();
        let pr = s.problem();
        let want = &(&d.h.abs().mul_vec(&vec(&pr.a().abs())) + &d.j.abs().mul_vec(&vec(&pr.c().abs())))
            + &(&d.k.abs().mul_vec(&pr.b().abs()) + &d.cadag.abs().mul_vec(&pr.d().abs()));
        let got = kappa_numerator(&s, &sel).unwrap();
        assert!(got.max_abs_diff(&want) < 1e-12 * want.norm_inf());
    }

    #[test]
    fn test_problem_values() {
        let pr = build_test_problem::<f64>(&TestProblemConfig::new(1e-3, 1e-3)).unwrap();
        let s = solve(&pr).unwrap();
        let id = SelectionMatrix::identity(4);
        assert!((kappa_inf_rel(&s, &id).unwrap() - 2.0).abs() < 1e-12);
        assert!((kappa_c(&s, &id).unwrap().value - 2.0).abs() < 1e-12);
        assert!((kappa_2_bound(&s, &id).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn zero_selection() {
        let s = sample();
        let zero = SelectionMatrix::new(DenseMatrix::zeros(1, 4)).unwrap();
        assert_eq!(kappa_inf_rel(&s, &zero), Err(LseError::ZeroSelection));
        assert_eq!(
            kappa2_li_wang(&s, &zero, NormwiseWeights::default()),
            Err(LseError::ZeroSelection)
        );
        // numerator and Lx both vanish: excluded rather than infinite
        let kc = kappa_c(&s, &zero).unwrap();
        assert_eq!((kc.value, kc.unbounded.len()), (0.0, 0));
    }

    #[test]
    fn weights_must_be_positive() {
        let s = sample();
        let w = NormwiseWeights { alpha_b: 0.0, ..NormwiseWeights::default() };
        assert!(matches!(
            kappa2_li_wang(&s, &SelectionMatrix::identity(4), w),
            Err(LseError::InvalidParameter(_))
        ));
    }

    #[test]
    fn size_guard() {
        assert!(guard("t", DENSE_KRON_LIMIT).is_ok());
        assert!(matches!(guard("t", DENSE_KRON_LIMIT + 1), Err(LseError::TooLarge { .. })));
    }

    #[test]
    fn selection_validation() {
        assert!(SelectionMatrix::<f64>::new(DenseMatrix::zeros(0, 3)).is_err());
        assert!(SelectionMatrix::<f64>::new(DenseMatrix::zeros(4, 3)).is_err());
        assert!(SelectionMatrix::<f64>::from_indices(&[3], 3).is_err());
        let s = sample();
        let wrong = SelectionMatrix::identity(3);
        assert!(matches!(kappa_inf(&s, &wrong), Err(LseError::Dimension { .. })));
    }
}
