use super::LseProblem;
use crate::error::{LseError, RankCondition, Result};
use crate::linalg::{
    check_diagonal, householder_qr, rank_tolerance, right_triangularize_rows,
    triangular_solve_unchecked, DenseMatrix, DenseVector, Triangle,
};
use crate::scalar::Real;

/// Generalized QR factors of the pair `(A, C)`:
///
/// ```text
///     Uᵀ A Q = [[L11, 0  ],     C Q = [S, 0]
///               [L21, L22]]
/// ```
///
/// with row blocks of sizes `m − n + p` and `n − p`, column blocks of sizes
/// `p` and `n − p`, and `L22`, `S` lower triangular with positive diagonals.
#[derive(Clone, Debug)]
pub struct GqrFactorization<T> {
    u: DenseMatrix<T>,
    q: DenseMatrix<T>,
    l11: DenseMatrix<T>,
    l21: DenseMatrix<T>,
    l22: DenseMatrix<T>,
    s: DenseMatrix<T>,
}

impl<T: Real> GqrFactorization<T> {
    pub fn u(&self) -> &DenseMatrix<T> {
        &self.u
    }

    pub fn q(&self) -> &DenseMatrix<T> {
        &self.q
    }

    pub fn l11(&self) -> &DenseMatrix<T> {
        &self.l11
    }

    pub fn l21(&self) -> &DenseMatrix<T> {
        &self.l21
    }

    pub fn l22(&self) -> &DenseMatrix<T> {
        &self.l22
    }

    pub fn s(&self) -> &DenseMatrix<T> {
        &self.s
    }

    pub fn m(&self) -> usize {
        self.u.rows()
    }

    pub fn n(&self) -> usize {
        self.q.rows()
    }

    pub fn p(&self) -> usize {
        self.s.rows()
    }

    /// The block matrix `[[L11, 0], [L21, L22]]` (`m x n`).
    pub fn lower_block(&self) -> DenseMatrix<T> {
        let (m, n, p) = (self.m(), self.n(), self.p());
        let mut out = DenseMatrix::zeros(m, n);
        out.set_block(0, 0, &self.l11);
        out.set_block(m + p - n, 0, &self.l21);
        out.set_block(m + p - n, p, &self.l22);
        out
    }

    pub(super) fn solve_s(&self, rhs: &[T], transpose: bool) -> DenseVector<T> {
        triangular_solve_unchecked(&self.s, rhs, Triangle::Lower, transpose)
    }

    pub(super) fn solve_l22(&self, rhs: &[T], transpose: bool) -> DenseVector<T> {
        triangular_solve_unchecked(&self.l22, rhs, Triangle::Lower, transpose)
    }
}

/// Computes the generalized QR factorization, verifying both rank conditions
/// from the triangular pivots.
pub fn gqr_factorize<T: Real>(problem: &LseProblem<T>) -> Result<GqrFactorization<T>> {
    let (m, n, p) = (problem.m(), problem.n(), problem.p());
    let (a, c) = (problem.a(), problem.c());

    let (q, s) = right_triangularize_rows(c)?;
    check_diagonal(&s, rank_tolerance(p, n, c.norm_fro()))
        .map_err(|e| rank_error(e, RankCondition::ConstraintRows))?;

    let aq = a.matmul(&q);
    let k = n - p;
    // QL factorization of the trailing block through a QR of its column
    // reversal: A2 J = Q̃ R̃  ⇒  (Q̃ J_m)ᵀ A2 = J_m R̃ J = [0; L22].
    let a2_rev = DenseMatrix::from_fn(m, k, |i, j| aq[(i, n - 1 - j)]);
    let (q_tilde, r_tilde) = householder_qr(&a2_rev)?;
    let u = DenseMatrix::from_fn(m, m, |i, j| q_tilde[(i, m - 1 - j)]);
    let l22 = DenseMatrix::from_fn(k, k, |i, j| {
        if j <= i {
            r_tilde[(k - 1 - i, k - 1 - j)]
        } else {
            T::zero()
        }
    });
    check_diagonal(&l22, rank_tolerance(m, n, a.norm_fro()))
        .map_err(|e| rank_error(e, RankCondition::StackedColumns))?;

    let a1 = aq.block(0, 0, m, p);
    let ut_a1 = u.tr_matmul(&a1);
    let top = m - k;
    Ok(GqrFactorization {
        l11: ut_a1.block(0, 0, top, p),
        l21: ut_a1.block(top, 0, k, p),
        u,
        q,
        l22,
        s,
    })
}

fn rank_error(e: LseError, condition: RankCondition) -> LseError {
    match e {
        LseError::SingularTriangular {
            index,
            magnitude,
            tolerance,
        } => LseError::RankDeficient {
            condition,
            index,
            magnitude,
            tolerance,
        },
        other => other,
    }
}

/// Solution of an LSE problem together with the factors that produced it.
#[derive(Clone, Debug)]
pub struct LseSolution<T> {
    problem: LseProblem<T>,
    factors: GqrFactorization<T>,
    x: DenseVector<T>,
    r: DenseVector<T>,
    lambda: DenseVector<T>,
    ac_residual: DenseVector<T>,
}

impl<T: Real> LseSolution<T> {
    pub fn problem(&self) -> &LseProblem<T> {
        &self.problem
    }

    pub fn factors(&self) -> &GqrFactorization<T> {
        &self.factors
    }

    pub fn x(&self) -> &DenseVector<T> {
        &self.x
    }

    /// Residual `b − A x`.
    pub fn r(&self) -> &DenseVector<T> {
        &self.r
    }

    /// Lagrange multipliers, `Cᵀ λ = −Aᵀ r`.
    pub fn lambda(&self) -> &DenseVector<T> {
        &self.lambda
    }

    /// `(A C_A†)ᵀ r`, taken from the factors as `S⁻ᵀ L11ᵀ (c1 − L11 y1)`.
    pub fn ac_residual(&self) -> &DenseVector<T> {
        &self.ac_residual
    }
}

/// Solves the LSE problem from its generalized QR factorization.
pub fn solve<T: Real>(problem: &LseProblem<T>) -> Result<LseSolution<T>> {
    let f = gqr_factorize(problem)?;
    let (m, n, p) = (problem.m(), problem.n(), problem.p());
    let top = m + p - n;

    let c = f.u.tr_mul_vec(problem.b());
    let y1 = f.solve_s(problem.d(), false);
    let l21y1 = f.l21.mul_vec(&y1);
    let rhs2: DenseVector<T> = c[top..].iter().zip(l21y1.iter()).map(|(&a, &b)| a - b).collect();
    let y2 = f.solve_l22(&rhs2, false);
    let x = f.q.mul_vec(&y1.concat(&y2));
    let r = problem.b() - &problem.a().mul_vec(&x);

    // Cᵀ = Q [Sᵀ; 0], so Cᵀ λ = −Aᵀ r reduces to Sᵀ λ = −(Qᵀ Aᵀ r)[..p].
    let qt_atr = f.q.tr_mul_vec(&problem.a().tr_mul_vec(&r));
    let neg: Vec<T> = qt_atr[..p].iter().map(|&v| -v).collect();
    let lambda = f.solve_s(&neg, true);

    let c1_res = &c.segment(0, top) - &f.l11.mul_vec(&y1);
    let ac_residual = f.solve_s(&f.l11.tr_mul_vec(&c1_res), true);

    Ok(LseSolution {
        problem: problem.clone(),
        factors: f,
        x,
        r,
        lambda,
        ac_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pseudo_inverse;

    fn problem(a: DenseMatrix<f64>, c: DenseMatrix<f64>, b: &[f64], d: &[f64]) -> LseProblem<f64> {
        LseProblem::new(a, c, DenseVector::from_slice(b), DenseVector::from_slice(d)).unwrap()
    }

    fn sample() -> LseProblem<f64> {
        let a = DenseMatrix::from_rows(&[
            [1.0, 2.0, 0.5, -1.0],
            [0.0, 1.0, 3.0, 2.0],
            [2.0, -1.0, 1.0, 0.0],
            [1.0, 1.0, 1.0, 1.0],
            [-2.0, 0.5, 0.0, 3.0],
        ]);
        let c = DenseMatrix::from_rows(&[[1.0, 0.0, 2.0, 1.0], [0.0, 1.0, -1.0, 1.0]]);
        problem(a, c, &[1.0, -2.0, 0.5, 3.0, 1.0], &[2.0, -1.0])
    }

    #[test]
    fn factor_invariants() {
        let pr = sample();
        let f = gqr_factorize(&pr).unwrap();
        let scale = pr.a().norm_fro() + pr.c().norm_fro();
        let lhs = f.u().tr_matmul(&pr.a().matmul(f.q()));
        assert!(lhs.max_abs_diff(&f.lower_block()) <= 1e-12 * scale);
        let cq = pr.c().matmul(f.q());
        let mut s0 = DenseMatrix::zeros(2, 4);
        s0.set_block(0, 0, f.s());
        assert!(cq.max_abs_diff(&s0) <= 1e-12 * scale);
        for i in 0..2 {
            assert!(f.s()[(i, i)] > 0.0 && f.l22()[(i, i)] > 0.0);
        }
        assert_eq!(f.l22()[(0, 1)], 0.0);
        assert_eq!(f.s()[(0, 1)], 0.0);
        assert_eq!(f.l11().shape(), (3, 2));
        assert_eq!(f.l21().shape(), (2, 2));
    }

    #[test]
    fn orthonormal_data_factors_trivially() {
        let c = DenseMatrix::from_rows(&[[1.0, 0.0, 0.0, 0.0]]);
        let pr = problem(DenseMatrix::identity(4), c, &[1.0; 4], &[1.0]);
        let f = gqr_factorize(&pr).unwrap();
        assert!((f.s()[(0, 0)].abs() - 1.0).abs() < 1e-15);
        assert_eq!(f.l22().shape(), (3, 3));
        let sv = crate::linalg::singular_values(f.l22());
        assert!(sv.iter().all(|&s| (s - 1.0).abs() < 1e-14));
    }

    #[test]
    fn solution_satisfies_optimality() {
        let pr = sample();
        let sol = solve(&pr).unwrap();
        let cx = pr.c().mul_vec(sol.x());
        let scale = pr.c().norm_fro() * sol.x().norm2() + pr.d().norm2();
        assert!(cx.max_abs_diff(pr.d()) <= 1e-10 * scale);
        let kkt = &pr.a().tr_mul_vec(sol.r()) + &pr.c().tr_mul_vec(sol.lambda());
        assert!(kkt.norm_inf() <= 1e-10 * (pr.a().norm_fro() * sol.r().norm2() + 1.0));
        // λ = −(A C_A†)ᵀ r by two routes
        let sum = sol.lambda() + sol.ac_residual();
        assert!(sum.norm_inf() <= 1e-12 * sol.lambda().norm_inf().max(1.0));
    }

    #[test]
    fn matches_pseudo_inverse_formula() {
        let pr = sample();
        let sol = solve(&pr).unwrap();
        let (a, c) = (pr.a(), pr.c());
        let cp = pseudo_inverse(c);
        let proj = &DenseMatrix::identity(4) - &cp.matmul(c);
        let k = pseudo_inverse(&a.matmul(&proj));
        let cadag = (&DenseMatrix::identity(4) - &k.matmul(a)).matmul(&cp);
        let x = &k.mul_vec(pr.b()) + &cadag.mul_vec(pr.d());
        assert!(x.max_abs_diff(sol.x()) <= 1e-11 * x.norm2());
        // ac_residual against (A C†)ᵀ r and (A C_A†)ᵀ r formed densely
        let t1 = a.matmul(&cp).tr_mul_vec(sol.r());
        let t2 = a.matmul(&cadag).tr_mul_vec(sol.r());
        assert!(t1.max_abs_diff(sol.ac_residual()) <= 1e-12 * sol.r().norm2().max(1e-300));
        assert!(t2.max_abs_diff(sol.ac_residual()) <= 1e-12 * sol.r().norm2().max(1e-300));
    }

    #[test]
    fn fully_constrained_ignores_least_squares_part() {
        let a = DenseMatrix::from_rows(&[[3.0, 1.0], [1.0, -2.0], [0.5, 0.5]]);
        let sol = solve(&problem(a, DenseMatrix::identity(2), &[9.0, 9.0, 9.0], &[1.5, -0.5])).unwrap();
        assert!(sol.x().max_abs_diff(&[1.5, -0.5]) < 1e-15);
    }

    #[test]
    fn consistent_system_has_zero_residual() {
        let a = DenseMatrix::from_rows(&[[1.0, 0.0, 1.0], [0.0, 1.0, 1.0], [1.0, 1.0, 0.0], [2.0, 0.0, 1.0]]);
        let x = [1.0, 2.0, -1.0];
        let b = a.mul_vec(&x);
        let c = DenseMatrix::from_rows(&[[1.0, 1.0, 1.0]]);
        let sol = solve(&problem(a, c, &b, &[2.0])).unwrap();
        assert!(sol.x().max_abs_diff(&x) < 1e-14);
        assert!(sol.r().norm_inf() < 1e-14);
        assert!(sol.lambda().norm_inf() < 1e-14);
    }

    #[test]
    fn square_data_has_empty_top_block() {
        // m − n + p = 0: L11 and c1 are empty.
        let a = DenseMatrix::from_rows(&[[1.0, 2.0, 0.0], [0.0, 1.0, 1.0]]);
        let c = DenseMatrix::from_rows(&[[1.0, 0.0, 1.0]]);
        let sol = solve(&problem(a, c, &[1.0, 2.0], &[3.0])).unwrap();
        assert_eq!(sol.factors().l11().shape(), (0, 1));
        assert!(sol.r().norm_inf() < 1e-14);
        assert!(sol.ac_residual().norm_inf() == 0.0);
    }

    #[test]
    fn unconstrained_problem() {
        let a = DenseMatrix::from_rows(&[[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]);
        let pr = problem(a.clone(), DenseMatrix::zeros(0, 2), &[1.0, 2.0, 4.0], &[]);
        let sol = solve(&pr).unwrap();
        let x = pseudo_inverse(&a).mul_vec(&[1.0, 2.0, 4.0]);
        assert!(sol.x().max_abs_diff(&x) < 1e-14);
        assert!(sol.lambda().is_empty());
    }

    #[test]
    fn f32_solves_small_problem() {
        let pr = sample().cast::<f32>();
        let sol = solve(&pr).unwrap();
        let sol64 = solve(&sample()).unwrap();
        for (a, b) in sol.x().iter().zip(sol64.x().iter()) {
            assert!((*a as f64 - b).abs() < 1e-4 * b.abs().max(1.0));
        }
    }
}
