#![allow(dead_code)]

use lse_cond::conditioning::PerturbationDirection;
use lse_cond::linalg::{pseudo_inverse, svd};
use lse_cond::{DenseMatrix, DenseVector, LseProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix<f64> {
    DenseMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0))
}

pub fn uniform_vector(rng: &mut ChaCha8Rng, n: usize) -> DenseVector<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Dense random problem with `cond([A; C])` and `cond(C)` below `1e4`.
pub fn random_problem(rng: &mut ChaCha8Rng, m: usize, n: usize, p: usize) -> LseProblem<f64> {
    loop {
        let a = uniform_matrix(rng, m, n);
        let c = uniform_matrix(rng, p, n);
        let b = uniform_vector(rng, m);
        let d = uniform_vector(rng, p);
        if a.vstack(&c).cond2() > 1e4 || (p > 0 && c.cond2() > 1e4) {
            continue;
        }
        if let Ok(pr) = LseProblem::new(a, c, b, d) {
            return pr;
        }
    }
}

/// Random admissible dimensions with `m + p >= n >= p`.
pub fn random_dims(rng: &mut ChaCha8Rng, max_m: usize, max_n: usize, max_p: usize) -> (usize, usize, usize) {
    loop {
        let n = rng.gen_range(1..=max_n);
        let p = rng.gen_range(0..=max_p.min(n));
        let m = rng.gen_range(1..=max_m);
        if m + p >= n {
            return (m, n, p);
        }
    }
}

pub fn random_direction(rng: &mut ChaCha8Rng, pr: &LseProblem<f64>) -> PerturbationDirection<f64> {
    PerturbationDirection {
        da: uniform_matrix(rng, pr.m(), pr.n()),
        dc: uniform_matrix(rng, pr.p(), pr.n()),
        db: uniform_vector(rng, pr.m()),
        dd: uniform_vector(rng, pr.p()),
    }
}

/// `x = C_A† d + K b` through explicit pseudo-inverses, independent of the
/// factorization used by the solver.
pub fn pinv_solution(pr: &LseProblem<f64>) -> DenseVector<f64> {
    let (k, _, cadag) = dense_operators(pr);
    &cadag.mul_vec(pr.d()) + &k.mul_vec(pr.b())
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Dense `(K, K Kᵀ, C_A†)` from explicit pseudo-inverses.
pub fn dense_operators(
    pr: &LseProblem<f64>,
) -> (DenseMatrix<f64>, DenseMatrix<f64>, DenseMatrix<f64>) {
    let n = pr.n();
    let cp = pseudo_inverse(pr.c());
    let proj = &DenseMatrix::identity(n) - &cp.matmul(pr.c());
    // rank(AP) = n − p exactly; rounding in I − C†C must not be inverted
    let k = truncated_pinv(&pr.a().matmul(&proj), n - pr.p());
    let cadag = (&DenseMatrix::identity(n) - &k.matmul(pr.a())).matmul(&cp);
    let kkt = k.matmul(&k.transpose());
    (k, kkt, cadag)
}

/// Dense values of the six upper-bound terms `‖D_s L M D_w‖∞`, with
/// `D_s = I` or `D_s = D_{Lx}⁻¹`.
pub fn dense_terms(
    pr: &LseProblem<f64>,
    x: &[f64],
    r: &[f64],
    l: &DenseMatrix<f64>,
    componentwise: bool,
) -> Vec<f64> {
    let (k, kkt, cadag) = dense_operators(pr);
    let t = pr.a().matmul(&cadag).tr_mul_vec(r);
    let absx: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    let absr: Vec<f64> = r.iter().map(|v| v.abs()).collect();
    let abst: Vec<f64> = t.iter().map(|v| v.abs()).collect();
    let weights = [
        (&k, pr.a().abs().mul_vec(&absx)),
        (&kkt, pr.a().abs().tr_mul_vec(&absr)),
        (&cadag, pr.c().abs().mul_vec(&absx)),
        (&kkt, pr.c().abs().tr_mul_vec(&abst)),
        (&k, pr.b().abs()),
        (&cadag, pr.d().abs()),
    ];
    let lx = l.mul_vec(x);
    weights
        .iter()
        .map(|(m, w)| {
            let mut b = l.matmul(m).matmul(&DenseMatrix::diag_of(w));
            if componentwise {
                b = DenseMatrix::diag_of(&lx.iter().map(|v| 1.0 / v.abs()).collect::<Vec<_>>())
                    .matmul(&b);
            }
            b.norm_inf()
        })
        .collect()
}

/// Pseudo-inverse keeping exactly the `rank` largest singular values.
pub fn truncated_pinv(m: &DenseMatrix<f64>, rank: usize) -> DenseMatrix<f64> {
    let f = svd(m);
    let mut out = DenseMatrix::zeros(m.cols(), m.rows());
    for k in 0..rank.min(f.singular_values.len()) {
        let s = f.singular_values[k];
        for i in 0..m.cols() {
            for j in 0..m.rows() {
                out[(i, j)] += f.v[(i, k)] * f.u[(j, k)] / s;
            }
        }
    }
    out
}
