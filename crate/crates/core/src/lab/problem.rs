use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::conditioning::PerturbationDirection;
use crate::error::{LseError, Result};
use crate::linalg::{DenseMatrix, DenseVector};
use crate::lse::LseProblem;
use crate::scalar::Real;

/// Rows (0-based) where `Aᵀ e_i = 0` for the test matrix.
const NULL_ROWS: [usize; 5] = [1, 3, 4, 5, 7];

/// Which unit vector in `null(Aᵀ)` shapes the residual.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum B2Mode {
    /// `(e₂ + e₄ + e₅ + e₆ + e₈) / √5`.
    #[default]
    Spread,
    /// A single coordinate vector `e_i` (1-based `i` in {2, 4, 5, 6, 8}).
    Coordinate(usize),
}

impl B2Mode {
    fn vector<T: Real>(self) -> DenseVector<T> {
        let mut v = DenseVector::zeros(9);
        match self {
            B2Mode::Spread => {
                let w = T::one() / T::lit(5.0).sqrt();
                for i in NULL_ROWS {
                    v[i] = w;
                }
            }
            B2Mode::Coordinate(i) => v[i - 1] = T::one(),
        }
        v
    }
}

impl fmt::Display for B2Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            B2Mode::Spread => f.write_str("spread"),
            B2Mode::Coordinate(i) => write!(f, "e{i}"),
        }
    }
}

impl FromStr for B2Mode {
    type Err = LseError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "spread" {
            return Ok(B2Mode::Spread);
        }
        let idx = s
            .strip_prefix('e')
            .and_then(|t| t.parse::<usize>().ok())
            .filter(|i| NULL_ROWS.contains(&(i.wrapping_sub(1))));
        idx.map(B2Mode::Coordinate).ok_or_else(|| {
            LseError::InvalidParameter(format!(
                "unknown b2 mode `{s}` (expected spread, e2, e4, e5, e6 or e8)"
            ))
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestProblemConfig {
    pub eta: f64,
    pub delta: f64,
    pub b2_mode: B2Mode,
    pub seed: u64,
}

impl TestProblemConfig {
    pub fn new(eta: f64, delta: f64) -> Self {
        TestProblemConfig {
            eta,
            delta,
            b2_mode: B2Mode::Spread,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("eta", self.eta), ("delta", self.delta)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(LseError::InvalidParameter(format!(
                    "{name} must lie in (0, 1], got {v}"
                )));
            }
        }
        if let B2Mode::Coordinate(i) = self.b2_mode {
            if !NULL_ROWS.contains(&(i.wrapping_sub(1))) {
                return Err(LseError::InvalidParameter(format!("b2 coordinate e{i} is not in null(A^T)")));
            }
        }
        Ok(())
    }
}

/// The 9x4 test problem with exact solution `x = (1, 1, 1, 1/η)` and
/// residual `r = 1e-5 · b₂`.
pub fn build_test_problem<T: Real>(cfg: &TestProblemConfig) -> Result<LseProblem<T>> {
    cfg.validate()?;
    let delta = T::lit(cfg.delta);
    let mut a = DenseMatrix::zeros(9, 4);
    a[(0, 0)] = T::one();
    a[(2, 1)] = T::one();
    a[(6, 2)] = delta;
    a[(8, 3)] = delta;
    let c = DenseMatrix::from_rows(&[
        [T::zero(), T::one(), T::zero(), T::zero()],
        [T::one(), T::zero(), T::zero(), T::zero()],
    ]);
    let v = DenseVector::from(vec![T::one(), T::one(), T::one(), T::lit(1.0 / cfg.eta)]);
    let b = &a.mul_vec(&v) + &cfg.b2_mode.vector::<T>().scale(T::lit(1e-5));
    let d = DenseVector::from(vec![T::one(), T::one()]);
    LseProblem::new(a, c, b, d)
}

/// Componentwise relative perturbation `Δ = magnitude · (U ⊙ data)` with
/// `U` uniform on the open interval `(−1, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationSample<T> {
    pub delta: PerturbationDirection<T>,
    pub magnitude: T,
}

/// Draws with `ChaCha8Rng::seed_from_u64(seed)` on stream 0.
pub fn sample_perturbation<T: Real>(
    problem: &LseProblem<T>,
    magnitude: T,
    seed: u64,
) -> Result<PerturbationSample<T>> {
    sample_perturbation_stream(problem, magnitude, seed, 0)
}

/// Draws one variate per data entry, zero or not, in the order `A`, `C`,
/// `b`, `d` (matrices column-major), so the stream layout depends only on
/// the dimensions.
pub fn sample_perturbation_stream<T: Real>(
    problem: &LseProblem<T>,
    magnitude: T,
    seed: u64,
    stream: u64,
) -> Result<PerturbationSample<T>> {
    if !(magnitude.is_finite() && magnitude > T::zero()) {
        return Err(LseError::InvalidParameter(format!(
            "magnitude must be positive, got {magnitude}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut draw = |x: T| magnitude * T::lit(open_unit(&mut rng)) * x;

    let a = problem.a();
    let c = problem.c();
    let mut da = DenseMatrix::zeros(a.rows(), a.cols());
    for j in 0..a.cols() {
        for i in 0..a.rows() {
            da[(i, j)] = draw(a[(i, j)]);
        }
    }
    let mut dc = DenseMatrix::zeros(c.rows(), c.cols());
    for j in 0..c.cols() {
        for i in 0..c.rows() {
            dc[(i, j)] = draw(c[(i, j)]);
        }
    }
    let db: DenseVector<T> = problem.b().iter().map(|&v| draw(v)).collect();
    let dd: DenseVector<T> = problem.d().iter().map(|&v| draw(v)).collect();
    Ok(PerturbationSample {
        delta: PerturbationDirection { da, dc, db, dd },
        magnitude,
    })
}

fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let u: f64 = rng.gen_range(-1.0..1.0);
        if u != -1.0 {
            return u;
        }
    }
}
