//! Perturbation magnitudes and relative errors.

use crate::conditioning::{componentwise_max, NormwiseWeights, PerturbationDirection, SelectionMatrix};
use crate::error::{LseError, Result};
use crate::lse::LseProblem;
use crate::scalar::Real;

fn pairs<'a, T: Real>(
    problem: &'a LseProblem<T>,
    dir: &'a PerturbationDirection<T>,
) -> [(&'static str, &'a [T], &'a [T]); 4] {
    [
        ("A", problem.a().as_slice(), dir.da.as_slice()),
        ("C", problem.c().as_slice(), dir.dc.as_slice()),
        ("b", problem.b(), &dir.db),
        ("d", problem.d(), &dir.dd),
    ]
}

/// Smallest `ω` with `|Δ| ≤ ω |data|` entrywise; `+∞` when a zero entry is
/// perturbed.
pub fn epsilon0<T: Real>(problem: &LseProblem<T>, dir: &PerturbationDirection<T>) -> T {
    let mut eps = T::zero();
    for (_, data, delta) in pairs(problem, dir) {
        for (&x, &dx) in data.iter().zip(delta) {
            if x == T::zero() {
                if dx != T::zero() {
                    return T::infinity();
                }
            } else {
                eps = eps.max(dx.abs() / x.abs());
            }
        }
    }
    eps
}

fn norm<T: Real>(v: &[T]) -> T {
    crate::linalg::vec_norm2(v)
}

/// Largest of the four normwise ratios `‖Δ‖ / ‖data‖` (Frobenius for the
/// matrices). Empty blocks are skipped.
pub fn epsilon1<T: Real>(problem: &LseProblem<T>, dir: &PerturbationDirection<T>) -> Result<T> {
    let mut eps = T::zero();
    for (name, data, delta) in pairs(problem, dir) {
        if data.is_empty() {
            continue;
        }
        let base = norm(data);
        if base == T::zero() {
            return Err(LseError::UndefinedRatio(match name {
                "A" => "epsilon1: A has zero norm",
                "C" => "epsilon1: C has zero norm",
                "b" => "epsilon1: b has zero norm",
                _ => "epsilon1: d has zero norm",
            }));
        }
        eps = eps.max(norm(delta) / base);
    }
    Ok(eps)
}

/// `(α_A²‖ΔA‖F² + α_C²‖ΔC‖F² + α_b²‖Δb‖² + α_d²‖Δd‖²)^{1/2}`.
pub fn epsilon2<T: Real>(dir: &PerturbationDirection<T>, weights: NormwiseWeights<T>) -> T {
    weighted(
        [dir.da.as_slice(), dir.dc.as_slice(), &dir.db, &dir.dd],
        weights,
    )
}

/// [`epsilon2`] divided by the same weighted norm of the data, the scale
/// that pairs with the relative `κ₂`.
pub fn epsilon2_rel<T: Real>(
    problem: &LseProblem<T>,
    dir: &PerturbationDirection<T>,
    weights: NormwiseWeights<T>,
) -> Result<T> {
    let base = weighted(
        [problem.a().as_slice(), problem.c().as_slice(), problem.b(), problem.d()],
        weights,
    );
    if base == T::zero() {
        return Err(LseError::UndefinedRatio("epsilon2: data has zero norm"));
    }
    Ok(epsilon2(dir, weights) / base)
}

fn weighted<T: Real>(blocks: [&[T]; 4], w: NormwiseWeights<T>) -> T {
    let alphas = [w.alpha_a, w.alpha_c, w.alpha_b, w.alpha_d];
    blocks
        .iter()
        .zip(alphas)
        .map(|(b, a)| {
            let n = norm(b) * a;
            n * n
        })
        .sum::<T>()
        .sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelativeErrors<T> {
    pub r2: T,
    pub rinf: T,
    /// Componentwise: `max |L(x̃ − x)|ᵢ / |Lx|ᵢ`; `+∞` if a zero component moves.
    pub rc: T,
}

/// Relative errors of `L x̃` against `L x`.
pub fn relative_errors<T: Real>(
    x: &[T],
    xt: &[T],
    selection: &SelectionMatrix<T>,
) -> Result<RelativeErrors<T>> {
    if x.len() != xt.len() {
        return Err(LseError::dim("relative_errors", "x and x~ differ in length"));
    }
    selection.check_against(x.len())?;
    let lx = selection.apply(x);
    let diff: Vec<T> = xt.iter().zip(x).map(|(&a, &b)| a - b).collect();
    let ld = selection.apply(&diff);
    let (n2, ninf) = (lx.norm2(), lx.norm_inf());
    if ninf == T::zero() {
        return Err(LseError::ZeroSelection);
    }
    let (rc, _) = componentwise_max(&ld, &lx);
    Ok(RelativeErrors {
        r2: ld.norm2() / n2,
        rinf: ld.norm_inf() / ninf,
        rc,
    })
}
