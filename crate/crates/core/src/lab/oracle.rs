//! Vertex enumeration oracle for the mixed and componentwise condition
//! numbers. The derivative is linear, so the supremum over the box
//! `|Δ| ≤ |data|` is attained at a sign vertex `Δ = σ ⊙ |data|`. Each
//! vertex image is summed from the images of the signed unit directions.

use crate::conditioning::{componentwise_max, frechet_apply, PerturbationDirection, SelectionMatrix};
use crate::error::{LseError, Result};
use crate::lse::LseSolution;
use crate::scalar::Real;

/// Largest admissible `mn + pn + m + p`.
pub const ORACLE_MAX_ENTRIES: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    /// Absolute: `max ‖L x'(σ)‖∞`.
    Mixed,
    /// `max ‖L x'(σ)‖∞ / ‖Lx‖∞`.
    MixedRelative,
    /// `max maxᵢ |L x'(σ)|ᵢ / |Lx|ᵢ`.
    Componentwise,
}

pub fn brute_force_kappa<T: Real>(
    solution: &LseSolution<T>,
    selection: &SelectionMatrix<T>,
    mode: OracleMode,
) -> Result<T> {
    let pr = solution.problem();
    let (m, n, p) = (pr.m(), pr.n(), pr.p());
    let total = m * n + p * n + m + p;
    if total > ORACLE_MAX_ENTRIES {
        return Err(LseError::TooLarge {
            op: "brute_force_kappa",
            size: total,
            limit: ORACLE_MAX_ENTRIES,
        });
    }
    selection.check_against(n)?;
    let lx = selection.apply(solution.x());

    // (block, flat index) of every nonzero data entry
    let mut slots: Vec<(usize, usize, T)> = Vec::new();
    let blocks: [&[T]; 4] = [pr.a().as_slice(), pr.c().as_slice(), pr.b(), pr.d()];
    for (b, data) in blocks.iter().enumerate() {
        for (i, &v) in data.iter().enumerate() {
            if v != T::zero() {
                slots.push((b, i, v.abs()));
            }
        }
    }

    // image of each signed-magnitude unit direction
    let mut columns = Vec::with_capacity(slots.len());
    for &(b, i, mag) in &slots {
        let mut dir = PerturbationDirection::zeros(m, n, p);
        match b {
            0 => dir.da.col_mut(i / m)[i % m] = mag,
            1 => dir.dc.col_mut(i / p)[i % p] = mag,
            2 => dir.db[i] = mag,
            _ => dir.dd[i] = mag,
        }
        columns.push(frechet_apply(solution, selection, &dir)?);
    }

    let k = selection.k();
    let mut best = T::zero();
    let mut g = vec![T::zero(); k];
    for mask in 0u32..(1u32 << slots.len()) {
        g.iter_mut().for_each(|v| *v = T::zero());
        for (bit, col) in columns.iter().enumerate() {
            let negate = mask >> bit & 1 == 1;
            for (acc, &c) in g.iter_mut().zip(col.iter()) {
                if negate {
                    *acc -= c;
                } else {
                    *acc += c;
                }
            }
        }
        let value = match mode {
            OracleMode::Mixed | OracleMode::MixedRelative => crate::linalg::vec_norm_inf(&g),
            OracleMode::Componentwise => componentwise_max(&g, &lx).0,
        };
        best = best.max(value);
    }

    if mode == OracleMode::MixedRelative {
        let scale = lx.norm_inf();
        if scale == T::zero() {
            return Err(LseError::ZeroSelection);
        }
        best /= scale;
    }
    Ok(best)
}
