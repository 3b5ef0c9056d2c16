//! Comparison of condition numbers against observed relative errors.

use serde::{Deserialize, Serialize};

use crate::conditioning::{
    augmented_condition, kappa1_cox_higham, kappa2_li_wang, kappa_c, kappa_c_upper,
    kappa_inf_rel, kappa_inf_upper, NormwiseWeights, SelectionMatrix,
};
use crate::error::{LseError, Result};
use crate::lse::{solve, LseProblem, LseSolution};

use super::measures::{epsilon0, epsilon1, epsilon2_rel, relative_errors};
use super::problem::{build_test_problem, sample_perturbation_stream, TestProblemConfig};

#[derive(Clone, Debug, PartialEq)]
pub struct NamedSelection {
    pub label: String,
    pub selection: SelectionMatrix<f64>,
}

impl NamedSelection {
    pub fn new(label: impl Into<String>, selection: SelectionMatrix<f64>) -> Self {
        NamedSelection {
            label: label.into(),
            selection,
        }
    }
}

/// `I₄`, `L1` selecting `(x₁, x₂, x₃)` and `L2` selecting `x₄`.
pub fn standard_selections() -> Vec<NamedSelection> {
    vec![
        NamedSelection::new("I", SelectionMatrix::identity(4)),
        NamedSelection::new("L1", SelectionMatrix::from_indices(&[0, 1, 2], 4).unwrap()),
        NamedSelection::new("L2", SelectionMatrix::from_indices(&[3], 4).unwrap()),
    ]
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub problems: Vec<TestProblemConfig>,
    pub selections: Vec<NamedSelection>,
    pub magnitude: f64,
    pub trials: usize,
}

/// First trial, maximum and median over all trials.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialStats {
    #[serde(with = "crate::serde_ext::real")]
    pub first: f64,
    #[serde(with = "crate::serde_ext::real")]
    pub max: f64,
    #[serde(with = "crate::serde_ext::real")]
    pub median: f64,
}

impl TrialStats {
    pub fn from_values(values: &[f64]) -> Self {
        if values.is_empty() {
            return TrialStats { first: f64::NAN, max: f64::NAN, median: f64::NAN };
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 1 {
            sorted[mid]
        } else {
            0.5 * (sorted[mid - 1] + sorted[mid])
        };
        TrialStats {
            first: values[0],
            max: sorted[sorted.len() - 1],
            median,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    #[serde(with = "crate::serde_ext::real")]
    pub r2: f64,
    #[serde(with = "crate::serde_ext::real")]
    pub rinf: f64,
    #[serde(with = "crate::serde_ext::real")]
    pub rc: f64,
    #[serde(with = "crate::serde_ext::real")]
    pub eps0: f64,
    pub eps1: f64,
    pub eps2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub eta: f64,
    pub delta: f64,
    pub selection: String,
    pub b2: String,
    pub seed: u64,
    pub magnitude: f64,
    pub cond_augmented: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa_inf_rel: f64,
    pub kappa_inf_upper: f64,
    #[serde(with = "crate::serde_ext::real")]
    pub kappa_c: f64,
    #[serde(with = "crate::serde_ext::real")]
    pub kappa_c_upper: f64,
    pub r2: TrialStats,
    pub rinf: TrialStats,
    pub rc: TrialStats,
    pub eps0: TrialStats,
    pub eps1: TrialStats,
    pub eps2: TrialStats,
    /// Linear bounds from the largest perturbation magnitudes observed.
    pub bound_eps1_kappa1: f64,
    pub bound_eps2_kappa2: f64,
    #[serde(with = "crate::serde_ext::real")]
    pub bound_eps0_kappa_inf: f64,
    #[serde(with = "crate::serde_ext::real")]
    pub bound_eps0_kappa_c: f64,
    /// Per-trial `ε₂κ₂ / r₂`.
    pub overestimate_normwise: TrialStats,
    /// Per-trial `ε₀κ꜀ / r꜀`.
    pub overestimate_componentwise: TrialStats,
    /// Per-trial `r∞ / (ε₀ κ∞ʳᵉˡ)`.
    pub first_order_mixed: TrialStats,
    pub per_trial: Vec<TrialRecord>,
}

struct Conditioning {
    cond_augmented: f64,
    kappa1: f64,
    kappa2: f64,
    kappa_inf_rel: f64,
    kappa_inf_upper: f64,
    kappa_c: f64,
    kappa_c_upper: f64,
}

fn conditioning(solution: &LseSolution<f64>, sel: &SelectionMatrix<f64>) -> Result<Conditioning> {
    Ok(Conditioning {
        cond_augmented: augmented_condition(solution),
        kappa1: kappa1_cox_higham(solution)?,
        kappa2: kappa2_li_wang(solution, sel, NormwiseWeights::default())?,
        kappa_inf_rel: kappa_inf_rel(solution, sel)?,
        kappa_inf_upper: kappa_inf_upper(solution, sel)?.total,
        kappa_c: kappa_c(solution, sel)?.value,
        kappa_c_upper: kappa_c_upper(solution, sel)?.total,
    })
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 {
            f64::NAN
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    }
}

/// Runs every `(problem, selection)` pair. Trial `t` of a problem uses
/// stream `t` of the problem's seed, so all selections of one problem see
/// the same perturbations.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    if config.trials == 0 {
        return Err(LseError::InvalidParameter("trials must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for cfg in &config.problems {
        let problem: LseProblem<f64> = build_test_problem(cfg)?;
        let solution = solve(&problem)?;

        let mut perturbed = Vec::with_capacity(config.trials);
        for t in 0..config.trials {
            let sample = sample_perturbation_stream(&problem, config.magnitude, cfg.seed, t as u64)?;
            let d = &sample.delta;
            let tilde = solve(&problem.perturbed(&d.da, &d.dc, &d.db, &d.dd)?)?;
            let eps = (
                epsilon0(&problem, d),
                epsilon1(&problem, d)?,
                epsilon2_rel(&problem, d, NormwiseWeights::default())?,
            );
            perturbed.push((tilde.x().clone(), eps));
        }

        for named in &config.selections {
            let sel = &named.selection;
            let c = conditioning(&solution, sel)?;
            let mut records = Vec::with_capacity(config.trials);
            for (xt, (e0, e1, e2)) in &perturbed {
                let rel = relative_errors(solution.x(), xt, sel)?;
                records.push(TrialRecord {
                    r2: rel.r2,
                    rinf: rel.rinf,
                    rc: rel.rc,
                    eps0: *e0,
                    eps1: *e1,
                    eps2: *e2,
                });
            }
            let stats = |f: &dyn Fn(&TrialRecord) -> f64| {
                TrialStats::from_values(&records.iter().map(f).collect::<Vec<_>>())
            };
            let eps0 = stats(&|r| r.eps0);
            let eps1 = stats(&|r| r.eps1);
            let eps2 = stats(&|r| r.eps2);
            rows.push(ExperimentRow {
                eta: cfg.eta,
                delta: cfg.delta,
                selection: named.label.clone(),
                b2: cfg.b2_mode.to_string(),
                seed: cfg.seed,
                magnitude: config.magnitude,
                cond_augmented: c.cond_augmented,
                kappa1: c.kappa1,
                kappa2: c.kappa2,
                kappa_inf_rel: c.kappa_inf_rel,
                kappa_inf_upper: c.kappa_inf_upper,
                kappa_c: c.kappa_c,
                kappa_c_upper: c.kappa_c_upper,
                r2: stats(&|r| r.r2),
                rinf: stats(&|r| r.rinf),
                rc: stats(&|r| r.rc),
                bound_eps1_kappa1: eps1.max * c.kappa1,
                bound_eps2_kappa2: eps2.max * c.kappa2,
                bound_eps0_kappa_inf: eps0.max * c.kappa_inf_rel,
                bound_eps0_kappa_c: eps0.max * c.kappa_c,
                overestimate_normwise: stats(&|r| ratio(r.eps2 * c.kappa2, r.r2)),
                overestimate_componentwise: stats(&|r| ratio(r.eps0 * c.kappa_c, r.rc)),
                first_order_mixed: stats(&|r| ratio(r.rinf, r.eps0 * c.kappa_inf_rel)),
                eps0,
                eps1,
                eps2,
                per_trial: records,
            });
        }
    }
    Ok(rows)
}
