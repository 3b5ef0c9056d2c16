//! Reproducible perturbation experiments on a small family of LSE problems
//! whose solution components differ widely in magnitude.

mod experiment;
mod measures;
mod oracle;
mod problem;

pub use experiment::{
    run_experiment, standard_selections, ExperimentConfig, ExperimentRow, NamedSelection,
    TrialRecord, TrialStats,
};
pub use measures::{epsilon0, epsilon1, epsilon2, epsilon2_rel, relative_errors, RelativeErrors};
pub use oracle::{brute_force_kappa, OracleMode, ORACLE_MAX_ENTRIES};
pub use problem::{
    build_test_problem, sample_perturbation, sample_perturbation_stream, B2Mode, PerturbationSample,
    TestProblemConfig,
};
