use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "lse-cond",
    version,
    about = "Equality-constrained least squares: solve, condition numbers, estimates and perturbation experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve min ||Ax - b|| subject to Cx = d.
    Solve(SolveArgs),
    /// Exact condition numbers of Lx.
    Cond(CondArgs),
    /// Estimated upper bounds with per-term breakdown.
    Estimate(EstimateArgs),
    /// Perturbation study on the built-in 9x4 test family.
    Experiment(ExperimentArgs),
    /// Write a member of the built-in test family as MatrixMarket files.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct ProblemFiles {
    /// m x n matrix A (MatrixMarket).
    #[arg(long = "a", value_name = "FILE")]
    pub a: PathBuf,
    /// p x n matrix C.
    #[arg(long = "c", value_name = "FILE")]
    pub c: PathBuf,
    /// Right-hand side b (length m).
    #[arg(long = "b", value_name = "FILE")]
    pub b: PathBuf,
    /// Right-hand side d (length p).
    #[arg(long = "d", value_name = "FILE")]
    pub d: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub files: ProblemFiles,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CondArgs {
    #[command(flatten)]
    pub files: ProblemFiles,
    /// Selection L: `identity`, `l1`, `l2`, 1-based rows such as `1,2,3`,
    /// or a MatrixMarket file.
    #[arg(long = "L", visible_alias = "selection", default_value = "identity")]
    pub selection: String,
    /// Weights alpha_A,alpha_C,alpha_b,alpha_d for kappa2.
    #[arg(long, value_delimiter = ',', num_args = 4, default_values_t = [1.0, 1.0, 1.0, 1.0])]
    pub alpha: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub files: ProblemFiles,
    /// Selection L, as for `cond`.
    #[arg(long = "L", visible_alias = "selection", default_value = "identity")]
    pub selection: String,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Values of eta, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [1e-3, 1e-6])]
    pub eta: Vec<f64>,
    /// Values of delta, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [1e-3, 1e-6])]
    pub delta: Vec<f64>,
    /// `all` (I, l1, l2) or a single selection as for `cond`.
    #[arg(long = "L", visible_alias = "selection", default_value = "all")]
    pub selection: String,
    /// Residual direction: `spread` or one of e2, e4, e5, e6, e8.
    #[arg(long, default_value = "spread")]
    pub b2: String,
    #[arg(long, env = "LSE_COND_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Relative size of the componentwise perturbations.
    #[arg(long, default_value_t = 1e-8)]
    pub magnitude: f64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 1e-3)]
    pub eta: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub delta: f64,
    #[arg(long, default_value = "spread")]
    pub b2: String,
    /// Output directory; receives A.mtx, C.mtx, b.mtx and d.mtx.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}
