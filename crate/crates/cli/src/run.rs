//! Subcommand execution. Every subcommand returns the full text written to
//! stdout so that output is easy to test and byte-for-byte reproducible.

use std::fs;
use std::path::Path;

use lse_cond::conditioning::{
    estimated_conditions, exact_conditions, EstimatedConditions, ExactConditions,
    NormwiseWeights, SelectionMatrix,
};
use lse_cond::lab::{
    build_test_problem, run_experiment, standard_selections, B2Mode, ExperimentConfig,
    ExperimentRow, NamedSelection, TestProblemConfig,
};
use lse_cond::{solve, DenseMatrix, DenseVector, LseError, LseProblem, LseSolution};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::args::{
    Cli, Command, CondArgs, EstimateArgs, ExperimentArgs, Format, GenerateArgs, ProblemFiles,
    SolveArgs,
};
use crate::mtx::{self, MtxError};
use crate::output::{csv, fmt_g, table};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: MtxError },
    #[error(transparent)]
    Unreadable(MtxError),
    #[error(transparent)]
    Lse(#[from] LseError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    /// 2 for a violated rank condition, 3 for unreadable input files.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { .. } | CliError::Unreadable(_) => 3,
            CliError::Lse(LseError::RankDeficient { .. }) => 2,
            _ => 1,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Solve(a) => run_solve(a),
        Command::Cond(a) => run_cond(a),
        Command::Estimate(a) => run_estimate(a),
        Command::Experiment(a) => run_experiment_cmd(a),
        Command::Generate(a) => run_generate(a),
    }
}

fn load_problem(files: &ProblemFiles) -> Result<LseProblem<f64>, CliError> {
    let a = read_matrix(&files.a)?;
    let c = read_matrix(&files.c)?;
    let b = read_vector(&files.b)?;
    let d = read_vector(&files.d)?;
    Ok(LseProblem::new(a, c, b, d)?)
}

fn parse_failure(path: &Path) -> impl FnOnce(MtxError) -> CliError + '_ {
    move |source| match source {
        MtxError::Io { .. } => CliError::Unreadable(source),
        source => CliError::Parse { path: path.display().to_string(), source },
    }
}

fn read_matrix(path: &Path) -> Result<DenseMatrix<f64>, CliError> {
    mtx::parse_matrix_file(path).map_err(parse_failure(path))
}

fn read_vector(path: &Path) -> Result<DenseVector<f64>, CliError> {
    mtx::parse_vector_file(path).map_err(parse_failure(path))
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub x: Vec<f64>,
    pub r: Vec<f64>,
    pub lambda: Vec<f64>,
    /// `‖Cx − d‖₂`.
    pub constraint_residual: f64,
    /// `‖Aᵀr + Cᵀλ‖₂`.
    pub stationarity_residual: f64,
}

impl SolveReport {
    fn new(s: &LseSolution<f64>) -> Self {
        let pr = s.problem();
        let cres = &pr.c().mul_vec(s.x()) - pr.d();
        let stat = &pr.a().tr_mul_vec(s.r()) + &pr.c().tr_mul_vec(s.lambda());
        SolveReport {
            m: pr.m(),
            n: pr.n(),
            p: pr.p(),
            x: s.x().to_vec(),
            r: s.r().to_vec(),
            lambda: s.lambda().to_vec(),
            constraint_residual: cres.norm2(),
            stationarity_residual: stat.norm2(),
        }
    }
}

fn run_solve(args: &SolveArgs) -> Result<String, CliError> {
    let report = SolveReport::new(&solve(&load_problem(&args.files)?)?);
    match args.format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut rows = Vec::new();
            for (name, v) in [("x", &report.x), ("r", &report.r), ("lambda", &report.lambda)] {
                for (i, value) in v.iter().enumerate() {
                    rows.push(vec![name.to_string(), (i + 1).to_string(), format!("{value:e}")]);
                }
            }
            rows.push(vec!["constraint_residual".into(), String::new(), format!("{:e}", report.constraint_residual)]);
            rows.push(vec!["stationarity_residual".into(), String::new(), format!("{:e}", report.stationarity_residual)]);
            Ok(csv(&["quantity", "index", "value"], &rows)?)
        }
        Format::Table => {
            let mut out = format!("m = {}, n = {}, p = {}\n\n", report.m, report.n, report.p);
            for (name, v) in [("x", &report.x), ("r", &report.r), ("lambda", &report.lambda)] {
                out.push_str(name);
                out.push('\n');
                for value in v {
                    out.push_str(&format!("  {}\n", fmt_g(*value, 12)));
                }
            }
            out.push_str(&format!(
                "\n||Cx - d||_2            = {}\n||A^T r + C^T lambda||_2 = {}\n",
                fmt_g(report.constraint_residual, 4),
                fmt_g(report.stationarity_residual, 4)
            ));
            Ok(out)
        }
    }
}

/// Resolves a selection spec against a solution of length `n`.
pub fn parse_selection(spec: &str, n: usize) -> Result<NamedSelection, CliError> {
    let named = |label: &str, rows: &[usize]| -> Result<NamedSelection, CliError> {
        if rows.iter().any(|&r| r > n) {
            return Err(CliError::Usage(format!(
                "selection `{spec}` needs n >= {}, but n = {n}",
                rows.iter().max().unwrap()
            )));
        }
        let idx: Vec<usize> = rows.iter().map(|r| r - 1).collect();
        Ok(NamedSelection::new(label, SelectionMatrix::from_indices(&idx, n)?))
    };
    match spec.to_ascii_lowercase().as_str() {
        "identity" | "i" => return Ok(NamedSelection::new("I", SelectionMatrix::identity(n))),
        "l1" => return named("L1", &[1, 2, 3]),
        "l2" => return named("L2", &[4]),
        _ => {}
    }
    let looks_like_rows = spec.chars().all(|ch| ch.is_ascii_digit() || ch == ',' || ch == ' ');
    if looks_like_rows && !spec.trim().is_empty() {
        let rows = spec
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Usage(format!("selection `{spec}`: {e}")))?;
        if rows.contains(&0) {
            return Err(CliError::Usage(format!("selection `{spec}`: rows are 1-based")));
        }
        return named(&format!("rows({spec})"), &rows);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(CliError::Usage(format!(
            "selection `{spec}` is neither identity, l1, l2, a row list nor an existing file"
        )));
    }
    let l = read_matrix(path)?;
    if l.cols() != n {
        return Err(CliError::Usage(format!(
            "selection file {spec} has {} columns, expected n = {n}",
            l.cols()
        )));
    }
    Ok(NamedSelection::new(spec, SelectionMatrix::new(l)?))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CondReport {
    pub selection: String,
    pub k: usize,
    /// `[α_A, α_C, α_b, α_d]` used for `κ₂`.
    pub weights: Vec<f64>,
    pub exact: ExactConditions,
}

fn run_cond(args: &CondArgs) -> Result<String, CliError> {
    let s = solve(&load_problem(&args.files)?)?;
    let sel = parse_selection(&args.selection, s.problem().n())?;
    let w = &args.alpha;
    let weights = NormwiseWeights { alpha_a: w[0], alpha_c: w[1], alpha_b: w[2], alpha_d: w[3] };
    let report = CondReport {
        selection: sel.label.clone(),
        k: sel.selection.k(),
        weights: w.clone(),
        exact: exact_conditions(&s, &sel.selection, weights)?,
    };
    let e = &report.exact;
    let fields = [
        ("cond_augmented", e.cond_augmented),
        ("kappa_inf_rel", e.kappa_inf_rel),
        ("kappa_c", e.kappa_c),
        ("kappa_2_bound", e.kappa_2_bound),
        ("kappa1", e.kappa1),
        ("kappa2", e.kappa2),
    ];
    match args.format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut header = vec!["selection", "k"];
            header.extend(fields.iter().map(|f| f.0));
            let mut row = vec![report.selection.clone(), report.k.to_string()];
            row.extend(fields.iter().map(|f| format!("{:e}", f.1)));
            Ok(csv(&header, &[row])?)
        }
        Format::Table => {
            let mut rows: Vec<Vec<String>> = fields
                .iter()
                .map(|(name, v)| vec![name.to_string(), fmt_g(*v, 6)])
                .collect();
            if !e.kappa_c_unbounded.is_empty() {
                let idx: Vec<String> = e.kappa_c_unbounded.iter().map(|i| (i + 1).to_string()).collect();
                rows.push(vec!["zero components of Lx".into(), idx.join(",")]);
            }
            Ok(format!(
                "selection {} (k = {})\n\n{}",
                report.selection,
                report.k,
                table(&["quantity", "value"], &rows)
            ))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub selection: String,
    pub k: usize,
    pub estimated: EstimatedConditions,
}

fn run_estimate(args: &EstimateArgs) -> Result<String, CliError> {
    let s = solve(&load_problem(&args.files)?)?;
    let sel = parse_selection(&args.selection, s.problem().n())?;
    let report = EstimateReport {
        selection: sel.label.clone(),
        k: sel.selection.k(),
        estimated: estimated_conditions(&s, &sel.selection)?,
    };
    let blocks = [
        ("kappa_inf_upper", &report.estimated.kappa_inf_upper),
        ("kappa_c_upper", &report.estimated.kappa_c_upper),
    ];
    match args.format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut rows = Vec::new();
            for (bound, b) in blocks {
                for t in &b.terms {
                    rows.push(vec![bound.into(), t.name.clone(), format!("{:e}", t.value), t.iterations.to_string()]);
                }
                rows.push(vec![bound.into(), "total".into(), format!("{:e}", b.total), String::new()]);
            }
            Ok(csv(&["bound", "term", "value", "iterations"], &rows)?)
        }
        Format::Table => {
            let mut out = format!("selection {} (k = {})\n", report.selection, report.k);
            for (bound, b) in blocks {
                let mut rows: Vec<Vec<String>> = b
                    .terms
                    .iter()
                    .map(|t| vec![t.name.clone(), fmt_g(t.value, 6), t.iterations.to_string()])
                    .collect();
                rows.push(vec!["total".into(), fmt_g(b.total, 6), String::new()]);
                out.push('\n');
                out.push_str(bound);
                out.push('\n');
                out.push_str(&table(&["term", "value", "iterations"], &rows));
            }
            Ok(out)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub seed: u64,
    pub magnitude: f64,
    pub trials: usize,
    pub b2: String,
    pub rows: Vec<ExperimentRow>,
}

const EXPERIMENT_COLUMNS: [&str; 20] = [
    "eta", "delta", "L", "cond", "r2", "kappa1", "kappa2", "rinf", "kappa_inf_rel",
    "kappa_inf_upper", "rc", "kappa_c", "kappa_c_upper", "eps0", "eps1", "eps2",
    "eps1_kappa1", "eps2_kappa2", "eps0_kappa_inf", "eps0_kappa_c",
];

fn experiment_cells(r: &ExperimentRow, fmt: impl Fn(f64) -> String) -> Vec<String> {
    let mut cells = vec![fmt(r.eta), fmt(r.delta), r.selection.clone()];
    cells.extend(
        [
            r.cond_augmented,
            r.r2.max,
            r.kappa1,
            r.kappa2,
            r.rinf.max,
            r.kappa_inf_rel,
            r.kappa_inf_upper,
            r.rc.max,
            r.kappa_c,
            r.kappa_c_upper,
            r.eps0.max,
            r.eps1.max,
            r.eps2.max,
            r.bound_eps1_kappa1,
            r.bound_eps2_kappa2,
            r.bound_eps0_kappa_inf,
            r.bound_eps0_kappa_c,
        ]
        .into_iter()
        .map(&fmt),
    );
    cells
}

fn run_experiment_cmd(args: &ExperimentArgs) -> Result<String, CliError> {
    let b2: B2Mode = args.b2.parse()?;
    let selections = if args.selection.eq_ignore_ascii_case("all") {
        standard_selections()
    } else {
        vec![parse_selection(&args.selection, 4)?]
    };
    let mut problems = Vec::new();
    for &eta in &args.eta {
        for &delta in &args.delta {
            problems.push(TestProblemConfig { eta, delta, b2_mode: b2, seed: args.seed });
        }
    }
    let rows = run_experiment(&ExperimentConfig {
        problems,
        selections,
        magnitude: args.magnitude,
        trials: args.trials,
    })?;
    let report = ExperimentReport {
        seed: args.seed,
        magnitude: args.magnitude,
        trials: args.trials,
        b2: b2.to_string(),
        rows,
    };
    match args.format {
        Format::Json => json(&report),
        Format::Csv => {
            let rows: Vec<_> = report.rows.iter().map(|r| experiment_cells(r, |v| format!("{v:e}"))).collect();
            Ok(csv(&EXPERIMENT_COLUMNS, &rows)?)
        }
        Format::Table => {
            let rows: Vec<_> = report.rows.iter().map(|r| experiment_cells(r, |v| fmt_g(v, 5))).collect();
            Ok(format!(
                "seed {}, magnitude {}, {} trials, b2 {}; r and eps columns are maxima over trials\n\n{}",
                report.seed,
                fmt_g(report.magnitude, 6),
                report.trials,
                report.b2,
                table(&EXPERIMENT_COLUMNS, &rows)
            ))
        }
    }
}

fn run_generate(args: &GenerateArgs) -> Result<String, CliError> {
    let cfg = TestProblemConfig {
        eta: args.eta,
        delta: args.delta,
        b2_mode: args.b2.parse()?,
        seed: 0,
    };
    let pr: LseProblem<f64> = build_test_problem(&cfg)?;
    fs::create_dir_all(&args.out).map_err(|e| CliError::Io {
        path: args.out.display().to_string(),
        message: e.to_string(),
    })?;
    let files = [
        ("A.mtx", mtx::write_matrix(pr.a())),
        ("C.mtx", mtx::write_matrix(pr.c())),
        ("b.mtx", mtx::write_vector(pr.b())),
        ("d.mtx", mtx::write_vector(pr.d())),
    ];
    let mut out = String::new();
    for (name, text) in files {
        let path = args.out.join(name);
        fs::write(&path, text).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        out.push_str(&format!("wrote {}\n", path.display()));
    }
    Ok(out)
}
