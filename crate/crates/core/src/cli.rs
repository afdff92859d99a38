//! Command-line front end.
//!
//! Exit codes: `0` success, `1` runtime failure, `2` invalid input or flags,
//! `3` solver non-convergence under `--strict`. Failures are reported on
//! stderr as one JSON object `{code, message, context}`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::data::covariance::normalize_row_norms;
use crate::data::io::{save_dense_csv, save_with_metadata, write_matrix_market};
use crate::data::synthetic::spiked_singular_values;
use crate::data::{
    covariance_from_data, load_matrix, pit_props, synthetic_spiked, CovarianceOptions, LoadedMatrix, MatrixFormat,
    MatrixKind, MatrixMetadata, RowScaling, SyntheticConfig, PITPROPS_NAMES,
};
use crate::error::{Result, SpcaError};
use crate::eval::{
    evaluate_with, sparsity_sweep, write_sweep_csv, Algorithm, EvalContext, EvalReport, Reference, SweepConfig,
    SweepRow,
};
use crate::linalg::{matrix_functionals, EigenRequest, SymmetricMatrix};
use crate::oracle::{binomial, exact_spca, DEFAULT_MAX_ENUMERATION};
use crate::random::random_psd;
use crate::sdp::{spca_sdp, AdmmConfig, Feasibility, SdpDiagnostics};
use crate::svd_threshold::{default_rank, spca_svd, Selection, SvdThresholdConfig};

/// Bumped whenever a report field is renamed or removed.
pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

/// Tolerances used by `reproduce-pitprops`.
pub const LOADING_TOL: f64 = 0.01;
pub const PVE_TOL: f64 = 0.001;

/// Published first-component loadings, explained variance and objective.
pub const PITPROPS_SVD_LOADINGS: [f64; 13] =
    [0.420, 0.422, 0.0, 0.0, 0.0, 0.296, 0.416, 0.305, 0.371, 0.394, 0.0, 0.0, 0.0];
pub const PITPROPS_SDP_LOADINGS: [f64; 13] =
    [0.424, 0.430, 0.0, 0.0, 0.0, 0.268, 0.403, 0.313, 0.379, 0.399, 0.0, 0.0, 0.0];
pub const PITPROPS_SVD_PVE: f64 = 0.3071;
pub const PITPROPS_SDP_PVE: f64 = 0.3074;
pub const PITPROPS_SVD_OBJECTIVE: f64 = 3.993;
pub const PITPROPS_SDP_OBJECTIVE: f64 = 3.996;

#[derive(Debug, Parser)]
#[command(name = "spca", version, about = "Sparse PCA by eigenvector and SDP thresholding")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract one sparse component.
    Solve(SolveArgs),
    /// Evaluate one algorithm over a grid of sparsity values.
    Sweep(SweepArgs),
    /// Write a spiked synthetic data matrix.
    GenSynthetic(GenSyntheticArgs),
    /// Compare both algorithms and the exact optimum on Pit Props.
    ReproducePitprops(ReproduceArgs),
    /// Exhaustive search over all supports of size k.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgoArg {
    Svd,
    Sdp,
    #[value(alias = "oracle")]
    Exact,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Svd => Algorithm::Svd,
            AlgoArg::Sdp => Algorithm::Sdp,
            AlgoArg::Exact => Algorithm::Oracle,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SvdMethodArg {
    Exact,
    Krylov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InputFormatArg {
    Mtx,
    Csv,
}

/// Where the matrix comes from and how it is preprocessed.
#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// File path, or `builtin:pitprops`, `builtin:identityN`, `builtin:randpsdN`,
    /// `builtin:synthetic`.
    #[arg(long)]
    pub input: String,
    /// File format; inferred from the extension when omitted.
    #[arg(long, value_enum)]
    pub input_format: Option<InputFormatArg>,
    /// Treat the file as an `m x n` data matrix and form its covariance.
    #[arg(long)]
    pub data: bool,
    /// Subtract column means before forming the covariance of a data matrix.
    #[arg(long)]
    pub center: bool,
    /// Rescale the covariance of a data matrix to unit diagonal.
    #[arg(long)]
    pub correlation: bool,
    /// Rescale towards unit row norms before solving.
    #[arg(long)]
    pub unit_row_norm: bool,
    /// Seed for builtin random inputs and the randomized eigensolver.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Accuracy parameter; required when `--sparsity` is omitted.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Number of eigenpairs for the thresholding path.
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub admm_rho: f64,
    #[arg(long, default_value_t = 20_000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub primal_tol: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub dual_tol: f64,
    /// Keep the ADMM penalty fixed.
    #[arg(long)]
    pub fixed_rho: bool,
    #[arg(long, value_enum, default_value = "exact")]
    pub svd_method: SvdMethodArg,
    /// Accuracy of the randomized eigensolver.
    #[arg(long, default_value_t = 0.1)]
    pub svd_eps: f64,
    /// Largest number of supports the exhaustive search may visit.
    #[arg(long, default_value_t = DEFAULT_MAX_ENUMERATION)]
    pub max_enumeration: u128,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Report destination; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
    /// Exit with status 3 when the SDP solver stops before converging.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum)]
    pub algo: AlgoArg,
    #[arg(long)]
    pub k: usize,
    /// Keep exactly this many coordinates; theory mode when omitted.
    #[arg(long)]
    pub sparsity: Option<usize>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum)]
    pub algo: AlgoArg,
    /// `a:b` (inclusive) or a comma-separated list.
    #[arg(long)]
    pub grid: String,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GenSyntheticArgs {
    #[arg(long, default_value_t = 128)]
    pub m: usize,
    #[arg(long, default_value_t = 4096)]
    pub n: usize,
    /// Givens rotation angle in radians; defaults to `0.27 pi`.
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write `X^T X / (m - 1)` instead of `X`.
    #[arg(long)]
    pub covariance: bool,
    /// Matrix destination (`.mtx` or `.csv`).
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ReproduceArgs {
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_ENUMERATION)]
    pub max_enumeration: u128,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Flag-level failure, raised before any computation.
#[derive(Debug)]
pub struct Failure {
    pub exit: i32,
    pub code: &'static str,
    pub message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            exit: EXIT_INVALID,
            code: "invalid_arguments",
            message: message.into(),
        }
    }
}

impl From<SpcaError> for Failure {
    fn from(e: SpcaError) -> Self {
        let exit = match e {
            SpcaError::Io(_) => EXIT_FAILURE,
            SpcaError::ConvergenceFailure { .. } | SpcaError::DegenerateSolution { .. } => EXIT_NOT_CONVERGED,
            _ => EXIT_INVALID,
        };
        Self {
            exit,
            code: e.code(),
            message: e.to_string(),
        }
    }
}

/// Input as resolved for the report.
#[derive(Debug, Clone, Serialize)]
pub struct InputSummary {
    pub source: String,
    pub n: usize,
    pub trace: f64,
    pub row_scaling: Option<RowScaling>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub input: String,
    pub input_format: Option<InputFormatArg>,
    pub data: bool,
    pub center: bool,
    pub correlation: bool,
    pub unit_row_norm: bool,
    pub seed: u64,
    pub algo: Option<AlgoArg>,
    pub k: Option<usize>,
    pub sparsity: Option<usize>,
    pub grid: Option<Vec<usize>>,
    pub mode: Option<&'static str>,
    pub epsilon: Option<f64>,
    pub l: Option<usize>,
    pub eigen: Option<EigenRequest>,
    pub admm: Option<AdmmConfig>,
    pub max_enumeration: u128,
    pub format: OutputFormat,
    pub strict: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SdpSummary {
    pub objective: f64,
    pub trace: f64,
    pub l1_norm: f64,
    pub feasibility: Feasibility,
    pub iterations_used: usize,
    pub converged: bool,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub final_rho: f64,
    pub solver_gap: f64,
    pub certified_floor: f64,
    pub s: usize,
    pub alpha: f64,
    pub beta: f64,
    pub top_eigenvalue: f64,
    pub rank_one_objective: f64,
    pub rounding_error: f64,
    pub holder_floor: f64,
}

impl SdpSummary {
    fn new(out: &crate::sdp::SdpThresholdResult) -> Self {
        let sol = &out.solution;
        let SdpDiagnostics {
            alpha,
            beta,
            top_eigenvalue,
            rank_one_objective,
            rounding_error,
            holder_floor,
            ..
        } = out.diagnostics;
        Self {
            objective: sol.objective,
            trace: sol.trace(),
            l1_norm: sol.l1_norm(),
            feasibility: sol.feasibility,
            iterations_used: sol.iterations_used,
            converged: sol.converged,
            primal_residual: sol.primal_residual,
            dual_residual: sol.dual_residual,
            final_rho: sol.final_rho,
            solver_gap: sol.solver_gap,
            certified_floor: out.certified_floor,
            s: out.s,
            alpha,
            beta,
            top_eigenvalue,
            rank_one_objective,
            rounding_error,
            holder_floor,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveOutcome {
    pub algo: AlgoArg,
    pub report: EvalReport,
    pub loadings: Vec<f64>,
    pub eigenvalues: Option<Vec<f64>>,
    pub sdp: Option<SdpSummary>,
    pub instances_enumerated: Option<u128>,
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize)]
struct SolveReport<'a> {
    schema_version: u32,
    command: &'static str,
    config: &'a ResolvedConfig,
    input: &'a InputSummary,
    result: &'a SolveOutcome,
}

#[derive(Debug, Clone, Serialize)]
struct SweepReport<'a> {
    schema_version: u32,
    command: &'static str,
    config: &'a ResolvedConfig,
    input: &'a InputSummary,
    rows: &'a [SweepRow],
}

/// One row of the Pit Props comparison.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub method: &'static str,
    pub abs_loadings: Vec<f64>,
    pub pve: f64,
    pub objective: f64,
    pub expected_loadings: Option<Vec<f64>>,
    pub expected_pve: Option<f64>,
    pub expected_objective: f64,
    pub max_loading_delta: Option<f64>,
    pub pve_delta: Option<f64>,
    pub objective_delta: f64,
    pub zero_rows: Vec<&'static str>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PitPropsComparison {
    pub variables: Vec<&'static str>,
    pub rows: Vec<ComparisonRow>,
    pub pass: bool,
}

/// Parses `argv` (including the program name) and runs the command, writing
/// the report to `--output` or `out` and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let exit = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            if e.use_stderr() {
                let _ = emit_error(err, "invalid_arguments", &e.to_string(), json!({}));
            } else {
                let _ = write!(out, "{e}");
            }
            return exit;
        }
    };
    let context = json!({ "command": command_name(&cli.command) });
    match dispatch(&cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = emit_error(err, f.code, &f.message, context);
            f.exit
        }
    }
}

/// [`run_with`] on the process arguments and standard streams.
pub fn run() -> i32 {
    crate::configure_threads_from_env();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn emit_error(err: &mut dyn Write, code: &str, message: &str, context: serde_json::Value) -> std::io::Result<()> {
    let v = json!({ "code": code, "message": message.trim_end(), "context": context });
    writeln!(err, "{v}")
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Solve(_) => "solve",
        Command::Sweep(_) => "sweep",
        Command::GenSynthetic(_) => "gen-synthetic",
        Command::ReproducePitprops(_) => "reproduce-pitprops",
        Command::Oracle(_) => "oracle",
    }
}

fn dispatch(c: &Command, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    match c {
        Command::Solve(a) => cmd_solve(a, "solve", out),
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::GenSynthetic(a) => cmd_gen_synthetic(a, out),
        Command::ReproducePitprops(a) => cmd_reproduce(a, out),
        Command::Oracle(a) => cmd_oracle(a, out),
    }
}

/// Resolves a builtin name or a file into a symmetric matrix.
pub fn resolve_input(args: &InputArgs) -> Result<(SymmetricMatrix, InputSummary)> {
    let mut a = if let Some(name) = args.input.strip_prefix("builtin:") {
        builtin_matrix(name, args.seed)?
    } else {
        let path = Path::new(&args.input);
        let format = match args.input_format {
            Some(InputFormatArg::Mtx) => MatrixFormat::MatrixMarket,
            Some(InputFormatArg::Csv) => MatrixFormat::DenseCsv,
            None => MatrixFormat::from_path(path),
        };
        if args.data {
            let x = load_matrix(path, format, MatrixKind::Data)?.into_data()?;
            let opts = CovarianceOptions {
                center: args.center,
                to_correlation: args.correlation,
                unit_row_norm: false,
            };
            covariance_from_data(&x, opts)?.matrix
        } else {
            if args.center || args.correlation {
                return Err(SpcaError::InvalidParameter(
                    "--center and --correlation apply only with --data".into(),
                ));
            }
            match load_matrix(path, format, MatrixKind::Symmetric)? {
                LoadedMatrix::Symmetric(a) => a,
                LoadedMatrix::Data(_) => unreachable!("requested symmetric"),
            }
        }
    };
    let mut row_scaling = None;
    if args.unit_row_norm {
        let (scaled, stats) = normalize_row_norms(
            &a,
            crate::data::covariance::ROW_SCALING_MAX_ITERS,
            crate::data::covariance::ROW_SCALING_TOL,
        )?;
        a = scaled;
        row_scaling = Some(stats);
    }
    let summary = InputSummary {
        source: args.input.clone(),
        n: a.n(),
        trace: a.trace(),
        row_scaling,
    };
    Ok((a, summary))
}

/// `pitprops`, `identityN`, `randpsdN` (Gram matrix of an `N x N` Gaussian
/// draw) or `synthetic` (uncentered covariance of a `32 x 256` spiked draw).
pub fn builtin_matrix(name: &str, seed: u64) -> Result<SymmetricMatrix> {
    let parse_n = |rest: &str| -> Result<usize> {
        rest.parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| SpcaError::InvalidParameter(format!("bad builtin size in `{name}`")))
    };
    if name == "pitprops" {
        Ok(pit_props())
    } else if name == "synthetic" {
        let x = synthetic_spiked(&SyntheticConfig::with_size(32, 256, seed))?;
        Ok(covariance_from_data(&x, CovarianceOptions::default())?.matrix)
    } else if let Some(rest) = name.strip_prefix("identity") {
        Ok(SymmetricMatrix::identity(parse_n(rest)?))
    } else if let Some(rest) = name.strip_prefix("randpsd") {
        let n = parse_n(rest)?;
        SymmetricMatrix::symmetrize(&random_psd(seed, n, n), crate::linalg::PSD_TOLERANCE)
    } else {
        Err(SpcaError::InvalidParameter(format!("unknown builtin `{name}`")))
    }
}

fn eigen_request(s: &SolverArgs, seed: u64) -> std::result::Result<EigenRequest, Failure> {
    match s.svd_method {
        SvdMethodArg::Exact => Ok(EigenRequest::Exact),
        SvdMethodArg::Krylov => {
            if !(s.svd_eps > 0.0 && s.svd_eps < 1.0) {
                return Err(Failure::invalid(format!("--svd-eps must lie in (0, 1), got {}", s.svd_eps)));
            }
            Ok(EigenRequest::block_krylov(s.svd_eps, seed))
        }
    }
}

fn admm_config(s: &SolverArgs, seed: u64) -> std::result::Result<AdmmConfig, Failure> {
    if !(s.admm_rho > 0.0) || !(s.primal_tol > 0.0) || !(s.dual_tol > 0.0) || s.max_iters == 0 {
        return Err(Failure::invalid(
            "--admm-rho, --primal-tol, --dual-tol and --max-iters must be positive",
        ));
    }
    Ok(AdmmConfig {
        rho: s.admm_rho,
        max_iters: s.max_iters,
        primal_tol: s.primal_tol,
        dual_tol: s.dual_tol,
        adaptive_rho: !s.fixed_rho,
        seed,
    })
}

fn check_epsilon(eps: f64) -> std::result::Result<(), Failure> {
    if eps > 0.0 && eps <= 1.0 {
        Ok(())
    } else {
        Err(Failure::invalid(format!("--epsilon must lie in (0, 1], got {eps}")))
    }
}

fn base_config(input: &InputArgs, output: &OutputArgs, max_enumeration: u128) -> ResolvedConfig {
    ResolvedConfig {
        input: input.input.clone(),
        input_format: input.input_format,
        data: input.data,
        center: input.center,
        correlation: input.correlation,
        unit_row_norm: input.unit_row_norm,
        seed: input.seed,
        algo: None,
        k: None,
        sparsity: None,
        grid: None,
        mode: None,
        epsilon: None,
        l: None,
        eigen: None,
        admm: None,
        max_enumeration,
        format: output.format,
        strict: output.strict,
    }
}

/// Validates solve flags and fills in every default.
pub fn resolve_solve(args: &SolveArgs) -> std::result::Result<ResolvedConfig, Failure> {
    let s = &args.solver;
    if args.k == 0 {
        return Err(Failure::invalid("--k must be positive"));
    }
    if args.sparsity == Some(0) {
        return Err(Failure::invalid("--sparsity must be positive"));
    }
    if args.sparsity.is_none() && args.algo != AlgoArg::Exact && s.epsilon.is_none() {
        return Err(Failure::invalid("theory mode (no --sparsity) requires --epsilon"));
    }
    if let Some(eps) = s.epsilon {
        check_epsilon(eps)?;
    }
    if s.l == Some(0) {
        return Err(Failure::invalid("--l must be positive"));
    }
    let mut cfg = base_config(&args.input, &args.output, s.max_enumeration);
    cfg.algo = Some(args.algo);
    cfg.k = Some(args.k);
    cfg.sparsity = args.sparsity;
    cfg.mode = Some(if args.sparsity.is_some() { "budget" } else { "theory" });
    match args.algo {
        AlgoArg::Svd => {
            let eps = s.epsilon.unwrap_or(1.0);
            cfg.epsilon = Some(eps);
            cfg.l = Some(s.l.unwrap_or_else(|| default_rank(eps)));
            cfg.eigen = Some(eigen_request(s, args.input.seed)?);
        }
        AlgoArg::Sdp => {
            cfg.epsilon = Some(s.epsilon.unwrap_or(1.0));
            cfg.admm = Some(admm_config(s, args.input.seed)?);
        }
        AlgoArg::Exact => {
            cfg.epsilon = s.epsilon;
            cfg.mode = None;
        }
    }
    Ok(cfg)
}

/// Runs one solve given a resolved configuration.
pub fn solve_resolved(a: &SymmetricMatrix, cfg: &ResolvedConfig) -> Result<SolveOutcome> {
    let algo = cfg.algo.ok_or_else(|| SpcaError::InvalidParameter("missing algorithm".into()))?;
    let k = cfg.k.ok_or_else(|| SpcaError::InvalidParameter("missing k".into()))?;
    let n = a.n();
    if k > n {
        return Err(SpcaError::InvalidParameter(format!("k = {k} exceeds n = {n}")));
    }
    let functionals = matrix_functionals(a)?;
    let selection = match cfg.sparsity {
        Some(s) => Selection::Budget { budget_s: s },
        None => Selection::Theory,
    };
    let oracle_value = if binomial(n, k) <= cfg.max_enumeration {
        Some(exact_spca(a, k, cfg.max_enumeration)?)
    } else {
        None
    };
    let mut ctx = EvalContext {
        epsilon: cfg.epsilon,
        reference: oracle_value
            .as_ref()
            .map_or(Reference::None, |o| Reference::Oracle(o.optimal_value)),
        ..EvalContext::default()
    };
    let mut outcome = SolveOutcome {
        algo,
        report: EvalReport::placeholder(),
        loadings: Vec::new(),
        eigenvalues: None,
        sdp: None,
        instances_enumerated: None,
        converged: true,
    };
    let vector = match algo {
        AlgoArg::Svd => {
            let svd_cfg = SvdThresholdConfig {
                k,
                epsilon: cfg.epsilon.unwrap_or(1.0),
                l_override: cfg.l,
                selection,
                eigen: cfg.eigen.unwrap_or_default(),
            };
            let res = spca_svd(a, &svd_cfg)?;
            outcome.eigenvalues = Some(res.eigenvalues);
            res.vector
        }
        AlgoArg::Sdp => {
            let admm = cfg.admm.clone().unwrap_or_default();
            let eps = cfg.epsilon.unwrap_or(1.0);
            let res = spca_sdp(a, k, eps, selection, &admm)?;
            ctx.alpha = Some(res.diagnostics.alpha);
            ctx.solver_gap = res.solution.solver_gap;
            if oracle_value.is_none() {
                ctx.reference = Reference::SdpObjective(res.solution.objective);
            }
            outcome.converged = res.solution.converged;
            outcome.sdp = Some(SdpSummary::new(&res));
            res.vector
        }
        AlgoArg::Exact => {
            let res = match oracle_value {
                Some(o) => o,
                None => exact_spca(a, k, cfg.max_enumeration)?,
            };
            outcome.instances_enumerated = Some(res.instances_enumerated);
            res.optimal_vector
        }
    };
    outcome.loadings = vector.to_dense();
    outcome.report = evaluate_with(a, &functionals, &vector, &ctx)?;
    Ok(outcome)
}

impl EvalReport {
    fn placeholder() -> Self {
        EvalReport {
            objective: 0.0,
            f_value: 0.0,
            pve: 0.0,
            sparsity: 0,
            norm: 0.0,
            support: Vec::new(),
            abs_loadings: Vec::new(),
            reference: Reference::None,
            epsilon: None,
            alpha: None,
            thm1_floor: None,
            thm2_floor: None,
            thm1_ratio_objective: None,
            thm1_ratio_reference: None,
            thm2_ratio_objective: None,
            thm2_ratio_reference: None,
        }
    }
}

fn sweep_row_of(outcome: &SolveOutcome, sparsity_param: usize) -> SweepRow {
    SweepRow {
        algo: outcome.algo.into(),
        sparsity_param,
        report: outcome.report.clone(),
        beta: outcome.sdp.as_ref().map(|s| s.beta),
        sdp_objective: outcome.sdp.as_ref().map(|s| s.objective),
        converged: outcome.sdp.as_ref().map(|s| s.converged),
    }
}

fn write_output(output: &OutputArgs, out: &mut dyn Write, bytes: &[u8]) -> Result<()> {
    match &output.output {
        Some(path) => std::fs::write(path, bytes)?,
        None => out.write_all(bytes)?,
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(v)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn convergence_exit(strict: bool, converged: bool) -> i32 {
    if strict && !converged {
        EXIT_NOT_CONVERGED
    } else {
        EXIT_OK
    }
}

fn cmd_solve(args: &SolveArgs, command: &'static str, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let cfg = resolve_solve(args)?;
    let (a, input) = resolve_input(&args.input)?;
    let outcome = solve_resolved(&a, &cfg)?;
    let bytes = match args.output.format {
        OutputFormat::Json => to_json(&SolveReport {
            schema_version: SCHEMA_VERSION,
            command,
            config: &cfg,
            input: &input,
            result: &outcome,
        })?,
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            write_sweep_csv(&mut buf, &[sweep_row_of(&outcome, cfg.sparsity.unwrap_or(args.k))])?;
            buf
        }
    };
    write_output(&args.output, out, &bytes)?;
    Ok(convergence_exit(args.output.strict, outcome.converged))
}

/// Parses `a:b` (inclusive) or `a,b,c`.
pub fn parse_grid(spec: &str) -> Result<Vec<usize>> {
    let bad = || SpcaError::InvalidParameter(format!("bad grid `{spec}`"));
    let grid: Vec<usize> = if let Some((lo, hi)) = spec.split_once(':') {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        (lo..=hi).collect()
    } else {
        spec.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<_>>()?
    };
    if grid.is_empty() || grid.contains(&0) {
        return Err(bad());
    }
    Ok(grid)
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let grid = parse_grid(&args.grid)?;
    let s = &args.solver;
    let epsilon = s.epsilon.unwrap_or(1.0);
    check_epsilon(epsilon)?;
    let sweep_cfg = SweepConfig {
        epsilon,
        l: s.l.unwrap_or(1),
        eigen: eigen_request(s, args.input.seed)?,
        admm: admm_config(s, args.input.seed)?,
        use_oracle_reference: true,
        max_enumeration: s.max_enumeration,
    };
    if sweep_cfg.l == 0 {
        return Err(Failure::invalid("--l must be positive"));
    }
    let mut cfg = base_config(&args.input, &args.output, s.max_enumeration);
    cfg.algo = Some(args.algo);
    cfg.grid = Some(grid.clone());
    cfg.mode = Some("budget");
    cfg.epsilon = Some(epsilon);
    match args.algo {
        AlgoArg::Svd => {
            cfg.l = Some(sweep_cfg.l);
            cfg.eigen = Some(sweep_cfg.eigen);
        }
        AlgoArg::Sdp => cfg.admm = Some(sweep_cfg.admm.clone()),
        AlgoArg::Exact => cfg.mode = None,
    }
    let (a, input) = resolve_input(&args.input)?;
    let rows = sparsity_sweep(&a, args.algo.into(), &grid, &sweep_cfg)?;
    let converged = rows.iter().all(|r| r.converged.unwrap_or(true));
    let bytes = match args.output.format {
        OutputFormat::Json => to_json(&SweepReport {
            schema_version: SCHEMA_VERSION,
            command: "sweep",
            config: &cfg,
            input: &input,
            rows: &rows,
        })?,
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            write_sweep_csv(&mut buf, &rows)?;
            buf
        }
    };
    write_output(&args.output, out, &bytes)?;
    Ok(convergence_exit(args.output.strict, converged))
}

fn cmd_gen_synthetic(args: &GenSyntheticArgs, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let mut syn = SyntheticConfig::with_size(args.m, args.n, args.seed);
    if let Some(theta) = args.theta {
        syn.theta = theta;
    }
    syn.sigma = args.sigma;
    syn.validate()?;
    let x = synthetic_spiked(&syn)?;
    let format = MatrixFormat::from_path(&args.output);
    let (rows, cols) = if args.covariance {
        let a = covariance_from_data(&x, CovarianceOptions::default())?.matrix;
        let meta = MatrixMetadata {
            name: "synthetic".into(),
            n: a.n(),
            source: format!("spiked m={} n={} seed={}", args.m, args.n, args.seed),
            preprocessing: vec!["uncentered_covariance".into()],
        };
        match format {
            MatrixFormat::MatrixMarket => save_with_metadata(&args.output, &a, &meta)?,
            MatrixFormat::DenseCsv => save_dense_csv(&args.output, a.as_matrix())?,
        }
        (a.n(), a.n())
    } else {
        match format {
            MatrixFormat::MatrixMarket => {
                let file = std::io::BufWriter::new(std::fs::File::create(&args.output).map_err(SpcaError::from)?);
                write_matrix_market(file, x.entries(), false)?;
            }
            MatrixFormat::DenseCsv => save_dense_csv(&args.output, x.entries())?,
        }
        (x.m(), x.n())
    };
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "gen-synthetic",
        "config": syn,
        "covariance": args.covariance,
        "output": args.output,
        "shape": [rows, cols],
        "singular_values": spiked_singular_values(args.m),
    });
    out.write_all(&to_json(&report)?).map_err(SpcaError::from)?;
    Ok(EXIT_OK)
}

/// Runs both thresholding algorithms (`s = 7`, `l = 1`) and the exact
/// search (`k = 7`) on Pit Props.
pub fn pitprops_comparison(admm: &AdmmConfig, max_enumeration: u128) -> Result<PitPropsComparison> {
    const K: usize = 7;
    let a = pit_props();
    let svd = spca_svd(&a, &SvdThresholdConfig::budget(K, K))?.vector;
    let sdp = spca_sdp(&a, K, 1.0, Selection::Budget { budget_s: K }, admm)?.vector;
    let oracle = exact_spca(&a, K, max_enumeration)?.optimal_vector;
    let trace = a.trace();
    let row = |method, v: &crate::SparseUnitVector, loadings: Option<&[f64; 13]>, pve: Option<f64>, obj: f64| {
        let dense = v.to_dense();
        let abs: Vec<f64> = dense.iter().map(|x| x.abs()).collect();
        let objective = a.quadratic_form(&dense);
        let pve_got = objective / trace;
        let max_loading_delta =
            loadings.map(|e| abs.iter().zip(e).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
        let pve_delta = pve.map(|p| pve_got - p);
        let objective_delta = objective - obj;
        let zero_rows = (0..13).filter(|&i| dense[i] == 0.0).map(|i| PITPROPS_NAMES[i]).collect();
        let pass = max_loading_delta.map_or(true, |d| d <= LOADING_TOL)
            && pve_delta.map_or(true, |d| d.abs() <= PVE_TOL)
            && objective_delta.abs() <= LOADING_TOL;
        ComparisonRow {
            method,
            abs_loadings: abs,
            pve: pve_got,
            objective,
            expected_loadings: loadings.map(|e| e.to_vec()),
            expected_pve: pve,
            expected_objective: obj,
            max_loading_delta,
            pve_delta,
            objective_delta,
            zero_rows,
            pass,
        }
    };
    let rows = vec![
        row("spca-svd", &svd, Some(&PITPROPS_SVD_LOADINGS), Some(PITPROPS_SVD_PVE), PITPROPS_SVD_OBJECTIVE),
        row("spca-sdp", &sdp, Some(&PITPROPS_SDP_LOADINGS), Some(PITPROPS_SDP_PVE), PITPROPS_SDP_OBJECTIVE),
        row("exact", &oracle, None, None, PITPROPS_SDP_OBJECTIVE),
    ];
    let pass = rows.iter().all(|r| r.pass);
    Ok(PitPropsComparison {
        variables: PITPROPS_NAMES.to_vec(),
        rows,
        pass,
    })
}

fn comparison_csv(c: &PitPropsComparison) -> Result<Vec<u8>> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = vec!["method".into()];
    header.extend(c.variables.iter().map(|v| v.to_string()));
    header.extend(["pve", "objective", "expected_pve", "expected_objective", "max_loading_delta", "pass"].map(String::from));
    wtr.write_record(&header)?;
    let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
    for r in &c.rows {
        let mut rec: Vec<String> = vec![r.method.into()];
        rec.extend(r.abs_loadings.iter().map(|x| x.to_string()));
        rec.push(r.pve.to_string());
        rec.push(r.objective.to_string());
        rec.push(opt(r.expected_pve));
        rec.push(r.expected_objective.to_string());
        rec.push(opt(r.max_loading_delta));
        rec.push(r.pass.to_string());
        wtr.write_record(&rec)?;
    }
    wtr.into_inner().map_err(|e| SpcaError::Io(e.into_error()))
}

fn cmd_reproduce(args: &ReproduceArgs, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let admm = admm_config(&args.solver, 0)?;
    let cmp = pitprops_comparison(&admm, args.solver.max_enumeration)?;
    let bytes = match args.output.format {
        OutputFormat::Json => to_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "command": "reproduce-pitprops",
            "config": { "k": 7, "s": 7, "l": 1, "admm": admm, "max_enumeration": args.solver.max_enumeration },
            "comparison": cmp,
        }))?,
        OutputFormat::Csv => comparison_csv(&cmp)?,
    };
    write_output(&args.output, out, &bytes)?;
    Ok(EXIT_OK)
}

fn cmd_oracle(args: &OracleArgs, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let solve = SolveArgs {
        input: args.input.clone(),
        algo: AlgoArg::Exact,
        k: args.k,
        sparsity: None,
        solver: SolverArgs {
            epsilon: None,
            l: None,
            admm_rho: 1.0,
            max_iters: 1,
            primal_tol: 1.0,
            dual_tol: 1.0,
            fixed_rho: false,
            svd_method: SvdMethodArg::Exact,
            svd_eps: 0.1,
            max_enumeration: args.max_enumeration,
        },
        output: args.output.clone(),
    };
    cmd_solve(&solve, "oracle", out)
}
