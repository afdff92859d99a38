//! Quality metrics and certified floors for a sparse direction `y`.
//!
//! * `f(y) = y^T A y / ||A||_2`
//! * `PVE = y^T A y / trace(A)`
//! * eigenvector-thresholding floor: `Z_ref - 3 epsilon trace(A)`
//! * SDP-rounding floor: `Z_ref / alpha - (epsilon + solver_gap)`
//!
//! Ratios are reported both against the achieved objective and against `Z_ref`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpcaError};
use crate::linalg::{matrix_functionals, EigenRequest, MatrixFunctionals, SymmetricMatrix};
use crate::oracle::{binomial, exact_spca, DEFAULT_MAX_ENUMERATION};
use crate::sdp::{spca_sdp, AdmmConfig};
use crate::sparse_vector::SparseUnitVector;
use crate::svd_threshold::{spca_svd, Selection, SvdThresholdConfig};

/// Source of the reference optimum used by the floors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Reference {
    /// Exact `Z*` from enumeration.
    Oracle(f64),
    /// `trace(A Z)` of a relaxation solve; an upper bound on `Z*`.
    SdpObjective(f64),
    None,
}

impl Reference {
    pub fn value(&self) -> Option<f64> {
        match *self {
            Reference::Oracle(v) | Reference::SdpObjective(v) => Some(v),
            Reference::None => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalContext {
    pub epsilon: Option<f64>,
    pub alpha: Option<f64>,
    pub reference: Reference,
    /// Added to `epsilon` in the SDP floor.
    pub solver_gap: f64,
}

impl Default for EvalContext {
    fn default() -> Self {
        Self {
            epsilon: None,
            alpha: None,
            reference: Reference::None,
            solver_gap: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub objective: f64,
    pub f_value: f64,
    pub pve: f64,
    pub sparsity: usize,
    pub norm: f64,
    pub support: Vec<usize>,
    /// `|y_i|` over `support`, so results differing by a global sign compare equal.
    pub abs_loadings: Vec<f64>,
    pub reference: Reference,
    pub epsilon: Option<f64>,
    pub alpha: Option<f64>,
    pub thm1_floor: Option<f64>,
    pub thm2_floor: Option<f64>,
    pub thm1_ratio_objective: Option<f64>,
    pub thm1_ratio_reference: Option<f64>,
    pub thm2_ratio_objective: Option<f64>,
    pub thm2_ratio_reference: Option<f64>,
}

pub fn evaluate(a: &SymmetricMatrix, y: &SparseUnitVector, ctx: &EvalContext) -> Result<EvalReport> {
    let f = matrix_functionals(a)?;
    evaluate_with(a, &f, y, ctx)
}

/// [`evaluate`] with precomputed functionals.
pub fn evaluate_with(
    a: &SymmetricMatrix,
    functionals: &MatrixFunctionals,
    y: &SparseUnitVector,
    ctx: &EvalContext,
) -> Result<EvalReport> {
    if y.n() != a.n() {
        return Err(SpcaError::DimensionMismatch {
            expected: a.n(),
            found: y.n(),
        });
    }
    let norm = y.norm();
    if norm > 1.0 + 1e-8 {
        return Err(SpcaError::InvalidParameter(format!("vector norm {norm} exceeds one")));
    }
    let objective = a.quadratic_form(&y.to_dense());
    let ratio = |num: Option<f64>, den: f64| num.map(|v| v / den);
    let z_ref = ctx.reference.value();
    let thm1_floor = match (z_ref, ctx.epsilon) {
        (Some(z), Some(eps)) => Some(z - 3.0 * eps * a.trace()),
        _ => None,
    };
    let thm2_floor = match (z_ref, ctx.epsilon, ctx.alpha) {
        (Some(z), Some(eps), Some(alpha)) => Some(z / alpha - (eps + ctx.solver_gap)),
        _ => None,
    };
    let (thm1_ratio_reference, thm2_ratio_reference) = match z_ref {
        Some(z) => (ratio(thm1_floor, z), ratio(thm2_floor, z)),
        None => (None, None),
    };
    Ok(EvalReport {
        objective,
        f_value: objective / functionals.spectral_norm,
        pve: objective / a.trace(),
        sparsity: y.nnz(),
        norm,
        support: y.support().to_vec(),
        abs_loadings: y.values().iter().map(|v| v.abs()).collect(),
        reference: ctx.reference,
        epsilon: ctx.epsilon,
        alpha: ctx.alpha,
        thm1_floor,
        thm2_floor,
        thm1_ratio_objective: ratio(thm1_floor, objective),
        thm1_ratio_reference,
        thm2_ratio_objective: ratio(thm2_floor, objective),
        thm2_ratio_reference,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Svd,
    Sdp,
    Oracle,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Svd => "svd",
            Algorithm::Sdp => "sdp",
            Algorithm::Oracle => "oracle",
        }
    }
}

/// Settings shared by every grid point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub epsilon: f64,
    /// Eigenpairs for the thresholding path; experiments use one.
    pub l: usize,
    pub eigen: EigenRequest,
    pub admm: AdmmConfig,
    /// Attach exact `Z*` as reference whenever `C(n, s)` fits the budget.
    pub use_oracle_reference: bool,
    pub max_enumeration: u128,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.9,
            l: 1,
            eigen: EigenRequest::Exact,
            admm: AdmmConfig::default(),
            use_oracle_reference: true,
            max_enumeration: DEFAULT_MAX_ENUMERATION,
        }
    }
}

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub algo: Algorithm,
    /// Both the sparsity parameter `k` and the kept-coordinate budget `s`.
    pub sparsity_param: usize,
    pub report: EvalReport,
    pub beta: Option<f64>,
    pub sdp_objective: Option<f64>,
    pub converged: Option<bool>,
}

fn run_point(
    a: &SymmetricMatrix,
    f: &MatrixFunctionals,
    algo: Algorithm,
    s: usize,
    cfg: &SweepConfig,
) -> Result<SweepRow> {
    let n = a.n();
    let oracle_value = if cfg.use_oracle_reference && binomial(n, s) <= cfg.max_enumeration {
        Some(exact_spca(a, s, cfg.max_enumeration)?.optimal_value)
    } else {
        None
    };
    let mut ctx = EvalContext {
        epsilon: Some(cfg.epsilon),
        reference: oracle_value.map_or(Reference::None, Reference::Oracle),
        ..EvalContext::default()
    };
    let (vector, beta, sdp_objective, converged) = match algo {
        Algorithm::Svd => {
            let svd_cfg = SvdThresholdConfig {
                k: s,
                epsilon: cfg.epsilon,
                l_override: Some(cfg.l),
                selection: Selection::Budget { budget_s: s },
                eigen: cfg.eigen,
            };
            (spca_svd(a, &svd_cfg)?.vector, None, None, None)
        }
        Algorithm::Sdp => {
            let out = spca_sdp(a, s, cfg.epsilon, Selection::Budget { budget_s: s }, &cfg.admm)?;
            ctx.alpha = Some(out.diagnostics.alpha);
            ctx.solver_gap = out.solution.solver_gap;
            if oracle_value.is_none() {
                ctx.reference = Reference::SdpObjective(out.solution.objective);
            }
            (
                out.vector,
                Some(out.diagnostics.beta),
                Some(out.solution.objective),
                Some(out.solution.converged),
            )
        }
        Algorithm::Oracle => {
            let out = exact_spca(a, s, cfg.max_enumeration)?;
            ctx.reference = Reference::Oracle(out.optimal_value);
            (out.optimal_vector, None, None, None)
        }
    };
    Ok(SweepRow {
        algo,
        sparsity_param: s,
        report: evaluate_with(a, f, &vector, &ctx)?,
        beta,
        sdp_objective,
        converged,
    })
}

/// One report per grid value, in grid order.
pub fn sparsity_sweep(
    a: &SymmetricMatrix,
    algo: Algorithm,
    grid: &[usize],
    cfg: &SweepConfig,
) -> Result<Vec<SweepRow>> {
    let n = a.n();
    if let Some(&bad) = grid.iter().find(|&&s| s == 0 || s > n) {
        return Err(SpcaError::InvalidParameter(format!("sparsity {bad} outside [1, {n}]")));
    }
    let f = matrix_functionals(a)?;
    grid.par_iter().map(|&s| run_point(a, &f, algo, s, cfg)).collect()
}

/// Flat, plot-ready CSV record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub algo: String,
    pub sparsity_param: usize,
    pub sparsity: usize,
    pub objective: f64,
    pub f_value: f64,
    pub pve: f64,
    pub norm: f64,
    pub reference_kind: String,
    pub reference_value: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub thm1_floor: Option<f64>,
    pub thm2_floor: Option<f64>,
    pub thm1_ratio_objective: Option<f64>,
    pub thm1_ratio_reference: Option<f64>,
    pub thm2_ratio_objective: Option<f64>,
    pub thm2_ratio_reference: Option<f64>,
    pub converged: Option<bool>,
    /// Support indices joined by `;`.
    pub support: String,
}

impl From<&SweepRow> for CsvRow {
    fn from(row: &SweepRow) -> Self {
        let r = &row.report;
        CsvRow {
            algo: row.algo.name().to_string(),
            sparsity_param: row.sparsity_param,
            sparsity: r.sparsity,
            objective: r.objective,
            f_value: r.f_value,
            pve: r.pve,
            norm: r.norm,
            reference_kind: match r.reference {
                Reference::Oracle(_) => "oracle",
                Reference::SdpObjective(_) => "sdp_objective",
                Reference::None => "none",
            }
            .to_string(),
            reference_value: r.reference.value(),
            alpha: r.alpha,
            beta: row.beta,
            thm1_floor: r.thm1_floor,
            thm2_floor: r.thm2_floor,
            thm1_ratio_objective: r.thm1_ratio_objective,
            thm1_ratio_reference: r.thm1_ratio_reference,
            thm2_ratio_objective: r.thm2_ratio_objective,
            thm2_ratio_reference: r.thm2_ratio_reference,
            converged: row.converged,
            support: r.support.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(";"),
        }
    }
}

pub fn write_sweep_csv<W: Write>(w: W, rows: &[SweepRow]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for row in rows {
        wtr.serialize(CsvRow::from(row))?;
    }
    wtr.flush()?;
    Ok(())
}
