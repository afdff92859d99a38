//! The convex relaxation
//!
//! ```text
//! max trace(A Z)  s.t.  Z PSD, trace(Z) <= 1, sum |Z_ij| <= k
//! ```
//!
//! solved by ADMM, followed by rank-one rounding and magnitude thresholding.
//!
//! The splitting is `Z = Y` with `f(Z) = -trace(AZ) + 1{Z PSD, trace(Z) <= 1}`
//! and `g(Y) = 1{||Y||_1 <= k}`. In scaled form each iteration is
//!
//! ```text
//! Z <- P_psd_trace(Y - U + A / rho)
//! Y <- P_l1(Z + U, k)
//! U <- U + Z - Y
//! ```
//!
//! The iterate reported is `P_psd_trace(Y)`: it is PSD with trace at most one,
//! and the l1 constraint holds up to the primal residual.

pub mod projection;
pub mod rounding;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub use projection::{project_capped_simplex, project_l1_ball_matrix, project_psd_trace_ball};
pub use rounding::{holder_chain_gap, round_sdp_solution, spca_sdp, SdpDiagnostics, SdpThresholdResult};

use crate::error::{Result, SpcaError};
use crate::linalg::{symmetric_eigen, EigenSolverConfig, SymmetricMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmmConfig {
    /// Initial penalty parameter.
    pub rho: f64,
    pub max_iters: usize,
    /// Stop when `||Z - Y||_F <= primal_tol` ...
    pub primal_tol: f64,
    /// ... and `rho ||Y_t - Y_{t-1}||_F <= dual_tol`.
    pub dual_tol: f64,
    /// Residual balancing: double or halve `rho` when one residual exceeds
    /// the other tenfold.
    pub adaptive_rho: bool,
    /// Recorded for reproducibility; the iteration starts from zero and draws no randomness.
    pub seed: u64,
}

impl Default for AdmmConfig {
    fn default() -> Self {
        Self {
            rho: 1.0,
            max_iters: 20_000,
            primal_tol: 1e-6,
            dual_tol: 1e-6,
            adaptive_rho: true,
            seed: 0,
        }
    }
}

impl AdmmConfig {
    fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0) {
            return Err(SpcaError::InvalidParameter(format!("rho must be positive, got {}", self.rho)));
        }
        if self.max_iters == 0 {
            return Err(SpcaError::InvalidParameter("max_iters must be at least 1".into()));
        }
        if !(self.primal_tol > 0.0 && self.dual_tol > 0.0) {
            return Err(SpcaError::InvalidParameter("ADMM tolerances must be positive".into()));
        }
        Ok(())
    }
}

// Residual balancing is checked every this many iterations.
const RHO_UPDATE_PERIOD: usize = 10;
const RHO_BALANCE_RATIO: f64 = 10.0;

/// Constraint violations of the reported matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Feasibility {
    /// `max(0, trace(Z) - 1)`.
    pub trace_residual: f64,
    /// `max(0, ||Z||_1 - k)`.
    pub l1_residual: f64,
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdpSolution {
    pub z: DMatrix<f64>,
    pub k: usize,
    /// `trace(A Z)`.
    pub objective: f64,
    pub feasibility: Feasibility,
    pub iterations_used: usize,
    pub converged: bool,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub final_rho: f64,
    /// Slack allowed between `trace(A Z)` and the true relaxation optimum:
    /// `max(primal_residual, primal_tol) * (||A||_F + rho)`.
    pub solver_gap: f64,
}

impl SdpSolution {
    pub fn trace(&self) -> f64 {
        self.z.trace()
    }

    pub fn l1_norm(&self) -> f64 {
        self.z.iter().map(|v| v.abs()).sum()
    }
}

pub fn solve_sdp_relaxation(a: &SymmetricMatrix, k: usize, cfg: &AdmmConfig) -> Result<SdpSolution> {
    let n = a.n();
    if k == 0 || k > n {
        return Err(SpcaError::InvalidParameter(format!("k must lie in [1, {n}], got {k}")));
    }
    cfg.validate()?;
    a.validate_psd()?;

    let am = a.as_matrix();
    let radius = k as f64;
    let mut rho = cfg.rho;
    let mut y = DMatrix::<f64>::zeros(n, n);
    let mut u = DMatrix::<f64>::zeros(n, n);
    let mut primal = f64::INFINITY;
    let mut dual = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;

    for t in 1..=cfg.max_iters {
        iterations = t;
        let z = project_psd_trace_ball(&(&y - &u + am / rho))?;
        let next_y = project_l1_ball_matrix(&(&z + &u), radius)?;
        u += &z - &next_y;
        primal = (&z - &next_y).norm();
        dual = rho * (&next_y - &y).norm();
        y = next_y;
        if primal <= cfg.primal_tol && dual <= cfg.dual_tol {
            converged = true;
            break;
        }
        if cfg.adaptive_rho && t % RHO_UPDATE_PERIOD == 0 {
            if primal > RHO_BALANCE_RATIO * dual {
                rho *= 2.0;
                u /= 2.0;
            } else if dual > RHO_BALANCE_RATIO * primal {
                rho /= 2.0;
                u *= 2.0;
            }
        }
    }

    let z = project_psd_trace_ball(&y)?;
    let (values, _) = symmetric_eigen(&z, &EigenSolverConfig::default())?;
    let objective = am.component_mul(&z).sum();
    let l1: f64 = z.iter().map(|v| v.abs()).sum();
    let feasibility = Feasibility {
        trace_residual: (z.trace() - 1.0).max(0.0),
        l1_residual: (l1 - radius).max(0.0),
        min_eigenvalue: *values.last().expect("n >= 1"),
    };
    let solver_gap = primal.max(cfg.primal_tol) * (a.frobenius_norm() + rho);
    Ok(SdpSolution {
        z,
        k,
        objective,
        feasibility,
        iterations_used: iterations,
        converged,
        primal_residual: primal,
        dual_residual: dual,
        final_rho: rho,
        solver_gap,
    })
}
