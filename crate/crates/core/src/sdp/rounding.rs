//! Rank-one rounding of an SDP solution followed by top-`s` magnitude thresholding.

use serde::{Deserialize, Serialize};

use super::{solve_sdp_relaxation, AdmmConfig, SdpSolution};
use crate::error::{Result, SpcaError};
use crate::linalg::{symmetric_eigen, EigenSolverConfig, SymmetricMatrix};
use crate::sparse_vector::SparseUnitVector;
use crate::svd_threshold::{top_indices_by, Selection};

/// Below this top eigenvalue `Z` carries no usable direction.
pub const DEGENERATE_EIGENVALUE: f64 = 1e-12;

/// Quantities describing how close the relaxation is to rank one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdpDiagnostics {
    /// `trace(A Z) / trace(A Z_1)`.
    pub alpha: f64,
    /// `||Z_1||_1 / ||Z||_1`.
    pub beta: f64,
    /// `lambda_1(Z)`.
    pub top_eigenvalue: f64,
    /// `u = sqrt(lambda_1) v_1`, so `Z_1 = u u^T`.
    pub top_eigenvector: Vec<f64>,
    /// `u^T A u = trace(A Z_1)`.
    pub rank_one_objective: f64,
    /// `||u - z||_2` for the rounded vector.
    pub rounding_error: f64,
    /// `u^T A u - 3 ||u||_1 max_i ||A_i||_2 ||u - z||_2`, a valid lower bound
    /// on `z^T A z` for any PSD `A`.
    pub holder_floor: f64,
}

/// `z^T A z - (u^T A u - 3 ||u||_1 * max_row_norm(A) * ||u - z||_2)`.
/// Non-negative up to rounding for PSD `A` whenever `z` is `u` restricted to a support.
pub fn holder_chain_gap(a: &SymmetricMatrix, u: &[f64], z: &[f64]) -> f64 {
    a.quadratic_form(z) - holder_floor(a, u, z)
}

fn holder_floor(a: &SymmetricMatrix, u: &[f64], z: &[f64]) -> f64 {
    let u_l1: f64 = u.iter().map(|v| v.abs()).sum();
    let diff: f64 = u.iter().zip(z).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    a.quadratic_form(u) - 3.0 * u_l1 * a.max_row_norm() * diff
}

/// Keeps the `s` largest-magnitude coordinates of the scaled top eigenvector of `Z`.
pub fn round_sdp_solution(
    a: &SymmetricMatrix,
    sol: &SdpSolution,
    s: usize,
) -> Result<(SparseUnitVector, SdpDiagnostics)> {
    let n = a.n();
    if sol.z.nrows() != n {
        return Err(SpcaError::DimensionMismatch {
            expected: n,
            found: sol.z.nrows(),
        });
    }
    if s == 0 {
        return Err(SpcaError::InvalidParameter("rounding support size must be positive".into()));
    }
    let (values, vectors) = symmetric_eigen(&sol.z, &EigenSolverConfig::default())?;
    let top = values[0];
    if !(top > DEGENERATE_EIGENVALUE) {
        return Err(SpcaError::DegenerateSolution { top_eigenvalue: top });
    }
    let scale = top.sqrt();
    let mut u: Vec<f64> = vectors.column(0).iter().map(|v| v * scale).collect();
    let u_norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
    // lambda_1(Z) can exceed one by solver round-off; ||u|| <= 1 is part of the contract.
    if u_norm > 1.0 {
        u.iter_mut().for_each(|v| *v /= u_norm);
    }

    let mags: Vec<f64> = u.iter().map(|v| v.abs()).collect();
    let support = top_indices_by(&mags, s);
    let vector = SparseUnitVector::from_dense_on(&u, &support, true)?;
    let z = vector.to_dense();

    let rank_one_objective = a.quadratic_form(&u);
    let u_l1: f64 = mags.iter().sum();
    let z_l1 = sol.l1_norm();
    let alpha = if rank_one_objective > 0.0 {
        sol.objective / rank_one_objective
    } else {
        1.0
    };
    let beta = if z_l1 > 0.0 { u_l1 * u_l1 / z_l1 } else { 1.0 };
    let rounding_error = u.iter().zip(&z).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let diagnostics = SdpDiagnostics {
        alpha,
        beta,
        top_eigenvalue: top,
        holder_floor: holder_floor(a, &u, &z),
        top_eigenvector: u,
        rank_one_objective,
        rounding_error,
    };
    Ok((vector, diagnostics))
}

/// `ceil(9 k^2 beta^2 / epsilon^2)`, capped at `n`.
pub fn theory_support_size(k: usize, beta: f64, epsilon: f64, n: usize) -> usize {
    let kb = k as f64 * beta;
    let s = (9.0 * kb * kb / (epsilon * epsilon)).ceil();
    if s.is_finite() {
        (s as usize).clamp(1, n)
    } else {
        n
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdpThresholdResult {
    pub vector: SparseUnitVector,
    pub solution: SdpSolution,
    pub diagnostics: SdpDiagnostics,
    /// Number of coordinates kept.
    pub s: usize,
    /// `trace(A Z) / alpha - epsilon - solver_gap`.
    pub certified_floor: f64,
}

/// Solve, round and threshold.
pub fn spca_sdp(
    a: &SymmetricMatrix,
    k: usize,
    epsilon: f64,
    selection: Selection,
    cfg: &AdmmConfig,
) -> Result<SdpThresholdResult> {
    if let Selection::Theory = selection {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(SpcaError::InvalidParameter(format!(
                "epsilon must lie in (0, 1], got {epsilon}"
            )));
        }
    }
    if let Selection::Budget { budget_s: 0 } = selection {
        return Err(SpcaError::InvalidParameter("budget_s must be positive".into()));
    }
    let solution = solve_sdp_relaxation(a, k, cfg)?;
    let n = a.n();
    // Diagnostics are measured on Z and do not depend on s; a first pass at
    // s = n supplies beta for theory mode.
    let s = match selection {
        Selection::Budget { budget_s } => budget_s.min(n),
        Selection::Theory => {
            let (_, probe) = round_sdp_solution(a, &solution, n)?;
            theory_support_size(k, probe.beta, epsilon, n)
        }
    };
    let (vector, diagnostics) = round_sdp_solution(a, &solution, s)?;
    let certified_floor = solution.objective / diagnostics.alpha - epsilon - solution.solver_gap;
    Ok(SdpThresholdResult {
        vector,
        solution,
        diagnostics,
        s,
        certified_floor,
    })
}
