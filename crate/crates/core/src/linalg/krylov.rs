//! Randomized block Krylov iteration for the leading eigenpairs of a PSD matrix.
//!
//! Starting from a Gaussian `n x l` block, the solver builds an orthonormal
//! basis of `span{A P, A^2 P, ..., A^q P}` one block at a time (with two
//! passes of Gram-Schmidt against everything seen so far), then extracts Ritz
//! pairs from the projected matrix `Q^T A Q`. The number of blocks follows
//! `q = ceil(c * ln(n) / sqrt(svd_eps))`.

use nalgebra::{DMatrix, DVector};

use super::{max_residual, symmetric_eigen, EigenMethod, EigenPairs, EigenSolverConfig, SymmetricMatrix};
use crate::error::{Result, SpcaError};
use crate::random::{gaussian_matrix, seeded_rng};

pub const DEFAULT_ITERATION_FACTOR: f64 = 2.0;

// Columns whose norm falls below this fraction of their pre-orthogonalization
// norm are treated as already contained in the basis.
const DEFLATION_TOL: f64 = 1e-10;

/// Number of Krylov blocks for dimension `n` and accuracy `svd_eps`.
pub fn iteration_count(n: usize, svd_eps: f64, iteration_factor: f64) -> usize {
    let log_n = (n.max(2) as f64).ln();
    ((iteration_factor * log_n / svd_eps.sqrt()).ceil() as usize).max(1)
}

/// Orthogonalizes `v` against `basis` (twice) and appends it if it is not deflated.
fn push_orthogonal(basis: &mut Vec<DVector<f64>>, mut v: DVector<f64>) -> bool {
    let original = v.norm();
    if original == 0.0 || !original.is_finite() {
        return false;
    }
    for _ in 0..2 {
        for q in basis.iter() {
            let proj = q.dot(&v);
            v.axpy(-proj, q, 1.0);
        }
    }
    let norm = v.norm();
    if norm <= DEFLATION_TOL * original {
        return false;
    }
    basis.push(v / norm);
    true
}

pub fn block_krylov(
    a: &SymmetricMatrix,
    l: usize,
    svd_eps: f64,
    seed: u64,
    iteration_factor: f64,
) -> Result<EigenPairs> {
    let n = a.n();
    if l == 0 || l > n {
        return Err(SpcaError::InvalidRank { l, n });
    }
    if !(svd_eps > 0.0 && svd_eps < 1.0) {
        return Err(SpcaError::InvalidParameter(format!(
            "svd_eps must lie in (0, 1), got {svd_eps}"
        )));
    }
    if !(iteration_factor > 0.0) {
        return Err(SpcaError::InvalidParameter(format!(
            "iteration factor must be positive, got {iteration_factor}"
        )));
    }

    let am = a.as_matrix();
    let mut rng = seeded_rng(seed);
    let start = gaussian_matrix(&mut rng, n, l);
    let q = iteration_count(n, svd_eps, iteration_factor);

    let mut basis: Vec<DVector<f64>> = Vec::with_capacity((q * l).min(n));
    let mut block: Vec<DVector<f64>> = start.column_iter().map(|c| c.into_owned()).collect();
    for _ in 0..q {
        if basis.len() >= n {
            break;
        }
        let mut next = Vec::with_capacity(block.len());
        for v in &block {
            if push_orthogonal(&mut basis, am * v) {
                next.push(basis.last().expect("just pushed").clone());
            }
        }
        if next.is_empty() {
            break;
        }
        block = next;
    }
    // Rank-deficient inputs can leave fewer than l directions; pad with
    // random directions orthogonal to the Krylov basis.
    while basis.len() < l {
        let candidate = gaussian_matrix(&mut rng, n, 1).column(0).into_owned();
        push_orthogonal(&mut basis, candidate);
    }

    let qmat = DMatrix::from_columns(&basis);
    let projected = qmat.transpose() * am * &qmat;
    let projected = (&projected + projected.transpose()) * 0.5;
    let (ritz_values, ritz_vectors) = symmetric_eigen(&projected, &EigenSolverConfig::default())?;

    let values = ritz_values[..l].to_vec();
    let mut vectors = &qmat * ritz_vectors.columns(0, l);
    super::apply_sign_convention(&mut vectors);
    let residual = max_residual(am, &values, &vectors);
    Ok(EigenPairs {
        values,
        vectors,
        method: EigenMethod::BlockKrylov,
        residual,
    })
}
