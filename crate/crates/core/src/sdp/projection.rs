//! Euclidean projections used by the ADMM splitting.

use nalgebra::DMatrix;

use crate::error::{Result, SpcaError};
use crate::linalg::{symmetric_eigen, EigenSolverConfig};

/// Projection of `v` onto `{x >= 0, sum x <= 1}`.
pub fn project_capped_simplex(v: &[f64]) -> Vec<f64> {
    let clipped: Vec<f64> = v.iter().map(|x| x.max(0.0)).collect();
    if clipped.iter().sum::<f64>() <= 1.0 {
        return clipped;
    }
    let mut sorted = clipped.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut tau = 0.0;
    for (j, &mu) in sorted.iter().enumerate() {
        cumulative += mu;
        let candidate = (cumulative - 1.0) / (j + 1) as f64;
        if mu - candidate > 0.0 {
            tau = candidate;
        }
    }
    clipped.iter().map(|x| (x - tau).max(0.0)).collect()
}

/// Frobenius-nearest point of `{Z >= 0 (PSD), trace(Z) <= 1}`.
/// `m` is assumed symmetric (only its lower triangle is read).
pub fn project_psd_trace_ball(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (values, vectors) = symmetric_eigen(m, &EigenSolverConfig::default())?;
    let projected = project_capped_simplex(&values);
    Ok(reassemble(&projected, &vectors))
}

/// `V diag(lambda) V^T`, skipping zero eigenvalues, symmetrized exactly.
pub(crate) fn reassemble(values: &[f64], vectors: &DMatrix<f64>) -> DMatrix<f64> {
    let n = vectors.nrows();
    let keep: Vec<usize> = (0..values.len()).filter(|&i| values[i] != 0.0).collect();
    if keep.is_empty() {
        return DMatrix::zeros(n, n);
    }
    let scaled = DMatrix::from_fn(n, keep.len(), |r, c| vectors[(r, keep[c])] * values[keep[c]]);
    let basis = DMatrix::from_fn(n, keep.len(), |r, c| vectors[(r, keep[c])]);
    let out = scaled * basis.transpose();
    (&out + out.transpose()) * 0.5
}

/// Frobenius-nearest matrix with entrywise l1 norm at most `radius`.
pub fn project_l1_ball_matrix(m: &DMatrix<f64>, radius: f64) -> Result<DMatrix<f64>> {
    if !(radius > 0.0) {
        return Err(SpcaError::InvalidParameter(format!(
            "l1 radius must be positive, got {radius}"
        )));
    }
    let total: f64 = m.iter().map(|v| v.abs()).sum();
    if total <= radius {
        return Ok(m.clone());
    }
    let mut mags: Vec<f64> = m.iter().map(|v| v.abs()).collect();
    mags.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut tau = 0.0;
    for (j, &mu) in mags.iter().enumerate() {
        cumulative += mu;
        let candidate = (cumulative - radius) / (j + 1) as f64;
        if mu - candidate > 0.0 {
            tau = candidate;
        } else {
            break;
        }
    }
    Ok(m.map(|v| v.signum() * (v.abs() - tau).max(0.0)))
}
