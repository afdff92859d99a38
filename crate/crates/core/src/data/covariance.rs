use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::DataMatrix;
use crate::error::{Result, SpcaError};
use crate::linalg::SymmetricMatrix;

pub const ROW_SCALING_MAX_ITERS: usize = 25;
pub const ROW_SCALING_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CovarianceOptions {
    /// Subtract column means first.
    pub center: bool,
    /// Rescale to unit diagonal.
    pub to_correlation: bool,
    /// Symmetric rescaling towards unit row norms.
    pub unit_row_norm: bool,
}

/// Outcome of [`normalize_row_norms`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RowScaling {
    pub iterations: usize,
    /// `max_i | ||A_i||_2 - 1 |` on the returned matrix.
    pub max_deviation: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Covariance {
    pub matrix: SymmetricMatrix,
    pub row_scaling: Option<RowScaling>,
}

/// `X_c^T X_c / (m - 1)` with optional centering, correlation and row scaling.
pub fn covariance_from_data(x: &DataMatrix, opts: CovarianceOptions) -> Result<Covariance> {
    let m = x.m();
    if m < 2 {
        return Err(SpcaError::InvalidParameter(format!(
            "covariance needs at least 2 samples, got {m}"
        )));
    }
    let mut xc = x.entries().clone();
    if opts.center {
        for (j, mut col) in xc.column_iter_mut().enumerate() {
            col.add_scalar_mut(-x.column_means()[j]);
        }
    }
    let mut a: DMatrix<f64> = xc.transpose() * &xc / (m - 1) as f64;
    if opts.to_correlation {
        a = to_correlation(&a)?;
    }
    let mut matrix = SymmetricMatrix::from_matrix_symmetrized(a);
    let mut row_scaling = None;
    if opts.unit_row_norm {
        let (scaled, stats) = normalize_row_norms(&matrix, ROW_SCALING_MAX_ITERS, ROW_SCALING_TOL)?;
        matrix = scaled;
        row_scaling = Some(stats);
    }
    Ok(Covariance { matrix, row_scaling })
}

fn to_correlation(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let mut sd = Vec::with_capacity(n);
    for i in 0..n {
        let v = a[(i, i)];
        if !(v > 0.0) {
            return Err(SpcaError::ZeroVarianceColumn { column: i });
        }
        sd.push(v.sqrt());
    }
    Ok(DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            1.0
        } else {
            a[(i, j)] / (sd[i] * sd[j])
        }
    }))
}

/// Repeats `A <- D^{-1/2} A D^{-1/2}`, `D = diag(row norms)`, until every row
/// norm is within `tol` of one or `max_iters` passes have run.
pub fn normalize_row_norms(
    a: &SymmetricMatrix,
    max_iters: usize,
    tol: f64,
) -> Result<(SymmetricMatrix, RowScaling)> {
    let mut m = a.as_matrix().clone();
    let n = m.nrows();
    let mut iterations = 0;
    loop {
        let norms: Vec<f64> = (0..n).map(|i| m.row(i).norm()).collect();
        if let Some(i) = norms.iter().position(|d| !(*d > 0.0)) {
            return Err(SpcaError::ZeroVarianceColumn { column: i });
        }
        let deviation = norms.iter().map(|d| (d - 1.0).abs()).fold(0.0, f64::max);
        if deviation <= tol || iterations >= max_iters {
            let stats = RowScaling {
                iterations,
                max_deviation: deviation,
                converged: deviation <= tol,
            };
            return Ok((SymmetricMatrix::from_matrix_symmetrized(m), stats));
        }
        let inv_sqrt: Vec<f64> = norms.iter().map(|d| 1.0 / d.sqrt()).collect();
        for j in 0..n {
            for i in 0..n {
                m[(i, j)] *= inv_sqrt[i] * inv_sqrt[j];
            }
        }
        iterations += 1;
    }
}
