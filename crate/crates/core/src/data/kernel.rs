//! Kernel matrices over the samples of a data matrix, for sparse kernel PCA.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::DataMatrix;
use crate::error::{Result, SpcaError};
use crate::linalg::SymmetricMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Kernel {
    /// `<x, y>`
    Linear,
    /// `(<x, y> + c)^degree`
    Polynomial { degree: u32, c: f64 },
    /// `exp(-gamma ||x - y||^2)`
    Rbf { gamma: f64 },
}

impl Kernel {
    fn validate(&self) -> Result<()> {
        match *self {
            Kernel::Linear => Ok(()),
            Kernel::Polynomial { degree, c } => {
                if degree == 0 || !c.is_finite() {
                    Err(SpcaError::InvalidKernelParams(format!(
                        "polynomial kernel needs degree >= 1 and finite c (degree {degree}, c {c})"
                    )))
                } else {
                    Ok(())
                }
            }
            Kernel::Rbf { gamma } => {
                if gamma > 0.0 && gamma.is_finite() {
                    Ok(())
                } else {
                    Err(SpcaError::InvalidKernelParams(format!("rbf gamma must be positive, got {gamma}")))
                }
            }
        }
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        match *self {
            Kernel::Linear => dot(x, y),
            Kernel::Polynomial { degree, c } => (dot(x, y) + c).powi(degree as i32),
            Kernel::Rbf { gamma } => {
                let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
                (-gamma * d2).exp()
            }
        }
    }
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// `m x m` kernel matrix `K_ij = k(X_i, X_j)`; with `center_in_feature_space`
/// returns `K - 1K/m - K1/m + 1K1/m^2`.
pub fn kernel_matrix(x: &DataMatrix, kernel: Kernel, center_in_feature_space: bool) -> Result<SymmetricMatrix> {
    kernel.validate()?;
    let m = x.m();
    let rows: Vec<Vec<f64>> = x.entries().row_iter().map(|r| r.iter().copied().collect()).collect();
    let mut k = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..=i {
            let v = kernel.eval(&rows[i], &rows[j]);
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    if center_in_feature_space {
        let mf = m as f64;
        let row_means: Vec<f64> = (0..m).map(|i| k.row(i).sum() / mf).collect();
        let grand = row_means.iter().sum::<f64>() / mf;
        for j in 0..m {
            for i in 0..m {
                k[(i, j)] += grand - row_means[i] - row_means[j];
            }
        }
    }
    Ok(SymmetricMatrix::from_matrix_symmetrized(k))
}
