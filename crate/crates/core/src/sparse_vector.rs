use serde::{Deserialize, Serialize};

use crate::error::{Result, SpcaError};

/// Norm tolerance for vectors that promise exactly unit length.
pub const UNIT_NORM_TOL: f64 = 1e-10;

/// A sparse vector in `R^n` stored as a sorted support plus aligned values.
///
/// Outputs of the eigenvector-thresholding path have unit norm. Outputs of
/// SDP rounding only promise `||z||_2 <= 1`; those carry `norm_le_one`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseUnitVector {
    n: usize,
    support: Vec<usize>,
    values: Vec<f64>,
    norm_le_one: bool,
}

impl SparseUnitVector {
    /// Checks support ordering and, unless `norm_le_one`, the unit-norm contract.
    pub fn new(n: usize, support: Vec<usize>, values: Vec<f64>, norm_le_one: bool) -> Result<Self> {
        if support.is_empty() {
            return Err(SpcaError::InvalidSupport("support is empty".into()));
        }
        if support.len() != values.len() {
            return Err(SpcaError::DimensionMismatch {
                expected: support.len(),
                found: values.len(),
            });
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SpcaError::InvalidSupport(
                "indices must be strictly increasing".into(),
            ));
        }
        if let Some(&last) = support.last() {
            if last >= n {
                return Err(SpcaError::InvalidSupport(format!(
                    "index {last} out of range for dimension {n}"
                )));
            }
        }
        let v = Self {
            n,
            support,
            values,
            norm_le_one,
        };
        let norm = v.norm();
        let ok = if norm_le_one {
            norm <= 1.0 + UNIT_NORM_TOL
        } else {
            (norm - 1.0).abs() <= UNIT_NORM_TOL
        };
        if !ok {
            return Err(SpcaError::InvalidParameter(format!(
                "vector norm {norm} violates the {} contract",
                if norm_le_one { "norm <= 1" } else { "unit norm" }
            )));
        }
        Ok(v)
    }

    /// Builds from a dense vector, keeping the listed coordinates.
    pub fn from_dense_on(dense: &[f64], support: &[usize], norm_le_one: bool) -> Result<Self> {
        let mut support = support.to_vec();
        support.sort_unstable();
        support.dedup();
        let values = support.iter().map(|&i| dense[i]).collect();
        Self::new(dense.len(), support, values, norm_le_one)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn norm_le_one(&self) -> bool {
        self.norm_le_one
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Number of nonzero values.
    pub fn nnz(&self) -> usize {
        self.values.iter().filter(|v| **v != 0.0).count()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (&i, &v) in self.support.iter().zip(&self.values) {
            out[i] = v;
        }
        out
    }
}
