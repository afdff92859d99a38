//! Matrix ingestion and construction: data matrices, covariance and kernel
//! matrices, the Pit Props benchmark and the spiked synthetic generator.

pub mod covariance;
pub mod io;
pub mod kernel;
pub mod pitprops;
pub mod synthetic;

use nalgebra::DMatrix;

use crate::error::{Result, SpcaError};

pub use covariance::{covariance_from_data, normalize_row_norms, Covariance, CovarianceOptions, RowScaling};
pub use io::{load_matrix, save_matrix_market, LoadedMatrix, MatrixFormat, MatrixKind, MatrixMetadata};
pub use kernel::{kernel_matrix, Kernel};
pub use pitprops::{pit_props, PITPROPS_NAMES};
pub use synthetic::{givens_composition_apply, hadamard_basis, synthetic_spiked, SyntheticConfig};

/// `m x n` observations (rows) by features (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    entries: DMatrix<f64>,
    column_means: Vec<f64>,
}

impl DataMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if entries.nrows() == 0 || entries.ncols() == 0 {
            return Err(SpcaError::EmptyMatrix);
        }
        if let Some(pos) = entries.iter().position(|v| !v.is_finite()) {
            let (m, _) = entries.shape();
            return Err(SpcaError::InvalidParameter(format!(
                "non-finite entry at ({}, {})",
                pos % m,
                pos / m
            )));
        }
        let m = entries.nrows() as f64;
        let column_means = entries.column_iter().map(|c| c.sum() / m).collect();
        Ok(Self { entries, column_means })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != n) {
            return Err(SpcaError::InvalidParameter("rows have unequal lengths".into()));
        }
        Self::new(DMatrix::from_fn(m, n, |i, j| rows[i].as_ref()[j]))
    }

    /// Number of samples.
    pub fn m(&self) -> usize {
        self.entries.nrows()
    }

    /// Number of features.
    pub fn n(&self) -> usize {
        self.entries.ncols()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn column_means(&self) -> &[f64] {
        &self.column_means
    }
}
