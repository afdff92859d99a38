//! Dense symmetric matrices and the spectral primitives built on them.
//!
//! Every algorithm in the crate consumes a [`SymmetricMatrix`]. Exact
//! eigendecompositions go through nalgebra's symmetric QR solver and are
//! post-processed into a deterministic order and sign convention, with a
//! cyclic Jacobi fallback when QR returns non-finite values; the approximate
//! path lives in [`krylov`].

mod jacobi;
pub mod krylov;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpcaError};

/// Relative PSD tolerance: `min_eigenvalue >= -PSD_TOLERANCE * spectral_norm` passes.
pub const PSD_TOLERANCE: f64 = 1e-8;

/// Dense `n x n` symmetric matrix with its trace cached.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    entries: DMatrix<f64>,
    trace: f64,
}

impl SymmetricMatrix {
    /// Averages `raw` with its transpose after checking the asymmetry is within `symmetry_tol`.
    pub fn symmetrize(raw: &DMatrix<f64>, symmetry_tol: f64) -> Result<Self> {
        if raw.nrows() != raw.ncols() {
            return Err(SpcaError::NotSquare {
                rows: raw.nrows(),
                cols: raw.ncols(),
            });
        }
        if raw.nrows() == 0 {
            return Err(SpcaError::EmptyMatrix);
        }
        let n = raw.nrows();
        let mut worst: Option<(usize, usize, f64)> = None;
        for j in 0..n {
            for i in (j + 1)..n {
                let d = (raw[(i, j)] - raw[(j, i)]).abs();
                // NaN differences must fail too
                if !(d <= symmetry_tol) && worst.map_or(true, |(_, _, w)| !(d <= w)) {
                    worst = Some((i, j, d));
                }
            }
        }
        if let Some((i, j, difference)) = worst {
            return Err(SpcaError::AsymmetryExceedsTolerance {
                i,
                j,
                difference,
                tolerance: symmetry_tol,
            });
        }
        Ok(Self::from_matrix_symmetrized(raw.clone()))
    }

    /// Builds from row slices; see [`SymmetricMatrix::symmetrize`].
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R], symmetry_tol: f64) -> Result<Self> {
        let n = rows.len();
        let mut m = DMatrix::zeros(n, rows.first().map_or(0, |r| r.as_ref().len()));
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != m.ncols() {
                return Err(SpcaError::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Self::symmetrize(&m, symmetry_tol)
    }

    /// Forces exact symmetry by averaging with the transpose. No tolerance check.
    pub(crate) fn from_matrix_symmetrized(mut m: DMatrix<f64>) -> Self {
        let n = m.nrows();
        for j in 0..n {
            for i in (j + 1)..n {
                let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
                m[(i, j)] = avg;
                m[(j, i)] = avg;
            }
        }
        let trace = m.trace();
        Self { entries: m, trace }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_matrix_symmetrized(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self::from_matrix_symmetrized(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.trace
    }

    /// `c * A`.
    pub fn scaled(&self, c: f64) -> Self {
        Self::from_matrix_symmetrized(&self.entries * c)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.norm()
    }

    pub fn entrywise_l1(&self) -> f64 {
        self.entries.iter().map(|v| v.abs()).sum()
    }

    /// Euclidean norms of the rows.
    pub fn row_norms(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.entries.row(i).norm()).collect()
    }

    pub fn max_row_norm(&self) -> f64 {
        self.row_norms().into_iter().fold(0.0, f64::max)
    }

    /// Principal submatrix `A[S, S]`.
    pub fn principal_submatrix(&self, support: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(support.len(), support.len(), |a, b| {
            self.entries[(support[a], support[b])]
        })
    }

    /// `x^T A x` for a dense vector.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let x = DVector::from_column_slice(x);
        x.dot(&(&self.entries * &x))
    }

    /// Returns the minimum eigenvalue when `A` passes the PSD check,
    /// `NotPsd` otherwise.
    pub fn validate_psd(&self) -> Result<f64> {
        let f = matrix_functionals(self)?;
        let threshold = -PSD_TOLERANCE * f.spectral_norm;
        if f.min_eigenvalue < threshold {
            return Err(SpcaError::NotPsd {
                min_eigenvalue: f.min_eigenvalue,
                threshold,
            });
        }
        Ok(f.min_eigenvalue)
    }
}

/// Which solver produced an [`EigenPairs`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenMethod {
    Exact,
    BlockKrylov,
}

/// Leading eigenpairs, values sorted descending, vectors as orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
    pub method: EigenMethod,
    /// `max_i ||A u_i - sigma_i u_i||_2`.
    pub residual: f64,
}

impl EigenPairs {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn truncated(&self, l: usize) -> EigenPairs {
        let l = l.min(self.len());
        EigenPairs {
            values: self.values[..l].to_vec(),
            vectors: self.vectors.columns(0, l).into_owned(),
            method: self.method,
            residual: self.residual,
        }
    }

    /// Squared Euclidean norms of the rows of the vector block.
    pub fn row_norms_squared(&self) -> Vec<f64> {
        (0..self.vectors.nrows())
            .map(|i| self.vectors.row(i).norm_squared())
            .collect()
    }
}

/// Parameters of the exact symmetric eigensolver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenSolverConfig {
    /// QR sweeps before giving up.
    pub max_iters: usize,
    /// Allowed residual, relative to `max(1, ||A||_2)`.
    pub residual_tol: f64,
}

impl Default for EigenSolverConfig {
    fn default() -> Self {
        Self {
            max_iters: 10_000,
            residual_tol: 1e-8,
        }
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// Flips each column so that its largest-magnitude entry is positive
/// (first such entry on ties).
pub fn apply_sign_convention(vectors: &mut DMatrix<f64>) {
    for mut col in vectors.column_iter_mut() {
        let mut best = 0usize;
        let mut best_abs = f64::NEG_INFINITY;
        for (i, v) in col.iter().enumerate() {
            if v.abs() > best_abs {
                best_abs = v.abs();
                best = i;
            }
        }
        if !col.is_empty() && col[best] < 0.0 {
            col.neg_mut();
        }
    }
}

/// Sorted, sign-normalized eigendecomposition of a symmetric `DMatrix`.
/// Only the lower triangle of `m` is trusted.
pub fn symmetric_eigen(m: &DMatrix<f64>, cfg: &EigenSolverConfig) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(SpcaError::NotSquare {
            rows: n,
            cols: m.ncols(),
        });
    }
    if n == 0 {
        return Err(SpcaError::EmptyMatrix);
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(SpcaError::InvalidParameter("matrix has non-finite entries".into()));
    }
    let failure = SpcaError::ConvergenceFailure {
        max_iters: cfg.max_iters,
    };
    let (raw_values, raw_vectors) = match SymmetricEigen::try_new(m.clone(), f64::EPSILON, cfg.max_iters) {
        Some(e) if e.eigenvalues.iter().chain(e.eigenvectors.iter()).all(|v| v.is_finite()) => {
            (e.eigenvalues.iter().copied().collect::<Vec<_>>(), e.eigenvectors)
        }
        _ => jacobi::jacobi_eigen(m, JACOBI_MAX_SWEEPS).ok_or(failure)?,
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw_values[b].total_cmp(&raw_values[a]));
    let values: Vec<f64> = order.iter().map(|&i| raw_values[i]).collect();
    let mut vectors = DMatrix::from_fn(n, n, |r, c| raw_vectors[(r, order[c])]);
    apply_sign_convention(&mut vectors);
    Ok((values, vectors))
}

pub(crate) fn max_residual(a: &DMatrix<f64>, values: &[f64], vectors: &DMatrix<f64>) -> f64 {
    let av = a * vectors;
    values
        .iter()
        .enumerate()
        .map(|(i, &s)| (av.column(i) - vectors.column(i) * s).norm())
        .fold(0.0, f64::max)
}

/// Full eigendecomposition `A = U diag(values) U^T` with the default solver settings.
pub fn eigendecompose(a: &SymmetricMatrix) -> Result<EigenPairs> {
    eigendecompose_with(a, &EigenSolverConfig::default())
}

pub fn eigendecompose_with(a: &SymmetricMatrix, cfg: &EigenSolverConfig) -> Result<EigenPairs> {
    let (values, vectors) = symmetric_eigen(a.as_matrix(), cfg)?;
    let residual = max_residual(a.as_matrix(), &values, &vectors);
    let scale = values
        .first()
        .map(|v| v.abs())
        .into_iter()
        .chain(values.last().map(|v| v.abs()))
        .fold(1.0, f64::max);
    if !(residual <= cfg.residual_tol * scale) {
        return Err(SpcaError::ConvergenceFailure {
            max_iters: cfg.max_iters,
        });
    }
    Ok(EigenPairs {
        values,
        vectors,
        method: EigenMethod::Exact,
        residual,
    })
}

/// Selects how the leading eigenpairs are computed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum EigenRequest {
    Exact,
    BlockKrylov {
        svd_eps: f64,
        seed: u64,
        /// Iteration-count multiplier `c` in `ceil(c * ln(n) / sqrt(svd_eps))`.
        iteration_factor: f64,
    },
}

impl Default for EigenRequest {
    fn default() -> Self {
        EigenRequest::Exact
    }
}

impl EigenRequest {
    pub fn block_krylov(svd_eps: f64, seed: u64) -> Self {
        EigenRequest::BlockKrylov {
            svd_eps,
            seed,
            iteration_factor: krylov::DEFAULT_ITERATION_FACTOR,
        }
    }
}

/// Top `l` eigenpairs of `A`.
pub fn top_l_eigenpairs(a: &SymmetricMatrix, l: usize, request: &EigenRequest) -> Result<EigenPairs> {
    let n = a.n();
    if l == 0 || l > n {
        return Err(SpcaError::InvalidRank { l, n });
    }
    match *request {
        EigenRequest::Exact => Ok(eigendecompose(a)?.truncated(l)),
        EigenRequest::BlockKrylov {
            svd_eps,
            seed,
            iteration_factor,
        } => krylov::block_krylov(a, l, svd_eps, seed, iteration_factor),
    }
}

/// Scalar summaries of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatrixFunctionals {
    pub trace: f64,
    pub spectral_norm: f64,
    pub frobenius_norm: f64,
    pub entrywise_l1: f64,
    pub min_eigenvalue: f64,
}

pub fn matrix_functionals(a: &SymmetricMatrix) -> Result<MatrixFunctionals> {
    let eig = eigendecompose(a)?;
    let max = eig.values[0];
    let min = *eig.values.last().expect("n >= 1");
    Ok(MatrixFunctionals {
        trace: a.trace(),
        spectral_norm: max.abs().max(min.abs()),
        frobenius_norm: a.frobenius_norm(),
        entrywise_l1: a.entrywise_l1(),
        min_eigenvalue: min,
    })
}
