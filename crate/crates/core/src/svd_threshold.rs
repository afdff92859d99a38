//! Sparse PCA by thresholding the rows of the top-`l` eigenvector block.
//!
//! The rows of `U_l` whose squared norm reaches `epsilon^2 / k` (or, in
//! budget mode, the `s` heaviest rows) select a support `R`. The output is the
//! top right singular vector of `Sigma_l^{1/2} U_l^T` restricted to the
//! columns in `R`, padded back to `R^n` with zeros. With exact eigenpairs and
//! `l = ceil(1/epsilon)` the result satisfies
//! `z^T A z >= Z* - 3 epsilon trace(A)` and `|R| <= k l / epsilon^2`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpcaError};
use crate::linalg::{apply_sign_convention, symmetric_eigen, top_l_eigenpairs, EigenPairs, EigenRequest, EigenSolverConfig, SymmetricMatrix};
use crate::sparse_vector::SparseUnitVector;

// Relative slack on the inclusive `>= epsilon^2 / k` comparison, so rows
// sitting exactly on the threshold survive rounding in the squared norm.
const THRESHOLD_SLACK: f64 = 4.0 * f64::EPSILON;

/// How many coordinates survive thresholding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Selection {
    /// Support size follows from the accuracy parameter.
    Theory,
    /// Keep exactly `budget_s` coordinates (capped at `n`).
    Budget { budget_s: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvdThresholdConfig {
    pub k: usize,
    pub epsilon: f64,
    /// Number of eigenpairs; defaults to `ceil(1 / epsilon)`.
    pub l_override: Option<usize>,
    pub selection: Selection,
    pub eigen: EigenRequest,
}

impl SvdThresholdConfig {
    pub fn theory(k: usize, epsilon: f64) -> Self {
        Self {
            k,
            epsilon,
            l_override: None,
            selection: Selection::Theory,
            eigen: EigenRequest::Exact,
        }
    }

    /// Budget mode with `l = 1`, the setting used for experimental comparisons.
    pub fn budget(k: usize, budget_s: usize) -> Self {
        Self {
            k,
            epsilon: 1.0,
            l_override: Some(1),
            selection: Selection::Budget { budget_s },
            eigen: EigenRequest::Exact,
        }
    }

    /// Resolved `l` for an `n`-dimensional input.
    pub fn rank(&self, n: usize) -> usize {
        self.l_override
            .unwrap_or_else(|| default_rank(self.epsilon))
            .clamp(1, n.max(1))
    }
}

/// `ceil(1 / epsilon)`.
pub fn default_rank(epsilon: f64) -> usize {
    ((1.0 / epsilon) * (1.0 - 1e-12)).ceil().max(1.0) as usize
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(SpcaError::InvalidParameter(format!(
            "epsilon must lie in (0, 1], got {epsilon}"
        )));
    }
    Ok(())
}

/// Indices of the `s` largest scores, ties to the lowest index, returned sorted.
pub(crate) fn top_indices_by(scores: &[f64], s: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order.truncate(s.min(scores.len()));
    order.sort_unstable();
    order
}

/// Row selection `R` of the eigenvector block.
pub fn threshold_row_indices(
    eig: &EigenPairs,
    k: usize,
    epsilon: f64,
    selection: Selection,
) -> Result<Vec<usize>> {
    check_epsilon(epsilon)?;
    if k == 0 {
        return Err(SpcaError::InvalidParameter("k must be positive".into()));
    }
    let norms = eig.row_norms_squared();
    let mut rows = match selection {
        Selection::Theory => {
            let threshold = epsilon * epsilon / k as f64;
            let cut = threshold * (1.0 - THRESHOLD_SLACK);
            let rows: Vec<usize> = (0..norms.len()).filter(|&i| norms[i] >= cut).collect();
            debug_assert!(
                rows.len() as f64 <= (k * eig.len()) as f64 / (epsilon * epsilon) * (1.0 + 1e-9),
                "theory-mode support larger than k l / eps^2"
            );
            rows
        }
        Selection::Budget { budget_s } => {
            if budget_s == 0 {
                return Err(SpcaError::InvalidParameter("budget_s must be positive".into()));
            }
            top_indices_by(&norms, budget_s)
        }
    };
    if rows.is_empty() {
        rows = top_indices_by(&norms, 1);
    }
    Ok(rows)
}

/// Top right singular vector of the `l x |R|` factor `Sigma_l^{1/2} U_l^T R`.
fn restricted_direction(eig: &EigenPairs, rows: &[usize]) -> Result<Vec<f64>> {
    let l = eig.len();
    let r = rows.len();
    let factor = DMatrix::from_fn(l, r, |j, t| eig.values[j].max(0.0).sqrt() * eig.vectors[(rows[t], j)]);
    let cfg = EigenSolverConfig::default();
    let mut y = if r > l {
        let (_, w) = symmetric_eigen(&(&factor * factor.transpose()), &cfg)?;
        let y = factor.transpose() * w.column(0);
        let norm = y.norm();
        if norm > 0.0 {
            y / norm
        } else {
            // A vanishing factor gives no preferred direction.
            let mut e = nalgebra::DVector::zeros(r);
            e[0] = 1.0;
            e
        }
    } else {
        let (_, v) = symmetric_eigen(&(factor.transpose() * &factor), &cfg)?;
        v.column(0).into_owned()
    };
    let mut as_matrix = DMatrix::from_column_slice(r, 1, y.as_slice());
    apply_sign_convention(&mut as_matrix);
    y.copy_from(&as_matrix.column(0));
    Ok(y.iter().copied().collect())
}

/// Output of the eigenvector-thresholding algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdThresholdResult {
    pub vector: SparseUnitVector,
    /// Number of eigenpairs used.
    pub l: usize,
    pub eigenvalues: Vec<f64>,
}

pub fn spca_svd(a: &SymmetricMatrix, cfg: &SvdThresholdConfig) -> Result<SvdThresholdResult> {
    let n = a.n();
    if cfg.k == 0 || cfg.k > n {
        return Err(SpcaError::InvalidParameter(format!(
            "k must lie in [1, {n}], got {}",
            cfg.k
        )));
    }
    check_epsilon(cfg.epsilon)?;
    a.validate_psd()?;
    let l = cfg.rank(n);
    let eig = top_l_eigenpairs(a, l, &cfg.eigen)?;
    spca_svd_from_eigenpairs(n, &eig, cfg)
}

/// Runs the thresholding step on precomputed eigenpairs.
pub fn spca_svd_from_eigenpairs(
    n: usize,
    eig: &EigenPairs,
    cfg: &SvdThresholdConfig,
) -> Result<SvdThresholdResult> {
    if eig.vectors.nrows() != n {
        return Err(SpcaError::DimensionMismatch {
            expected: n,
            found: eig.vectors.nrows(),
        });
    }
    let rows = threshold_row_indices(eig, cfg.k, cfg.epsilon, cfg.selection)?;
    let y = restricted_direction(eig, &rows)?;
    let vector = SparseUnitVector::new(n, rows, y, false)?;
    Ok(SvdThresholdResult {
        vector,
        l: eig.len(),
        eigenvalues: eig.values.clone(),
    })
}
