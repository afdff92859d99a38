//! Sparse principal component analysis by thresholding.
//!
//! Two solvers are provided:
//!
//! * [`spca_svd`] thresholds the rows of the top eigenvector block of `A`.
//! * [`spca_sdp`] solves the convex relaxation
//!   `max trace(AZ)` s.t. `trace(Z) <= 1`, `||Z||_1 <= k`, `Z >= 0` by ADMM and
//!   rounds the top eigenvector of the solution.
//!
//! [`exact_spca`] enumerates all supports for small instances, and
//! [`evaluate`] reports objective, explained variance and certified floors.

pub mod cli;
pub mod data;
pub mod error;
pub mod eval;
pub mod linalg;
pub mod oracle;
pub mod random;
pub mod sdp;
pub mod sparse_vector;
pub mod svd_threshold;

pub use error::{Result, SpcaError};
pub use eval::{evaluate, sparsity_sweep, Algorithm, EvalContext, EvalReport, Reference, SweepConfig, SweepRow};
pub use linalg::{
    eigendecompose, matrix_functionals, top_l_eigenpairs, EigenMethod, EigenPairs, EigenRequest, SymmetricMatrix,
};
pub use oracle::{exact_spca, OracleResult};
pub use sdp::{solve_sdp_relaxation, spca_sdp, AdmmConfig, SdpSolution, SdpThresholdResult};
pub use sparse_vector::SparseUnitVector;
pub use svd_threshold::{spca_svd, Selection, SvdThresholdConfig, SvdThresholdResult};

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "SPCA_THREADS";

/// Sizes the global rayon pool from `SPCA_THREADS` when set to a positive
/// integer. Returns the configured count; later calls are no-ops.
pub fn configure_threads_from_env() -> Option<usize> {
    let threads = std::env::var(THREADS_ENV).ok()?.trim().parse::<usize>().ok()?;
    if threads == 0 {
        return None;
    }
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().ok()?;
    Some(threads)
}
