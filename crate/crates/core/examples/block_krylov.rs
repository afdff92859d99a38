//! Randomized block Krylov eigenpairs against the exact decomposition.
//!
//! cargo run --release --example block_krylov

use std::time::Instant;

use spca::linalg::krylov::iteration_count;
use spca::linalg::{eigendecompose, top_l_eigenpairs, EigenRequest};
use spca::random::random_psd;
use spca::{spca_svd, SvdThresholdConfig, SymmetricMatrix};

fn main() -> spca::Result<()> {
    let n = 256;
    let a = SymmetricMatrix::symmetrize(&random_psd(8, n, n), 1e-9)?;
    let exact = eigendecompose(&a)?;
    for eps in [0.5, 0.1, 0.02] {
        let t = Instant::now();
        let approx = top_l_eigenpairs(&a, 4, &EigenRequest::block_krylov(eps, 1))?;
        let err = (0..4)
            .map(|i| (approx.values[i] - exact.values[i]).abs() / exact.values[i])
            .fold(0.0, f64::max);
        println!(
            "svd_eps={eps}: {} iterations, max relative error {err:.2e}, residual {:.2e}, {:.1?}",
            iteration_count(n, eps, 2.0),
            approx.residual,
            t.elapsed()
        );
    }
    let mut cfg = SvdThresholdConfig::budget(10, 10);
    cfg.eigen = EigenRequest::block_krylov(0.1, 1);
    let fast = spca_svd(&a, &cfg)?;
    let exact_out = spca_svd(&a, &SvdThresholdConfig::budget(10, 10))?;
    println!("same support as exact path: {}", fast.vector.support() == exact_out.vector.support());
    Ok(())
}
