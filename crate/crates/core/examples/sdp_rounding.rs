//! Relaxation solve, rank-one rounding and the diagnostics behind the floor.
//!
//! cargo run --example sdp_rounding

use spca::data::normalize_row_norms;
use spca::random::random_psd;
use spca::{exact_spca, spca_sdp, AdmmConfig, Selection, SymmetricMatrix};

fn main() -> spca::Result<()> {
    let raw = SymmetricMatrix::symmetrize(&random_psd(3, 10, 10), 1e-9)?;
    let (a, scaling) = normalize_row_norms(&raw, 25, 1e-8)?;
    println!("row scaling: {scaling:?}");

    let (k, eps) = (3, 0.3);
    let out = spca_sdp(&a, k, eps, Selection::Theory, &AdmmConfig::default())?;
    let sol = &out.solution;
    let zstar = exact_spca(&a, k, 1 << 20)?.optimal_value;
    println!(
        "ADMM: {} iterations, converged={}, trace(AZ)={:.5}, trace(Z)={:.6}, ||Z||_1={:.5}",
        sol.iterations_used,
        sol.converged,
        sol.objective,
        sol.trace(),
        sol.l1_norm()
    );
    let d = &out.diagnostics;
    println!("alpha={:.6} beta={:.6} s={}", d.alpha, d.beta, out.s);
    println!(
        "z^T A z={:.5}  Z*={zstar:.5}  certified floor={:.5}",
        a.quadratic_form(&out.vector.to_dense()),
        out.certified_floor
    );

    let budget = spca_sdp(&a, k, eps, Selection::Budget { budget_s: k }, &AdmmConfig::default())?;
    println!(
        "budget s={k}: support={:?} z^T A z={:.5}",
        budget.vector.support(),
        a.quadratic_form(&budget.vector.to_dense())
    );
    Ok(())
}
