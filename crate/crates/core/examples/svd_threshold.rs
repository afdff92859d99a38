//! Eigenvector thresholding in theory mode and budget mode.
//!
//! cargo run --example svd_threshold

use spca::random::random_psd;
use spca::{evaluate, exact_spca, spca_svd, EvalContext, Reference, SvdThresholdConfig, SymmetricMatrix};

fn main() -> spca::Result<()> {
    let a = SymmetricMatrix::symmetrize(&random_psd(7, 12, 12), 1e-9)?;
    let k = 3;
    let zstar = exact_spca(&a, k, 1 << 20)?.optimal_value;

    for eps in [0.25, 0.5] {
        let cfg = SvdThresholdConfig::theory(k, eps);
        let out = spca_svd(&a, &cfg)?;
        let ctx = EvalContext {
            epsilon: Some(eps),
            reference: Reference::Oracle(zstar),
            ..EvalContext::default()
        };
        let r = evaluate(&a, &out.vector, &ctx)?;
        println!(
            "theory eps={eps}: l={} support={:?} objective={:.4} floor={:.4} Z*={zstar:.4}",
            out.l,
            r.support,
            r.objective,
            r.thm1_floor.unwrap()
        );
    }

    let out = spca_svd(&a, &SvdThresholdConfig::budget(k, k))?;
    println!(
        "budget s={k}: support={:?} objective={:.4}",
        out.vector.support(),
        a.quadratic_form(&out.vector.to_dense())
    );
    Ok(())
}
