//! Spiked synthetic data: Hadamard factors, Givens-rotated right basis and
//! Gaussian noise.
//!
//! cargo run --example synthetic_spiked

use spca::data::synthetic::spiked_right_factor;
use spca::data::{covariance_from_data, synthetic_spiked, CovarianceOptions, SyntheticConfig};
use spca::{exact_spca, spca_sdp, spca_svd, AdmmConfig, Selection, SvdThresholdConfig};

fn main() -> spca::Result<()> {
    let cfg = SyntheticConfig::with_size(32, 64, 1);
    let x = synthetic_spiked(&cfg)?;
    let sv = x.entries().clone().singular_values();
    println!("largest singular values: {:.4} {:.4e} {:.4e}", sv.max(), sv[1], sv[2]);

    let spike = spiked_right_factor(cfg.n, cfg.theta)?.column(0).map(|v| v.abs());
    let half = cfg.n / 2;
    println!(
        "|spike direction|: top half {:.4}, bottom half alternates {:.4} / {:.4}",
        spike[0],
        spike[half],
        spike[half + 1]
    );

    // Column centering would remove the spike (its left factor is constant).
    let a = covariance_from_data(&x, CovarianceOptions::default())?.matrix;
    let k = 8;
    let svd = spca_svd(&a, &SvdThresholdConfig::budget(k, k))?;
    let sdp = spca_sdp(&a, k, 1.0, Selection::Budget { budget_s: k }, &AdmmConfig::default())?;
    println!("svd objective {:.4}", a.quadratic_form(&svd.vector.to_dense()));
    println!(
        "sdp objective {:.4}, alpha {:.6}, beta {:.6}",
        a.quadratic_form(&sdp.vector.to_dense()),
        sdp.diagnostics.alpha,
        sdp.diagnostics.beta
    );
    let small = covariance_from_data(&synthetic_spiked(&SyntheticConfig::with_size(8, 16, 1))?, CovarianceOptions::default())?;
    println!("16-dim instance Z*(4) = {:.4}", exact_spca(&small.matrix, 4, 1 << 20)?.optimal_value);
    Ok(())
}
