//! Sparse kernel PCA: pick a few samples that carry the top kernel component.
//!
//! cargo run --example kernel_pca

use nalgebra::DMatrix;
use spca::data::{kernel_matrix, DataMatrix, Kernel};
use spca::random::{gaussian_matrix, seeded_rng};
use spca::{spca_svd, SvdThresholdConfig};

fn main() -> spca::Result<()> {
    let mut rng = seeded_rng(5);
    // Two clusters of 10 points in the plane.
    let noise = gaussian_matrix(&mut rng, 20, 2) * 0.3;
    let centers = DMatrix::from_fn(20, 2, |i, _| if i < 10 { -2.0 } else { 2.0 });
    let x = DataMatrix::new(centers + noise)?;

    for kernel in [Kernel::Linear, Kernel::Polynomial { degree: 2, c: 1.0 }, Kernel::Rbf { gamma: 0.5 }] {
        let k = kernel_matrix(&x, kernel, true)?;
        let out = spca_svd(&k, &SvdThresholdConfig::budget(4, 4))?;
        println!(
            "{kernel:?}: samples {:?}, explained {:.1}%",
            out.vector.support(),
            100.0 * k.quadratic_form(&out.vector.to_dense()) / k.trace()
        );
    }
    Ok(())
}
