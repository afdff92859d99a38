//! Seeded randomness.
//!
//! All sampling goes through ChaCha20 (a counter-based stream generator)
//! and `rand_distr`'s ziggurat `StandardNormal`, so a seed pins every draw
//! on every platform.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

pub type SeededRng = ChaCha20Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// `rows x cols` matrix of i.i.d. `N(0, 1)` draws, filled column-major.
pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Gram matrix `G^T G` of an `m x n` Gaussian draw. PSD by construction.
pub fn random_psd(seed: u64, n: usize, m: usize) -> DMatrix<f64> {
    let mut rng = seeded_rng(seed);
    let g = gaussian_matrix(&mut rng, m, n);
    g.transpose() * g
}
