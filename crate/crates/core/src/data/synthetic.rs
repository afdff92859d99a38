//! Spiked synthetic data `X = U Sigma V^T + E`.
//!
//! `U` (m x m) and `V~` (n x n) are normalized Sylvester-Hadamard matrices,
//! `Sigma = (Sigma~ 0)` has `Sigma~_11 = 100` and `Sigma~_ii = e^{-i}` for
//! `i = 2..m`, `V = G_n(theta) V~` where `G_n` is the product of `n/4`
//! disjoint Givens rotations acting on the bottom half of the coordinates,
//! and `E` holds i.i.d. `N(0, sigma^2)` noise.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::DataMatrix;
use crate::error::{Result, SpcaError};
use crate::random::{gaussian_matrix, seeded_rng};

pub const SPIKE: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub m: usize,
    pub n: usize,
    pub theta: f64,
    pub sigma: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            m: 1 << 7,
            n: 1 << 12,
            theta: 0.27 * std::f64::consts::PI,
            sigma: 1e-3,
            seed: 0,
        }
    }
}

impl SyntheticConfig {
    pub fn with_size(m: usize, n: usize, seed: u64) -> Self {
        Self {
            m,
            n,
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for &d in &[self.m, self.n] {
            if !d.is_power_of_two() {
                return Err(SpcaError::NotPowerOfTwo(d));
            }
        }
        if self.n < 4 {
            return Err(SpcaError::InvalidParameter(format!("n must be at least 4, got {}", self.n)));
        }
        if self.m > self.n {
            return Err(SpcaError::InvalidParameter(format!(
                "m = {} must not exceed n = {}",
                self.m, self.n
            )));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) || !self.theta.is_finite() {
            return Err(SpcaError::InvalidParameter("sigma must be finite and non-negative".into()));
        }
        Ok(())
    }
}

/// `p x p` Sylvester-Hadamard matrix scaled by `p^{-1/2}`.
pub fn hadamard_basis(p: usize) -> Result<DMatrix<f64>> {
    if !p.is_power_of_two() {
        return Err(SpcaError::NotPowerOfTwo(p));
    }
    let scale = 1.0 / (p as f64).sqrt();
    Ok(DMatrix::from_fn(p, p, |i, j| {
        if (i & j).count_ones() % 2 == 0 {
            scale
        } else {
            -scale
        }
    }))
}

/// `G_n(theta) * vtilde` with rotations in the planes `(n/2 + 2k - 2, n/2 + 2k - 1)`
/// (0-indexed), `k = 1..=n/4`. Each rotation maps rows `(r_i, r_j)` to
/// `(c r_i - s r_j, s r_i + c r_j)`.
pub fn givens_composition_apply(vtilde: &DMatrix<f64>, theta: f64) -> Result<DMatrix<f64>> {
    let n = vtilde.nrows();
    if n % 4 != 0 || n == 0 {
        return Err(SpcaError::DimensionNotDivisibleBy4(n));
    }
    let (s, c) = theta.sin_cos();
    let mut v = vtilde.clone();
    // The planes are disjoint, so the factors commute and order is immaterial.
    for k in 1..=n / 4 {
        let i = n / 2 + 2 * k - 2;
        let j = i + 1;
        for col in 0..v.ncols() {
            let (a, b) = (v[(i, col)], v[(j, col)]);
            v[(i, col)] = c * a - s * b;
            v[(j, col)] = s * a + c * b;
        }
    }
    Ok(v)
}

/// `(100, e^{-2}, ..., e^{-m})`.
pub fn spiked_singular_values(m: usize) -> Vec<f64> {
    (1..=m)
        .map(|i| if i == 1 { SPIKE } else { (-(i as f64)).exp() })
        .collect()
}

/// Right factor `V = G_n(theta) H_n`.
pub fn spiked_right_factor(n: usize, theta: f64) -> Result<DMatrix<f64>> {
    givens_composition_apply(&hadamard_basis(n)?, theta)
}

pub fn synthetic_spiked(cfg: &SyntheticConfig) -> Result<DataMatrix> {
    cfg.validate()?;
    let (m, n) = (cfg.m, cfg.n);
    let u = hadamard_basis(m)?;
    let v = spiked_right_factor(n, cfg.theta)?;
    let sv = spiked_singular_values(m);
    let u_sigma = DMatrix::from_fn(m, m, |i, j| u[(i, j)] * sv[j]);
    let mut x = u_sigma * v.columns(0, m).transpose();
    if cfg.sigma > 0.0 {
        let mut rng = seeded_rng(cfg.seed);
        x += gaussian_matrix(&mut rng, m, n) * cfg.sigma;
    }
    DataMatrix::new(x)
}
