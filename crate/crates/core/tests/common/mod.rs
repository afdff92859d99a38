//! Independent reference implementations used only by the test suites.
#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spca::SymmetricMatrix;

/// Cyclic Jacobi eigendecomposition, eigenvalues descending.
pub fn jacobi_eigen(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let mut m = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].total_cmp(&m[(i, i)]));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    (values, vectors)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform entries in [-1, 1].
pub fn uniform_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

pub fn random_symmetric(seed: u64, n: usize) -> DMatrix<f64> {
    let g = uniform_matrix(&mut rng(seed), n, n);
    (&g + g.transpose()) * 0.5
}

/// `B^T B` for a uniform `n x n` factor.
pub fn psd(seed: u64, n: usize) -> SymmetricMatrix {
    let b = uniform_matrix(&mut rng(seed), n, n);
    SymmetricMatrix::symmetrize(&(b.transpose() * &b), 1e-9).unwrap()
}

pub fn unit_vector(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return x.iter().map(|v| v / norm).collect();
        }
    }
}

pub fn quad(a: &DMatrix<f64>, x: &[f64]) -> f64 {
    let n = x.len();
    (0..n).map(|i| (0..n).map(|j| x[i] * a[(i, j)] * x[j]).sum::<f64>()).sum()
}

/// Serial exhaustive search via the Jacobi oracle on every support.
pub fn brute_force_spca(a: &DMatrix<f64>, k: usize) -> f64 {
    let n = a.nrows();
    let mut best = f64::NEG_INFINITY;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let sub = DMatrix::from_fn(k, k, |i, j| a[(idx[i], idx[j])]);
        best = best.max(jacobi_eigen(&sub).0[0]);
    }
    best
}

/// Projection onto `{Z >= 0, trace(Z) <= 1}` by bisection on the shift `mu`
/// in `P_psd(M - mu I)`.
pub fn psd_trace_projection_bisect(m: &DMatrix<f64>) -> DMatrix<f64> {
    let (vals, vecs) = jacobi_eigen(m);
    let clipped = |mu: f64| -> Vec<f64> { vals.iter().map(|v| (v - mu).max(0.0)).collect() };
    let mut lam = clipped(0.0);
    if lam.iter().sum::<f64>() > 1.0 {
        let (mut lo, mut hi) = (0.0, vals[0]);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if clipped(mid).iter().sum::<f64>() > 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lam = clipped(0.5 * (lo + hi));
    }
    let n = m.nrows();
    let mut out = DMatrix::zeros(n, n);
    for (i, l) in lam.iter().enumerate() {
        let v = vecs.column(i);
        out += *l * &v * v.transpose();
    }
    out
}

/// Entrywise l1-ball projection by bisection on the soft threshold.
pub fn l1_projection_bisect(m: &DMatrix<f64>, radius: f64) -> DMatrix<f64> {
    let l1: f64 = m.iter().map(|v| v.abs()).sum();
    if l1 <= radius {
        return m.clone();
    }
    let soft = |tau: f64| m.map(|v| v.signum() * (v.abs() - tau).max(0.0));
    let (mut lo, mut hi) = (0.0, m.amax());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if soft(mid).iter().map(|v| v.abs()).sum::<f64>() > radius {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    soft(0.5 * (lo + hi))
}
