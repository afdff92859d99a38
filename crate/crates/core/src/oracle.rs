//! Exhaustive sparse PCA for desk-sized problems.
//!
//! For PSD `A` and a fixed support `S`, `max x^T A x` over unit `x` supported
//! on `S` is the top eigenvalue of the principal submatrix `A[S, S]`. Since a
//! support of size `< k` is contained in one of size `k` and enlarging the
//! support can only help, enumerating the `C(n, k)` supports of size exactly
//! `k` finds `Z*`.

use std::cmp::Ordering;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpcaError};
use crate::linalg::{symmetric_eigen, EigenSolverConfig, SymmetricMatrix};
use crate::sparse_vector::SparseUnitVector;

pub const DEFAULT_MAX_ENUMERATION: u128 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub optimal_value: f64,
    pub optimal_vector: SparseUnitVector,
    pub support: Vec<usize>,
    pub instances_enumerated: u128,
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i + 1) as u128,
            None => return u128::MAX,
        };
    }
    acc
}

/// Top eigenpair of `A[S, S]`; eigenvector sign follows the crate convention.
pub fn restricted_top_eigenpair(a: &SymmetricMatrix, support: &[usize]) -> Result<(f64, Vec<f64>)> {
    if support.is_empty() {
        return Err(SpcaError::InvalidSupport("support is empty".into()));
    }
    let n = a.n();
    let mut seen = vec![false; n];
    for &i in support {
        if i >= n {
            return Err(SpcaError::InvalidSupport(format!("index {i} out of range for dimension {n}")));
        }
        if seen[i] {
            return Err(SpcaError::InvalidSupport(format!("index {i} repeated")));
        }
        seen[i] = true;
    }
    let sub = a.principal_submatrix(support);
    let (values, vectors) = symmetric_eigen(&sub, &EigenSolverConfig::default())?;
    Ok((values[0], vectors.column(0).iter().copied().collect()))
}

struct Candidate {
    value: f64,
    support: Vec<usize>,
    vector: Vec<f64>,
}

// Larger value wins; equal values go to the lexicographically smaller support.
fn better(a: Candidate, b: Candidate) -> Candidate {
    match a.value.total_cmp(&b.value) {
        Ordering::Greater => a,
        Ordering::Less => b,
        Ordering::Equal => {
            if a.support <= b.support {
                a
            } else {
                b
            }
        }
    }
}

/// Exact `Z* = max { x^T A x : ||x||_2 = 1, ||x||_0 <= k }` by enumeration.
pub fn exact_spca(a: &SymmetricMatrix, k: usize, max_enumeration: u128) -> Result<OracleResult> {
    let n = a.n();
    if k == 0 || k > n {
        return Err(SpcaError::InvalidParameter(format!("k must lie in [1, {n}], got {k}")));
    }
    let required = binomial(n, k);
    if required > max_enumeration {
        return Err(SpcaError::EnumerationBudgetExceeded {
            required,
            budget: max_enumeration,
        });
    }
    a.validate_psd()?;

    let best = (0..n)
        .combinations(k)
        .par_bridge()
        .map(|support| {
            restricted_top_eigenpair(a, &support).map(|(value, vector)| Candidate {
                value,
                support,
                vector,
            })
        })
        .try_reduce_with(|x, y| Ok(better(x, y)))
        .expect("at least one support")?;

    let optimal_vector = SparseUnitVector::new(n, best.support.clone(), best.vector, false)?;
    Ok(OracleResult {
        optimal_value: best.value,
        optimal_vector,
        support: best.support,
        instances_enumerated: required,
    })
}
