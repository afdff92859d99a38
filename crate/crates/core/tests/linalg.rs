mod common;

use common::{jacobi_eigen, psd, random_symmetric};
use nalgebra::DMatrix;
use proptest::prelude::*;
use spca::linalg::krylov::block_krylov;
use spca::linalg::{eigendecompose, matrix_functionals, top_l_eigenpairs, EigenRequest};
use spca::{SpcaError, SymmetricMatrix};

#[test]
fn exact_spectrum_matches_jacobi() {
    for seed in 0..10 {
        let a = SymmetricMatrix::symmetrize(&random_symmetric(seed, 9), 0.0).unwrap();
        let eig = eigendecompose(&a).unwrap();
        let (vals, vecs) = jacobi_eigen(a.as_matrix());
        for i in 0..9 {
            assert!((eig.values[i] - vals[i]).abs() < 1e-10);
            let overlap = eig.vectors.column(i).dot(&vecs.column(i)).abs();
            assert!((overlap - 1.0).abs() < 1e-8, "seed {seed} column {i}: {overlap}");
        }
    }
}

#[test]
fn functionals_of_known_matrix() {
    let a = SymmetricMatrix::from_rows(&[[2.0, -1.0], [-1.0, 2.0]], 0.0).unwrap();
    let f = matrix_functionals(&a).unwrap();
    assert!((f.spectral_norm - 3.0).abs() < 1e-12);
    assert!((f.min_eigenvalue - 1.0).abs() < 1e-12);
    assert_eq!(f.trace, 4.0);
    assert_eq!(f.entrywise_l1, 6.0);
    assert!((f.frobenius_norm - 10f64.sqrt()).abs() < 1e-12);
}

#[test]
fn krylov_tracks_exact_on_gram_matrix() {
    let a = psd(5, 40);
    let exact = eigendecompose(&a).unwrap();
    let approx = block_krylov(&a, 3, 0.1, 7, 2.0).unwrap();
    for i in 0..3 {
        let rel = (approx.values[i] - exact.values[i]).abs() / exact.values[i];
        assert!(rel < 0.1, "{i}: {rel}");
    }
    let q = &approx.vectors;
    let gram = q.transpose() * q;
    assert!((gram - DMatrix::<f64>::identity(3, 3)).amax() < 1e-10);
}

#[test]
fn top_l_rejects_bad_rank() {
    let a = SymmetricMatrix::identity(3);
    assert!(matches!(
        top_l_eigenpairs(&a, 4, &EigenRequest::Exact),
        Err(SpcaError::InvalidRank { l: 4, n: 3 })
    ));
    assert!(top_l_eigenpairs(&a, 0, &EigenRequest::block_krylov(0.1, 0)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvectors_are_orthonormal_and_sorted(seed in any::<u64>(), n in 1usize..12) {
        let a = SymmetricMatrix::symmetrize(&random_symmetric(seed, n), 0.0).unwrap();
        let eig = eigendecompose(&a).unwrap();
        prop_assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
        let gram = eig.vectors.transpose() * &eig.vectors;
        prop_assert!((gram - DMatrix::<f64>::identity(n, n)).amax() < 1e-10);
        let recon = &eig.vectors * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(eig.values.clone()))
            * eig.vectors.transpose();
        prop_assert!((recon - a.as_matrix()).amax() < 1e-10);
        for j in 0..n {
            let col = eig.vectors.column(j);
            let (imax, _) = col.iter().enumerate().fold((0, 0.0f64), |(bi, bv), (i, v)| {
                if v.abs() > bv + 1e-12 { (i, v.abs()) } else { (bi, bv) }
            });
            prop_assert!(col[imax] > 0.0);
        }
    }

    #[test]
    fn symmetrize_yields_exact_symmetry(seed in any::<u64>(), n in 1usize..10) {
        let mut m = random_symmetric(seed, n);
        if n > 1 {
            m[(0, 1)] += 1e-12;
        }
        let a = SymmetricMatrix::symmetrize(&m, 1e-9).unwrap();
        prop_assert_eq!(a.as_matrix(), &a.as_matrix().transpose());
        prop_assert!((a.trace() - m.trace()).abs() < 1e-14);
    }

    #[test]
    fn gram_matrices_pass_psd_validation(seed in any::<u64>(), n in 1usize..10) {
        let a = psd(seed, n);
        prop_assert!(a.validate_psd().unwrap() > -1e-8);
    }
}
