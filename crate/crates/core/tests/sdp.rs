mod common;

use common::psd;
use proptest::prelude::*;
use spca::data::normalize_row_norms;
use spca::sdp::{holder_chain_gap, round_sdp_solution};
use spca::{exact_spca, solve_sdp_relaxation, spca_sdp, spca_svd, AdmmConfig, Selection, SvdThresholdConfig};

#[test]
fn relaxation_dominates_oracle_and_svd() {
    for seed in 0..6 {
        let a = psd(seed, 8);
        let sol = solve_sdp_relaxation(&a, 3, &AdmmConfig::default()).unwrap();
        assert!(sol.converged);
        let zstar = exact_spca(&a, 3, 1 << 20).unwrap().optimal_value;
        let svd = spca_svd(&a, &SvdThresholdConfig::budget(3, 3)).unwrap();
        assert!(sol.objective >= zstar - 1e-3, "seed {seed}");
        assert!(sol.objective >= a.quadratic_form(&svd.vector.to_dense()) - 1e-3);
    }
}

#[test]
fn feasibility_invariants_hold_at_convergence() {
    let cfg = AdmmConfig::default();
    for seed in 10..16 {
        let a = psd(seed, 7);
        let sol = solve_sdp_relaxation(&a, 2, &cfg).unwrap();
        assert!(sol.converged);
        assert!(sol.feasibility.trace_residual <= 10.0 * cfg.primal_tol);
        assert!(sol.feasibility.l1_residual <= 10.0 * cfg.primal_tol * 2.0);
        assert!(sol.feasibility.min_eigenvalue >= -10.0 * cfg.primal_tol);
        assert!(sol.objective >= 0.0);
        assert!(sol.solver_gap <= cfg.primal_tol * (a.frobenius_norm() + sol.final_rho) + 1e-15);
    }
}

#[test]
fn rounding_error_shrinks_with_budget() {
    let a = psd(21, 9);
    let sol = solve_sdp_relaxation(&a, 3, &AdmmConfig::default()).unwrap();
    let errs: Vec<f64> = (1..=9).map(|s| round_sdp_solution(&a, &sol, s).unwrap().1.rounding_error).collect();
    assert!(errs.windows(2).all(|w| w[1] <= w[0] + 1e-15), "{errs:?}");
    assert!(errs[8] < 1e-15);
}

#[test]
fn repeated_solves_are_bit_identical() {
    let a = psd(4, 8);
    let x = spca_sdp(&a, 3, 0.5, Selection::Budget { budget_s: 3 }, &AdmmConfig::default()).unwrap();
    let y = spca_sdp(&a, 3, 0.5, Selection::Budget { budget_s: 3 }, &AdmmConfig::default()).unwrap();
    assert_eq!(x, y);
}

#[test]
fn theory_mode_keeps_ceil_rule() {
    let (a, _) = normalize_row_norms(&psd(2, 8), 25, 1e-8).unwrap();
    let out = spca_sdp(&a, 1, 1.0, Selection::Theory, &AdmmConfig::default()).unwrap();
    let beta = out.diagnostics.beta;
    let expected = ((9.0 * beta * beta).ceil() as usize).clamp(1, 8);
    assert_eq!(out.s, expected);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rounding_invariants(seed in any::<u64>(), n in 3usize..8, k in 1usize..3, s in 1usize..8) {
        let a = psd(seed, n);
        let k = k.min(n);
        let sol = solve_sdp_relaxation(&a, k, &AdmmConfig::default()).unwrap();
        let (z, diag) = round_sdp_solution(&a, &sol, s.min(n)).unwrap();
        prop_assert!(diag.alpha >= 1.0 - 1e-6);
        prop_assert!(diag.beta > 0.0);
        let u_norm = diag.top_eigenvector.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!(u_norm <= 1.0 + 1e-12);
        prop_assert!(z.norm() <= u_norm + 1e-12 && z.norm_le_one());
        prop_assert!(holder_chain_gap(&a, &diag.top_eigenvector, &z.to_dense()) >= -1e-8);
        prop_assert!(sol.trace() <= 1.0 + 1e-5);
        prop_assert!(sol.l1_norm() <= k as f64 * (1.0 + 1e-5));
    }
}
