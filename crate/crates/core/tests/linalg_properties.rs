//! Property suites for the matrix kernel, checked against independent
//! oracles (Jacobi eigensolver, explicit summations).

mod common;

use common::{jacobi_hermitian_eigenvalues, oracle_trace_norm, random_complex_matrix, random_hermitian, rng};
use num_complex::Complex64;
use proptest::prelude::*;
use sepcrit::{
    kron, partial_trace, sample_density, sample_separable_mixture, trace_norm, validate_state,
    BipartiteState, ComplexMatrix, DensityMatrix, Subsystem, PSD_TOLERANCE,
};

#[test]
fn trace_norm_matches_jacobi_oracle_on_hermitian() {
    let mut rng = rng(11);
    for trial in 0..100 {
        let n = 2 + trial % 7;
        let h = random_hermitian(n, &mut rng);
        let via_impl = trace_norm(&h);
        let eigs = jacobi_hermitian_eigenvalues(&h);
        let via_oracle: f64 = eigs.iter().map(|ev| ev.abs()).sum();
        assert!(
            (via_impl - via_oracle).abs() < 1e-9 * via_oracle.max(1.0),
            "trial {trial}: {via_impl} vs oracle {via_oracle}"
        );
    }
}

#[test]
fn trace_norm_oracle_agrees_on_general_matrices() {
    let mut rng = rng(12);
    for trial in 0..60 {
        let rows = 2 + trial % 5;
        let cols = 2 + (trial / 5) % 5;
        let m = random_complex_matrix(rows, cols, &mut rng);
        let a = trace_norm(&m);
        let b = oracle_trace_norm(&m);
        assert!((a - b).abs() < 1e-9 * a.max(1.0), "trial {trial}: {a} vs {b}");
    }
}

#[test]
fn trace_norm_dominates_absolute_diagonal_sum() {
    // |sum_i A_ii| <= ||A||_tr for any square A, including equality cases.
    let mut rng = rng(13);
    for trial in 0..500 {
        let n = 2 + trial % 11;
        let m = random_complex_matrix(n, n, &mut rng);
        let diag_sum: Complex64 = (0..n).map(|i| m.get(i, i)).sum();
        assert!(
            diag_sum.norm() <= trace_norm(&m) + 1e-10,
            "trial {trial}: |diag sum| {} > trace norm {}",
            diag_sum.norm(),
            trace_norm(&m)
        );
    }
    // Equality holds for PSD diagonal matrices.
    let m = ComplexMatrix::from_diagonal(&[0.3, 0.5, 0.2]);
    assert!((trace_norm(&m) - 1.0).abs() < 1e-12);
}

#[test]
fn partial_traces_of_valid_states_are_valid() {
    for seed in 0..40u64 {
        let (d1, d2) = [(2, 2), (2, 3), (3, 3), (4, 2)][seed as usize % 4];
        let dm = sample_density(d1 * d2, 1000 + seed);
        let s = BipartiteState::new(d1, d2, dm).unwrap();
        for keep in [Subsystem::First, Subsystem::Second] {
            let reduced = partial_trace(&s, keep);
            let revalidated = validate_state(reduced.matrix().clone(), PSD_TOLERANCE);
            assert!(revalidated.is_ok(), "seed {seed}: {:?}", revalidated.err());
        }
    }
}

#[test]
fn ensemble_mix_matches_pairwise_difference_identity() {
    // mix - rho^A (x) rho^B = 1/2 sum_{s,t} p_s p_t
    //   (rho_s^A - rho_t^A) (x) (rho_s^B - rho_t^B), checked entrywise.
    for seed in 0..100u64 {
        let (d1, d2) = [(2, 2), (2, 3), (3, 3)][seed as usize % 3];
        let terms = 1 + (seed as usize % 5);
        let (state, ens) = sample_separable_mixture(d1, d2, terms, 2000 + seed).unwrap();
        let ra = partial_trace(&state, Subsystem::First);
        let rb = partial_trace(&state, Subsystem::Second);
        let lhs = state.matrix() - &kron(ra.matrix(), rb.matrix());

        let n = d1 * d2;
        let mut rhs = ComplexMatrix::zeros(n, n);
        let p = ens.weights();
        let fa = ens.factors_a();
        let fb = ens.factors_b();
        for s_idx in 0..ens.len() {
            for t_idx in 0..ens.len() {
                let da = fa[s_idx].matrix() - fa[t_idx].matrix();
                let db = fb[s_idx].matrix() - fb[t_idx].matrix();
                rhs = &rhs + &kron(&da, &db).scaled_re(0.5 * p[s_idx] * p[t_idx]);
            }
        }
        assert!(
            (&lhs - &rhs).max_abs() < 1e-10,
            "seed {seed}: identity deviation {}",
            (&lhs - &rhs).max_abs()
        );
    }
}

#[test]
fn density_matrix_purity_of_pure_state_is_one() {
    let dm = sepcrit::sample_pure(5, 77);
    assert!((dm.purity() - 1.0).abs() < 1e-12);
}

proptest! {
    #[test]
    fn kron_entries_follow_block_law(
        seed in 0u64..1000,
        ra in 1usize..4, ca in 1usize..4, rb in 1usize..4, cb in 1usize..4,
    ) {
        let mut r = rng(seed);
        let a = random_complex_matrix(ra, ca, &mut r);
        let b = random_complex_matrix(rb, cb, &mut r);
        let k = kron(&a, &b);
        prop_assert_eq!(k.rows(), ra * rb);
        prop_assert_eq!(k.cols(), ca * cb);
        for i in 0..ra {
            for j in 0..ca {
                for p in 0..rb {
                    for q in 0..cb {
                        let got = k.get(i * rb + p, j * cb + q);
                        let want = a.get(i, j) * b.get(p, q);
                        prop_assert!((got - want).norm() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn kron_is_multiplicative_on_traces(seed in 0u64..1000, da in 2usize..4, db in 2usize..4) {
        let mut r = rng(seed);
        let a = random_complex_matrix(da, da, &mut r);
        let b = random_complex_matrix(db, db, &mut r);
        let k = kron(&a, &b);
        let want = a.trace() * b.trace();
        prop_assert!((k.trace() - want).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_is_trace_preserving(seed in 0u64..500, pick in 0usize..3) {
        let (d1, d2) = [(2, 2), (2, 3), (3, 3)][pick];
        let dm = sample_density(d1 * d2, seed);
        let s = BipartiteState::new(d1, d2, dm).unwrap();
        for keep in [Subsystem::First, Subsystem::Second] {
            let reduced = partial_trace(&s, keep);
            prop_assert!((reduced.matrix().trace() - Complex64::ONE).norm() < 1e-12);
        }
    }
}

#[test]
fn unchecked_and_validated_density_agree() {
    let m = ComplexMatrix::identity(3).scaled_re(1.0 / 3.0);
    let a = DensityMatrix::new(m.clone()).unwrap();
    assert_eq!(a.matrix(), &m);
}
