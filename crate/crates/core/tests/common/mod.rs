//! Shared helpers for the integration suites: an independent Jacobi
//! eigensolver used as the oracle against the library's spectral routines,
//! and seeded random-matrix generators.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use sepcrit::ComplexMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let a = random_complex_matrix(n, n, rng);
    let h = &a + &a.adjoint();
    h.scaled_re(0.5)
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations. Kept
/// deliberately independent of the library's decomposition path so it can
/// serve as an oracle for `trace_norm` and eigenvalue checks.
pub fn jacobi_hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    let mut a: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j)).collect())
        .collect();

    let off_diag_norm = |a: &Vec<Vec<Complex64>>| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i][j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };
    let scale = (0..n)
        .map(|i| a[i][i].norm())
        .fold(off_diag_norm(&a), f64::max)
        .max(1e-300);

    for _sweep in 0..100 {
        if off_diag_norm(&a) < 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq.norm() < 1e-300 {
                    continue;
                }
                // Unitary diagonalization of the 2x2 Hermitian block
                // [[app, apq], [conj(apq), aqq]].
                let app = a[p][p].re;
                let aqq = a[q][q].re;
                let phase = apq / apq.norm();
                let tau = (aqq - app) / (2.0 * apq.norm());
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let cos = 1.0 / (1.0 + t * t).sqrt();
                let sin = t * cos;
                // Columns of the rotation: |u_p> = c e_p - s conj(phase) e_q,
                // |u_q> = s phase e_p + c e_q.
                let upp = Complex64::new(cos, 0.0);
                let uqp = -phase.conj() * sin;
                let upq = phase * sin;
                let uqq = Complex64::new(cos, 0.0);

                // A <- U^H A U applied on rows/cols p, q.
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = akp * upp + akq * uqp;
                    a[k][q] = akp * upq + akq * uqq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = upp.conj() * apk + uqp.conj() * aqk;
                    a[q][k] = upq.conj() * apk + uqq.conj() * aqk;
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a[i][i].re).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eigs
}

/// Trace norm via the Jacobi oracle applied to the Hermitian dilation
/// [[0, A], [A^H, 0]], whose nonzero eigenvalues are the singular values
/// of A in +/- pairs. Avoids the conditioning loss of the A^H A route.
pub fn oracle_trace_norm(m: &ComplexMatrix) -> f64 {
    let (r, c) = (m.rows(), m.cols());
    let dilation = ComplexMatrix::from_fn(r + c, r + c, |i, j| {
        if i < r && j >= r {
            m.get(i, j - r)
        } else if i >= r && j < r {
            m.get(j, i - r).conj()
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let sum_abs: f64 = jacobi_hermitian_eigenvalues(&dilation)
        .iter()
        .map(|ev| ev.abs())
        .sum();
    sum_abs / 2.0
}
