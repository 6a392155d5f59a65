//! Dense complex-matrix kernel: Kronecker products, partial traces,
//! trace/spectral norms, and density-matrix validation.
//!
//! Conventions fixed once for the whole crate: entries are stored row-major,
//! and the composite index of a bipartite system is little-endian on the
//! second factor, `(i, j) -> i * d2 + j`.

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Default tolerance on the minimum eigenvalue of a density matrix.
/// Absorbs eigensolver round-off at the dimensions this crate targets
/// (d <= 16) without admitting meaningfully negative states.
pub const PSD_TOLERANCE: f64 = 1e-9;

/// Entrywise tolerance for the Hermiticity check.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// Tolerance on |Tr(rho) - 1|.
pub const TRACE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("not Hermitian: max |A - A^H| entry is {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    #[error("trace is not one: Tr = {trace:.12}, deviation {deviation:.3e}")]
    TraceNotOne { trace: f64, deviation: f64 },
    #[error("not positive semidefinite: minimum eigenvalue {min_eigenvalue:.3e}")]
    NotPsd { min_eigenvalue: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("ensemble weights must be positive and sum to 1 (sum = {sum})")]
    BadWeights { sum: f64 },
    #[error("ensemble factor lists must have equal nonzero length")]
    UnevenEnsemble,
}

/// Dense complex matrix with row-major storage.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds a matrix from row-major entries. Panics if the count is off.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows * cols");
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self { rows, cols, data }
    }

    /// Real diagonal matrix, useful for small fixtures.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.set(i, i, Complex64::new(v, 0.0));
        }
        m
    }

    /// Rank-1 projector |v><v| (the vector is not normalized here).
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    /// Row-major entry slice.
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace requires a square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scaled_re(&self, factor: f64) -> Self {
        self.scaled(Complex64::new(factor, 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// max |A - A^H| over all entries; zero for exactly Hermitian input.
    pub fn hermiticity_deviation(&self) -> f64 {
        assert!(self.is_square());
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    /// Tr(self * other) without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = Complex64::ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self.get(i, k) * other.get(k, i);
            }
        }
        acc
    }

    fn to_na(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j))
    }

    /// Singular values, descending, via a dense decomposition.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut sv: Vec<f64> = self.to_na().singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        sv
    }

    /// Eigenvalues of a Hermitian matrix, ascending. The caller is
    /// responsible for Hermiticity; round-off-level deviations are fine.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        assert!(self.is_square(), "eigenvalues require a square matrix");
        let mut ev: Vec<f64> = self
            .to_na()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    pub fn min_hermitian_eigenvalue(&self) -> f64 {
        self.hermitian_eigenvalues()[0]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

/// Kronecker product; block (i, j) of the result is `a[i,j] * b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = (a.rows(), a.cols());
    let (rb, cb) = (b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let aij = a.get(i, j);
            if aij == Complex64::ZERO {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out.set(i * rb + k, j * cb + l, aij * b.get(k, l));
                }
            }
        }
    }
    out
}

/// Trace norm: the sum of singular values. For Hermitian input this equals
/// the sum of absolute eigenvalues.
pub fn trace_norm(a: &ComplexMatrix) -> f64 {
    a.singular_values().iter().sum()
}

/// Which tensor factor of a bipartite system to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Partial trace of an arbitrary square matrix on C^{d1} (x) C^{d2};
/// accepts non-states (e.g. the swap operator) as well.
pub fn partial_trace_matrix(
    m: &ComplexMatrix,
    d1: usize,
    d2: usize,
    keep: Subsystem,
) -> Result<ComplexMatrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() != d1 * d2 {
        return Err(LinalgError::DimensionMismatch {
            expected: d1 * d2,
            got: m.rows(),
        });
    }
    let pair = |i: usize, j: usize| i * d2 + j;
    let out = match keep {
        Subsystem::First => ComplexMatrix::from_fn(d1, d1, |a, c| {
            (0..d2).map(|b| m.get(pair(a, b), pair(c, b))).sum()
        }),
        Subsystem::Second => ComplexMatrix::from_fn(d2, d2, |b, e| {
            (0..d1).map(|a| m.get(pair(a, b), pair(a, e))).sum()
        }),
    };
    Ok(out)
}

/// Validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates against the three state invariants with the default PSD
    /// tolerance.
    pub fn new(mat: ComplexMatrix) -> Result<Self, LinalgError> {
        validate_state(mat, PSD_TOLERANCE)
    }

    /// Skips validation; for internal constructions that are states by
    /// algebraic identity (e.g. convex mixtures of validated states).
    pub(crate) fn new_unchecked(mat: ComplexMatrix) -> Self {
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn purity(&self) -> f64 {
        self.mat.trace_product(&self.mat).re
    }
}

/// Checks the density-matrix invariants and reports the first failure:
/// Hermiticity, then unit trace, then positivity at `tol_psd`.
pub fn validate_state(m: ComplexMatrix, tol_psd: f64) -> Result<DensityMatrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let dev = m.hermiticity_deviation();
    if dev > HERMITIAN_TOLERANCE {
        return Err(LinalgError::NotHermitian { deviation: dev });
    }
    let tr = m.trace();
    let tr_dev = (tr - Complex64::ONE).norm();
    if tr_dev > TRACE_TOLERANCE {
        return Err(LinalgError::TraceNotOne {
            trace: tr.re,
            deviation: tr_dev,
        });
    }
    let min_eig = m.min_hermitian_eigenvalue();
    if min_eig < -tol_psd {
        return Err(LinalgError::NotPsd {
            min_eigenvalue: min_eig,
        });
    }
    Ok(DensityMatrix { mat: m })
}

/// A density matrix on C^{d1} (x) C^{d2} with a fixed tensor split.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    d1: usize,
    d2: usize,
    state: DensityMatrix,
}

impl BipartiteState {
    pub fn new(d1: usize, d2: usize, state: DensityMatrix) -> Result<Self, LinalgError> {
        if state.dim() != d1 * d2 {
            return Err(LinalgError::DimensionMismatch {
                expected: d1 * d2,
                got: state.dim(),
            });
        }
        Ok(Self { d1, d2, state })
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.state.matrix()
    }
}

/// Reduced density matrix on the kept factor.
pub fn partial_trace(s: &BipartiteState, keep: Subsystem) -> DensityMatrix {
    let reduced = partial_trace_matrix(s.matrix(), s.d1(), s.d2(), keep)
        .expect("dimensions validated at construction");
    // Exact positivity and unit trace are inherited from the input state;
    // only round-off separates the reduced matrix from a valid one.
    DensityMatrix::new_unchecked(reduced)
}

/// Convex decomposition rho = sum_k p_k rho_k^A (x) rho_k^B.
#[derive(Debug, Clone)]
pub struct SeparableEnsemble {
    weights: Vec<f64>,
    factors_a: Vec<DensityMatrix>,
    factors_b: Vec<DensityMatrix>,
}

impl SeparableEnsemble {
    pub fn new(
        weights: Vec<f64>,
        factors_a: Vec<DensityMatrix>,
        factors_b: Vec<DensityMatrix>,
    ) -> Result<Self, LinalgError> {
        if weights.is_empty()
            || weights.len() != factors_a.len()
            || weights.len() != factors_b.len()
        {
            return Err(LinalgError::UnevenEnsemble);
        }
        let sum: f64 = weights.iter().sum();
        if weights.iter().any(|&p| p <= 0.0) || (sum - 1.0).abs() > 1e-12 {
            return Err(LinalgError::BadWeights { sum });
        }
        Ok(Self {
            weights,
            factors_a,
            factors_b,
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn factors_a(&self) -> &[DensityMatrix] {
        &self.factors_a
    }

    pub fn factors_b(&self) -> &[DensityMatrix] {
        &self.factors_b
    }

    /// The mixed state sum_k p_k rho_k^A (x) rho_k^B.
    pub fn mix(&self) -> BipartiteState {
        let d1 = self.factors_a[0].dim();
        let d2 = self.factors_b[0].dim();
        let mut acc = ComplexMatrix::zeros(d1 * d2, d1 * d2);
        for ((&p, a), b) in self
            .weights
            .iter()
            .zip(&self.factors_a)
            .zip(&self.factors_b)
        {
            let term = kron(a.matrix(), b.matrix()).scaled_re(p);
            acc = &acc + &term;
        }
        BipartiteState::new(d1, d2, DensityMatrix::new_unchecked(acc))
            .expect("factor dimensions are consistent by construction")
    }
}
