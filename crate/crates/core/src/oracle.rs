//! Independent entanglement checks (partial transpose, realignment) and
//! the threshold scanner that locates the boundary of a criterion's
//! detection region along a one-parameter state family.

use thiserror::Error;

use crate::criteria::{CriteriaError, CriterionId, CriterionReport};
use crate::linalg::{trace_norm, BipartiteState, ComplexMatrix};
use crate::states::{StateFamily, StatesError};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("scan grid must have at least 16 points, got {got}")]
    GridTooCoarse { got: usize },
    #[error("scan tolerance must be positive, got {got}")]
    BadTolerance { got: f64 },
    #[error("scan interval [{lo}, {hi}] is empty")]
    EmptyInterval { lo: f64, hi: f64 },
    #[error(transparent)]
    States(#[from] StatesError),
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
}

/// Partial transpose on the second tensor factor:
/// (i,j),(k,l) entry moves to (i,l),(k,j).
pub fn partial_transpose(m: &ComplexMatrix, d1: usize, d2: usize) -> ComplexMatrix {
    let pair = |i: usize, j: usize| i * d2 + j;
    ComplexMatrix::from_fn(d1 * d2, d1 * d2, |row, col| {
        let (i, j) = (row / d2, row % d2);
        let (k, l) = (col / d2, col % d2);
        m.get(pair(i, l), pair(k, j))
    })
}

/// Minimum eigenvalue of the partial transpose; a value below -1e-9
/// certifies entanglement (the state is NPT).
pub fn ppt_min_eigenvalue(s: &BipartiteState) -> f64 {
    partial_transpose(s.matrix(), s.d1(), s.d2()).min_hermitian_eigenvalue()
}

/// Realigned matrix R(rho): entry <i|<j| rho |k>|l> moves to row (i,k),
/// column (j,l), giving a d1^2 x d2^2 matrix.
pub fn realign(m: &ComplexMatrix, d1: usize, d2: usize) -> ComplexMatrix {
    let pair = |i: usize, j: usize| i * d2 + j;
    ComplexMatrix::from_fn(d1 * d1, d2 * d2, |row, col| {
        let (i, k) = (row / d1, row % d1);
        let (j, l) = (col / d2, col % d2);
        m.get(pair(i, j), pair(k, l))
    })
}

/// Trace norm of the realigned state; a value above 1 + 1e-10 certifies
/// entanglement (the CCNR criterion).
pub fn ccnr_value(s: &BipartiteState) -> f64 {
    trace_norm(&realign(s.matrix(), s.d1(), s.d2()))
}

/// One grid point of a threshold scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint {
    pub param: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub violated: bool,
}

/// Which endpoint of the scan interval the detected region touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Lower,
    Upper,
}

/// Grid data and, when exactly one verdict boundary exists, the refined
/// threshold.
#[derive(Debug, Clone)]
pub struct ScanResult {
    pub family: &'static str,
    pub criterion: CriterionId,
    pub grid: Vec<ScanPoint>,
    /// Boundary of the detection region refined to the scan tolerance;
    /// absent when the grid shows no violation or several boundaries.
    pub threshold: Option<f64>,
    pub direction: Option<Boundary>,
    /// Set when the grid verdicts flip more than once; `threshold` is then
    /// absent rather than arbitrary.
    pub multiple_boundaries: bool,
}

impl ScanResult {
    pub fn any_violation(&self) -> bool {
        self.grid.iter().any(|p| p.violated)
    }
}

/// Evaluates `eval` on a uniform grid over `interval` and refines the
/// verdict boundary by bisection down to `tol`, when exactly one exists.
pub fn threshold_scan(
    family: &StateFamily,
    criterion: CriterionId,
    eval: impl Fn(&BipartiteState) -> Result<CriterionReport, CriteriaError>,
    interval: (f64, f64),
    grid_n: usize,
    tol: f64,
) -> Result<ScanResult, OracleError> {
    let (lo, hi) = interval;
    if grid_n < 16 {
        return Err(OracleError::GridTooCoarse { got: grid_n });
    }
    if !(tol > 0.0) {
        return Err(OracleError::BadTolerance { got: tol });
    }
    if !(hi > lo) {
        return Err(OracleError::EmptyInterval { lo, hi });
    }

    let at = |param: f64| -> Result<ScanPoint, OracleError> {
        let state = family.evaluate(param)?;
        let report = eval(&state)?;
        Ok(ScanPoint {
            param,
            lhs: report.lhs,
            rhs: report.rhs,
            violated: report.violated,
        })
    };

    let step = (hi - lo) / (grid_n - 1) as f64;
    let mut grid = Vec::with_capacity(grid_n);
    for k in 0..grid_n {
        let param = if k + 1 == grid_n { hi } else { lo + step * k as f64 };
        grid.push(at(param)?);
    }

    let flips: Vec<usize> = (0..grid_n - 1)
        .filter(|&k| grid[k].violated != grid[k + 1].violated)
        .collect();

    let (threshold, direction, multiple) = match flips.as_slice() {
        [] => (None, None, false),
        [k] => {
            let mut a = grid[*k].param;
            let mut b = grid[*k + 1].param;
            let left_verdict = grid[*k].violated;
            while b - a > tol {
                let mid = 0.5 * (a + b);
                if at(mid)?.violated == left_verdict {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            let dir = if grid[grid_n - 1].violated {
                Boundary::Upper
            } else {
                Boundary::Lower
            };
            (Some(0.5 * (a + b)), Some(dir), false)
        }
        _ => (None, None, true),
    };

    Ok(ScanResult {
        family: family.id(),
        criterion,
        grid,
        threshold,
        direction,
        multiple_boundaries: multiple,
    })
}
