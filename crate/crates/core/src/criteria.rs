//! Separability criteria built on the correlation matrix
//! `w_ij = Tr(X_i (x) Y_j (rho - rho^A (x) rho^B))`.
//!
//! Each criterion compares a norm of the correlation data (lhs) against a
//! bound every separable state must satisfy (rhs). A violation certifies
//! entanglement; satisfaction is inconclusive.

use thiserror::Error;

use crate::linalg::{partial_trace, BipartiteState, ComplexMatrix, DensityMatrix, Subsystem};
use crate::measurements::{
    build_gsic, build_mums, GsicPovm, MeasurementError, MeasurementFamily, MumSet, ParamSpec,
};

/// Margin added to the rhs before flagging a violation, so round-off
/// equality never counts as a violation.
pub const VIOLATION_MARGIN: f64 = 1e-12;

/// Imaginary residue above this level signals an invalid operator family
/// rather than numerical noise.
const IMAG_RESIDUE_LIMIT: f64 = 1e-8;

/// Square-root arguments in [-RADICAND_TOLERANCE, 0) clamp to zero; more
/// negative values indicate an inconsistent measurement set and error out.
const RADICAND_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum CriteriaError {
    #[error("measurement family dimension {family} does not match subsystem dimension {state}")]
    DimensionMismatch { family: usize, state: usize },
    #[error("correlation entry has imaginary residue {value:.3e}; operator family is invalid")]
    ImaginaryResidue { value: f64 },
    #[error("square-root argument {value:.3e} is negative beyond tolerance; measurement set is inconsistent")]
    RadicandNegative { value: f64 },
    #[error("criterion requires equal subsystem dimensions, got {d1} and {d2}")]
    UnequalDimensions { d1: usize, d2: usize },
    #[error("criterion requires equal measurement counts, got {m1} and {m2}")]
    MeasurementCountMismatch { m1: usize, m2: usize },
    #[error("selection has {got} indices, expected m*d = {expected}")]
    SelectionLength { expected: usize, got: usize },
    #[error("selection index {index} at position {position} falls outside its block (expected {lo}..={hi})")]
    SelectionOutOfBlock {
        position: usize,
        index: usize,
        lo: usize,
        hi: usize,
    },
    #[error("selection repeats index {index} within a block")]
    SelectionDuplicate { index: usize },
    #[error(transparent)]
    Measurement(#[from] MeasurementError),
}

/// Identifier of one of the five implemented criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CriterionId {
    MumTracenorm,
    MumDiagonal,
    MumLiu,
    GsicTracenorm,
    GsicDiagonal,
}

impl CriterionId {
    pub const ALL: [CriterionId; 5] = [
        CriterionId::MumTracenorm,
        CriterionId::MumDiagonal,
        CriterionId::MumLiu,
        CriterionId::GsicTracenorm,
        CriterionId::GsicDiagonal,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CriterionId::MumTracenorm => "mum_tracenorm",
            CriterionId::MumDiagonal => "mum_diagonal",
            CriterionId::MumLiu => "mum_liu",
            CriterionId::GsicTracenorm => "gsic_tracenorm",
            CriterionId::GsicDiagonal => "gsic_diagonal",
        }
    }

    pub fn uses_gsic(&self) -> bool {
        matches!(self, CriterionId::GsicTracenorm | CriterionId::GsicDiagonal)
    }
}

impl std::fmt::Display for CriterionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for CriterionId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "mum_tracenorm" => Ok(CriterionId::MumTracenorm),
            "mum_diagonal" => Ok(CriterionId::MumDiagonal),
            "mum_liu" => Ok(CriterionId::MumLiu),
            "gsic_tracenorm" => Ok(CriterionId::GsicTracenorm),
            "gsic_diagonal" => Ok(CriterionId::GsicDiagonal),
            other => Err(format!(
                "unknown criterion '{other}'; expected one of mum_tracenorm, mum_diagonal, mum_liu, gsic_tracenorm, gsic_diagonal"
            )),
        }
    }
}

/// Measurement parameters the criterion was evaluated with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionParams {
    pub d1: usize,
    pub d2: usize,
    pub m1: usize,
    pub m2: usize,
    /// (kappa_1, kappa_2) for MUM criteria.
    pub kappa: Option<(f64, f64)>,
    /// (alpha_1, alpha_2) for GSIC criteria.
    pub alpha: Option<(f64, f64)>,
}

/// Outcome of one criterion evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub id: CriterionId,
    pub lhs: f64,
    pub rhs: f64,
    pub violated: bool,
    pub params: CriterionParams,
    /// True for the GSIC diagonal baseline, whose formula is a
    /// reconstruction rather than an inequality stated verbatim.
    pub reconstructed: bool,
}

impl CriterionReport {
    fn new(id: CriterionId, lhs: f64, rhs: f64, params: CriterionParams) -> Self {
        CriterionReport {
            id,
            lhs,
            rhs,
            violated: lhs > rhs + VIOLATION_MARGIN,
            params,
            reconstructed: id == CriterionId::GsicDiagonal,
        }
    }
}

/// Real matrix of measurement correlations.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl CorrelationMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn trace_norm(&self) -> f64 {
        let m = ComplexMatrix::from_fn(self.rows, self.cols, |i, j| self.entry(i, j).into());
        crate::linalg::trace_norm(&m)
    }

    /// Sum of |w_ii| over the main diagonal.
    pub fn diagonal_abs_sum(&self) -> f64 {
        (0..self.rows.min(self.cols))
            .map(|i| self.entry(i, i).abs())
            .sum()
    }
}

/// All pairwise traces Tr((X_i (x) Y_j) target) without forming Kronecker
/// products: the target is first contracted with each Y_j over the second
/// factor, then with each X_i.
fn trace_table(
    target: &ComplexMatrix,
    d1: usize,
    d2: usize,
    x: &MeasurementFamily,
    y: &MeasurementFamily,
) -> Result<CorrelationMatrix, CriteriaError> {
    let pair = |i: usize, j: usize| i * d2 + j;
    let contracted: Vec<ComplexMatrix> = y
        .ops()
        .iter()
        .map(|yj| {
            ComplexMatrix::from_fn(d1, d1, |a, c| {
                let mut acc = num_complex::Complex64::ZERO;
                for b in 0..d2 {
                    for e in 0..d2 {
                        acc += yj.get(e, b) * target.get(pair(a, b), pair(c, e));
                    }
                }
                acc
            })
        })
        .collect();

    let rows = x.len();
    let cols = y.len();
    let mut entries = Vec::with_capacity(rows * cols);
    for xi in x.ops() {
        for tj in &contracted {
            let mut acc = num_complex::Complex64::ZERO;
            for a in 0..d1 {
                for c in 0..d1 {
                    acc += xi.get(c, a) * tj.get(a, c);
                }
            }
            if acc.im.abs() > IMAG_RESIDUE_LIMIT {
                return Err(CriteriaError::ImaginaryResidue {
                    value: acc.im.abs(),
                });
            }
            entries.push(acc.re);
        }
    }
    Ok(CorrelationMatrix {
        rows,
        cols,
        entries,
    })
}

fn check_dims(
    s: &BipartiteState,
    x: &MeasurementFamily,
    y: &MeasurementFamily,
) -> Result<(), CriteriaError> {
    if x.dim() != s.d1() {
        return Err(CriteriaError::DimensionMismatch {
            family: x.dim(),
            state: s.d1(),
        });
    }
    if y.dim() != s.d2() {
        return Err(CriteriaError::DimensionMismatch {
            family: y.dim(),
            state: s.d2(),
        });
    }
    Ok(())
}

/// The correlation matrix M^(X,Y)(rho) with entries
/// `Tr(X_i (x) Y_j (rho - rho^A (x) rho^B))`.
pub fn correlation_matrix(
    s: &BipartiteState,
    x: &MeasurementFamily,
    y: &MeasurementFamily,
) -> Result<CorrelationMatrix, CriteriaError> {
    check_dims(s, x, y)?;
    let ra = partial_trace(s, Subsystem::First);
    let rb = partial_trace(s, Subsystem::Second);
    let delta = s.matrix() - &crate::linalg::kron(ra.matrix(), rb.matrix());
    trace_table(&delta, s.d1(), s.d2(), x, y)
}

/// Matrix of plain expectations Tr(X_i (x) Y_j rho); the sub-matrix
/// criterion draws its diagonal from this table.
pub fn expectation_matrix(
    s: &BipartiteState,
    x: &MeasurementFamily,
    y: &MeasurementFamily,
) -> Result<CorrelationMatrix, CriteriaError> {
    check_dims(s, x, y)?;
    trace_table(s.matrix(), s.d1(), s.d2(), x, y)
}

/// One factor of the MUM bound: sqrt((m-1)/d + kappa - sum_i Tr(X_i rho)^2).
fn mum_bound_factor(
    fam: &MeasurementFamily,
    marginal: &DensityMatrix,
    m: usize,
    kappa: f64,
) -> Result<f64, CriteriaError> {
    let d = fam.dim() as f64;
    let s: f64 = fam
        .ops()
        .iter()
        .map(|x| x.trace_product(marginal.matrix()).re.powi(2))
        .sum();
    sqrt_clamped((m as f64 - 1.0) / d + kappa - s)
}

/// One factor of the GSIC bound:
/// sqrt((alpha d^2 + 1)/(d (d + 1)) - sum_i Tr(P_i rho)^2).
fn gsic_bound_factor(
    fam: &MeasurementFamily,
    marginal: &DensityMatrix,
    alpha: f64,
) -> Result<f64, CriteriaError> {
    let d = fam.dim() as f64;
    let s: f64 = fam
        .ops()
        .iter()
        .map(|p| p.trace_product(marginal.matrix()).re.powi(2))
        .sum();
    sqrt_clamped((alpha * d * d + 1.0) / (d * (d + 1.0)) - s)
}

fn sqrt_clamped(radicand: f64) -> Result<f64, CriteriaError> {
    if radicand < -RADICAND_TOLERANCE {
        return Err(CriteriaError::RadicandNegative { value: radicand });
    }
    Ok(radicand.max(0.0).sqrt())
}

fn mum_params(s: &BipartiteState, xm: &MumSet, ym: &MumSet) -> CriterionParams {
    CriterionParams {
        d1: s.d1(),
        d2: s.d2(),
        m1: xm.count(),
        m2: ym.count(),
        kappa: Some((xm.kappa(), ym.kappa())),
        alpha: None,
    }
}

fn gsic_params(s: &BipartiteState, p: &GsicPovm, q: &GsicPovm) -> CriterionParams {
    CriterionParams {
        d1: s.d1(),
        d2: s.d2(),
        m1: p.dim() * p.dim(),
        m2: q.dim() * q.dim(),
        kappa: None,
        alpha: Some((p.alpha(), q.alpha())),
    }
}

fn mum_rhs(s: &BipartiteState, xm: &MumSet, ym: &MumSet) -> Result<f64, CriteriaError> {
    let fx = xm.flatten();
    let fy = ym.flatten();
    let ra = partial_trace(s, Subsystem::First);
    let rb = partial_trace(s, Subsystem::Second);
    Ok(mum_bound_factor(&fx, &ra, xm.count(), xm.kappa())?
        * mum_bound_factor(&fy, &rb, ym.count(), ym.kappa())?)
}

fn gsic_rhs(s: &BipartiteState, p: &GsicPovm, q: &GsicPovm) -> Result<f64, CriteriaError> {
    let fp = p.flatten();
    let fq = q.flatten();
    let ra = partial_trace(s, Subsystem::First);
    let rb = partial_trace(s, Subsystem::Second);
    Ok(gsic_bound_factor(&fp, &ra, p.alpha())? * gsic_bound_factor(&fq, &rb, q.alpha())?)
}

/// Trace-norm MUM criterion: a separable state satisfies
/// ||M^(X,Y)(rho)||_tr <= bound; violation certifies entanglement.
pub fn criterion_mum_tracenorm(
    s: &BipartiteState,
    xm: &MumSet,
    ym: &MumSet,
) -> Result<CriterionReport, CriteriaError> {
    let w = correlation_matrix(s, &xm.flatten(), &ym.flatten())?;
    let lhs = w.trace_norm();
    let rhs = mum_rhs(s, xm, ym)?;
    Ok(CriterionReport::new(
        CriterionId::MumTracenorm,
        lhs,
        rhs,
        mum_params(s, xm, ym),
    ))
}

/// Diagonal MUM baseline: replaces the trace norm by the diagonal absolute
/// sum sum_i |w_ii| with the same bound. Stated for equal dimensions.
pub fn criterion_mum_diagonal(
    s: &BipartiteState,
    xm: &MumSet,
    ym: &MumSet,
) -> Result<CriterionReport, CriteriaError> {
    if s.d1() != s.d2() {
        return Err(CriteriaError::UnequalDimensions {
            d1: s.d1(),
            d2: s.d2(),
        });
    }
    if xm.count() != ym.count() {
        return Err(CriteriaError::MeasurementCountMismatch {
            m1: xm.count(),
            m2: ym.count(),
        });
    }
    let w = correlation_matrix(s, &xm.flatten(), &ym.flatten())?;
    let lhs = w.diagonal_abs_sum();
    let rhs = mum_rhs(s, xm, ym)?;
    Ok(CriterionReport::new(
        CriterionId::MumDiagonal,
        lhs,
        rhs,
        mum_params(s, xm, ym),
    ))
}

/// Index selection of the sub-matrix criterion: m*d row indices into the X
/// family and m*d column indices into the Y family (0-based), slot i*d + l
/// drawn from block i of each family, no repeats within a block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiuSelection {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl LiuSelection {
    pub fn new(
        rows: Vec<usize>,
        cols: Vec<usize>,
        d1: usize,
        d2: usize,
        m: usize,
    ) -> Result<Self, CriteriaError> {
        let d = d1.min(d2);
        let expected = m * d;
        for (indices, block_dim) in [(&rows, d1), (&cols, d2)] {
            if indices.len() != expected {
                return Err(CriteriaError::SelectionLength {
                    expected,
                    got: indices.len(),
                });
            }
            for (position, &index) in indices.iter().enumerate() {
                let block = position / d;
                let lo = block * block_dim;
                let hi = (block + 1) * block_dim - 1;
                if index < lo || index > hi {
                    return Err(CriteriaError::SelectionOutOfBlock {
                        position,
                        index,
                        lo,
                        hi,
                    });
                }
                if indices[block * d..position].contains(&index) {
                    return Err(CriteriaError::SelectionDuplicate { index });
                }
            }
        }
        Ok(LiuSelection { rows, cols })
    }

    /// The simplest admissible choice: the first d operators of each block
    /// on both sides.
    pub fn default_for(d1: usize, d2: usize, m: usize) -> Self {
        let d = d1.min(d2);
        let rows = (0..m).flat_map(|i| (0..d).map(move |l| i * d1 + l)).collect();
        let cols = (0..m).flat_map(|j| (0..d).map(move |l| j * d2 + l)).collect();
        LiuSelection { rows, cols }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Sub-matrix criterion for unequal dimensions: a separable state satisfies
/// Tr(G) = sum_i Tr(X_{p_i} (x) Y_{q_i} rho) <= sqrt((m-1)/d1 + kappa_1)
/// sqrt((m-1)/d2 + kappa_2). Note the expectations are taken on rho itself.
pub fn criterion_mum_liu(
    s: &BipartiteState,
    xm: &MumSet,
    ym: &MumSet,
    sel: &LiuSelection,
) -> Result<CriterionReport, CriteriaError> {
    if xm.count() != ym.count() {
        return Err(CriteriaError::MeasurementCountMismatch {
            m1: xm.count(),
            m2: ym.count(),
        });
    }
    let m = xm.count();
    let d = s.d1().min(s.d2());
    if sel.len() != m * d {
        return Err(CriteriaError::SelectionLength {
            expected: m * d,
            got: sel.len(),
        });
    }
    let fx = xm.flatten();
    let fy = ym.flatten();
    let table = expectation_matrix(s, &fx, &fy)?;
    let lhs: f64 = sel
        .rows()
        .iter()
        .zip(sel.cols())
        .map(|(&p, &q)| table.entry(p, q))
        .sum();
    let rhs = sqrt_clamped((m as f64 - 1.0) / s.d1() as f64 + xm.kappa())?
        * sqrt_clamped((m as f64 - 1.0) / s.d2() as f64 + ym.kappa())?;
    Ok(CriterionReport::new(
        CriterionId::MumLiu,
        lhs,
        rhs,
        mum_params(s, xm, ym),
    ))
}

/// Trace-norm GSIC criterion: a separable state satisfies
/// ||M^(P,Q)(rho)||_tr <= bound with the GSIC bound factors.
pub fn criterion_gsic_tracenorm(
    s: &BipartiteState,
    p: &GsicPovm,
    q: &GsicPovm,
) -> Result<CriterionReport, CriteriaError> {
    let w = correlation_matrix(s, &p.flatten(), &q.flatten())?;
    let lhs = w.trace_norm();
    let rhs = gsic_rhs(s, p, q)?;
    Ok(CriterionReport::new(
        CriterionId::GsicTracenorm,
        lhs,
        rhs,
        gsic_params(s, p, q),
    ))
}

/// Diagonal GSIC baseline: sum_i |w_ii| against the GSIC bound. The formula
/// is a reconstruction of the cited diagonal criterion (reports carry a
/// `reconstructed` flag), included as a comparison baseline.
pub fn criterion_gsic_diagonal(
    s: &BipartiteState,
    p: &GsicPovm,
    q: &GsicPovm,
) -> Result<CriterionReport, CriteriaError> {
    if s.d1() != s.d2() {
        return Err(CriteriaError::UnequalDimensions {
            d1: s.d1(),
            d2: s.d2(),
        });
    }
    let w = correlation_matrix(s, &p.flatten(), &q.flatten())?;
    let lhs = w.diagonal_abs_sum();
    let rhs = gsic_rhs(s, p, q)?;
    Ok(CriterionReport::new(
        CriterionId::GsicDiagonal,
        lhs,
        rhs,
        gsic_params(s, p, q),
    ))
}

/// A criterion bound to concrete measurement sets for fixed subsystem
/// dimensions, ready to evaluate on many states (e.g. along a scan).
#[derive(Debug, Clone)]
pub struct CriterionEvaluator {
    id: CriterionId,
    d1: usize,
    d2: usize,
    mums: Option<(MumSet, MumSet)>,
    gsics: Option<(GsicPovm, GsicPovm)>,
    selection: Option<LiuSelection>,
}

impl CriterionEvaluator {
    /// Builds the measurement sets for `id` on dimensions (d1, d2) with the
    /// given parameter. `m` truncates the MUM sets to their first m
    /// measurements; the default is the complete sets (m_i = d_i + 1, and
    /// m = min(d1, d2) + 1 for the sub-matrix criterion, which needs equal
    /// counts).
    pub fn new(
        id: CriterionId,
        d1: usize,
        d2: usize,
        param: ParamSpec,
        m: Option<usize>,
    ) -> Result<Self, CriteriaError> {
        let mut ev = CriterionEvaluator {
            id,
            d1,
            d2,
            mums: None,
            gsics: None,
            selection: None,
        };
        if id.uses_gsic() {
            let p = build_gsic(d1, param)?;
            let q = if d2 == d1 { p.clone() } else { build_gsic(d2, param)? };
            ev.gsics = Some((p, q));
        } else {
            let full1 = build_mums(d1, param)?;
            let full2 = if d2 == d1 {
                full1.clone()
            } else {
                build_mums(d2, param)?
            };
            let (m1, m2) = match (id, m) {
                (_, Some(m)) => (m, m),
                (CriterionId::MumLiu, None) => {
                    let m = d1.min(d2) + 1;
                    (m, m)
                }
                _ => (d1 + 1, d2 + 1),
            };
            let xm = full1.prefix(m1)?;
            let ym = full2.prefix(m2)?;
            if id == CriterionId::MumLiu {
                ev.selection = Some(LiuSelection::default_for(d1, d2, m1));
            }
            ev.mums = Some((xm, ym));
        }
        Ok(ev)
    }

    /// Replaces the sub-matrix selection (only meaningful for `MumLiu`).
    pub fn with_selection(mut self, sel: LiuSelection) -> Self {
        self.selection = Some(sel);
        self
    }

    pub fn id(&self) -> CriterionId {
        self.id
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d1, self.d2)
    }

    pub fn evaluate(&self, s: &BipartiteState) -> Result<CriterionReport, CriteriaError> {
        if s.d1() != self.d1 {
            return Err(CriteriaError::DimensionMismatch {
                family: self.d1,
                state: s.d1(),
            });
        }
        if s.d2() != self.d2 {
            return Err(CriteriaError::DimensionMismatch {
                family: self.d2,
                state: s.d2(),
            });
        }
        match self.id {
            CriterionId::MumTracenorm => {
                let (xm, ym) = self.mums.as_ref().expect("MUM sets built");
                criterion_mum_tracenorm(s, xm, ym)
            }
            CriterionId::MumDiagonal => {
                let (xm, ym) = self.mums.as_ref().expect("MUM sets built");
                criterion_mum_diagonal(s, xm, ym)
            }
            CriterionId::MumLiu => {
                let (xm, ym) = self.mums.as_ref().expect("MUM sets built");
                let sel = self.selection.as_ref().expect("selection built");
                criterion_mum_liu(s, xm, ym, sel)
            }
            CriterionId::GsicTracenorm => {
                let (p, q) = self.gsics.as_ref().expect("GSIC sets built");
                criterion_gsic_tracenorm(s, p, q)
            }
            CriterionId::GsicDiagonal => {
                let (p, q) = self.gsics.as_ref().expect("GSIC sets built");
                criterion_gsic_diagonal(s, p, q)
            }
        }
    }
}
