//! Construction and verification of complete measurement sets: mutually
//! unbiased measurements (MUMs) with efficiency parameter kappa, and
//! general symmetric informationally complete POVMs (GSIC-POVMs) with
//! purity parameter alpha.
//!
//! Both constructions start from the generalized Gell-Mann operator basis
//! and shift linear combinations of basis elements around the maximally
//! mixed operator, `P = I/d + t * F`. The defining trace conditions hold
//! for every `t`; positivity bounds it. The scale `t` for a requested
//! kappa or alpha is found by bisection on the numerically recomputed
//! purity rather than by a closed form, so the trace conditions stay the
//! single source of truth.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::ComplexMatrix;

/// Feasibility slack on requested kappa/alpha against the bisected
/// positivity limit; keeps exact boundary values like kappa = 1 at d = 2
/// admissible.
const PARAM_SLACK: f64 = 1e-9;

/// Verification threshold on the trace-condition deviations.
pub const CONDITION_TOLERANCE: f64 = 1e-10;

/// Verification threshold on the minimum eigenvalue.
pub const EIGENVALUE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum MeasurementError {
    #[error("dimension must be at least 2, got {dim}")]
    DimensionTooSmall { dim: usize },
    #[error(
        "kappa = {requested} infeasible for d = {dim}: must satisfy 1/d = {lower} < kappa <= kappa_max = {max}"
    )]
    KappaInfeasible {
        requested: f64,
        dim: usize,
        lower: f64,
        max: f64,
    },
    #[error(
        "alpha = {requested} infeasible for d = {dim}: must satisfy 1/d^3 = {lower} < alpha <= alpha_max = {max}"
    )]
    AlphaInfeasible {
        requested: f64,
        dim: usize,
        lower: f64,
        max: f64,
    },
    #[error("measurement count {requested} out of range 1..={max}")]
    InvalidCount { requested: usize, max: usize },
}

/// Requested efficiency/purity parameter: an explicit value or the largest
/// one this construction keeps positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamSpec {
    Max,
    Value(f64),
}

/// Orthonormal basis of d^2 - 1 traceless Hermitian operators.
#[derive(Debug, Clone)]
pub struct OperatorBasis {
    dim: usize,
    ops: Vec<ComplexMatrix>,
}

impl OperatorBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

/// Generalized Gell-Mann basis, normalized so that Tr(G_a G_b) = delta_ab.
/// Canonical order: symmetric pairs (j < k, lexicographic), antisymmetric
/// pairs in the same order, then the d - 1 diagonal operators.
pub fn gell_mann_basis(d: usize) -> Result<OperatorBasis, MeasurementError> {
    if d < 2 {
        return Err(MeasurementError::DimensionTooSmall { dim: d });
    }
    let inv_sqrt2 = 1.0 / 2f64.sqrt();
    let mut ops = Vec::with_capacity(d * d - 1);
    for j in 0..d {
        for k in (j + 1)..d {
            let mut m = ComplexMatrix::zeros(d, d);
            m.set(j, k, Complex64::new(inv_sqrt2, 0.0));
            m.set(k, j, Complex64::new(inv_sqrt2, 0.0));
            ops.push(m);
        }
    }
    for j in 0..d {
        for k in (j + 1)..d {
            let mut m = ComplexMatrix::zeros(d, d);
            m.set(j, k, Complex64::new(0.0, -inv_sqrt2));
            m.set(k, j, Complex64::new(0.0, inv_sqrt2));
            ops.push(m);
        }
    }
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut m = ComplexMatrix::zeros(d, d);
        for diag in 0..l {
            m.set(diag, diag, Complex64::new(norm, 0.0));
        }
        m.set(l, l, Complex64::new(-(l as f64) * norm, 0.0));
        ops.push(m);
    }
    Ok(OperatorBasis { dim: d, ops })
}

/// A set of m mutually unbiased measurements on dimension d: m blocks of
/// d unit-trace PSD operators, each block summing to the identity.
#[derive(Debug, Clone)]
pub struct MumSet {
    dim: usize,
    kappa: f64,
    blocks: Vec<Vec<ComplexMatrix>>,
}

impl MumSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of measurements m.
    pub fn count(&self) -> usize {
        self.blocks.len()
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn blocks(&self) -> &[Vec<ComplexMatrix>] {
        &self.blocks
    }

    pub fn block(&self, b: usize) -> &[ComplexMatrix] {
        &self.blocks[b]
    }

    /// First m measurements of the set. Mutual unbiasedness is pairwise,
    /// so any prefix is again a valid MUM set.
    pub fn prefix(&self, m: usize) -> Result<MumSet, MeasurementError> {
        if m == 0 || m > self.count() {
            return Err(MeasurementError::InvalidCount {
                requested: m,
                max: self.count(),
            });
        }
        Ok(MumSet {
            dim: self.dim,
            kappa: self.kappa,
            blocks: self.blocks[..m].to_vec(),
        })
    }

    /// Flattens per the index law i = (b - 1) d + n (1-based), i.e. blocks
    /// concatenated in order.
    pub fn flatten(&self) -> MeasurementFamily {
        MeasurementFamily {
            dim: self.dim,
            ops: self.blocks.iter().flatten().cloned().collect(),
        }
    }
}

/// A GSIC-POVM: d^2 operators with common purity alpha and uniform
/// pairwise overlaps, summing to the identity.
#[derive(Debug, Clone)]
pub struct GsicPovm {
    dim: usize,
    alpha: f64,
    ops: Vec<ComplexMatrix>,
}

impl GsicPovm {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    /// Flattening passes the d^2 operators through in natural order.
    pub fn flatten(&self) -> MeasurementFamily {
        MeasurementFamily {
            dim: self.dim,
            ops: self.ops.clone(),
        }
    }
}

/// Flat list of measurement operators in the fixed index order used by the
/// correlation matrix.
#[derive(Debug, Clone)]
pub struct MeasurementFamily {
    dim: usize,
    ops: Vec<ComplexMatrix>,
}

impl MeasurementFamily {
    /// Wraps an explicit operator list; panics unless every operator is
    /// dim x dim. No further conditions are imposed here, so ad-hoc
    /// families can be fed to the correlation matrix directly.
    pub fn new(dim: usize, ops: Vec<ComplexMatrix>) -> Self {
        assert!(
            ops.iter().all(|op| op.rows() == dim && op.cols() == dim),
            "family operators must act on dimension {dim}"
        );
        Self { dim, ops }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn op(&self, i: usize) -> &ComplexMatrix {
        &self.ops[i]
    }
}

/// Maximum deviation from each defining condition, plus the smallest
/// eigenvalue across all operators.
#[derive(Debug, Clone, Copy)]
pub struct VerificationReport {
    /// MUM: max |Tr(P) - 1|. GSIC: max |Tr(M^2) - alpha|.
    pub condition_i: f64,
    /// Max deviation from the pairwise-overlap formula of condition (ii).
    pub condition_ii: f64,
    /// Max entrywise deviation of each block sum (MUM) or the full sum
    /// (GSIC) from the identity.
    pub completeness: f64,
    /// Minimum eigenvalue over all operators.
    pub min_eigenvalue: f64,
}

impl VerificationReport {
    pub fn passes(&self) -> bool {
        self.condition_i <= CONDITION_TOLERANCE
            && self.condition_ii <= CONDITION_TOLERANCE
            && self.completeness <= CONDITION_TOLERANCE
            && self.min_eigenvalue >= -EIGENVALUE_TOLERANCE
    }
}

/// Shifted generators for the MUM construction: the basis is split into
/// d + 1 consecutive groups of d - 1 operators; block b uses
/// F_n = F_sum - (d + sqrt(d)) G_n for n < d and F_d = (1 + sqrt(d)) F_sum,
/// which makes every block sum to zero and distinct blocks trace-orthogonal.
fn mum_generators(basis: &OperatorBasis) -> Vec<Vec<ComplexMatrix>> {
    let d = basis.dim();
    let shift = d as f64 + (d as f64).sqrt();
    let last = 1.0 + (d as f64).sqrt();
    (0..=d)
        .map(|b| {
            let group = &basis.ops()[b * (d - 1)..(b + 1) * (d - 1)];
            let mut f_sum = ComplexMatrix::zeros(d, d);
            for g in group {
                f_sum = &f_sum + g;
            }
            let mut gens: Vec<ComplexMatrix> = group
                .iter()
                .map(|g| &f_sum - &g.scaled_re(shift))
                .collect();
            gens.push(f_sum.scaled_re(last));
            gens
        })
        .collect()
}

/// GSIC generators: F_a' = F_sum - d (d + 1) G_a for a < d^2 - 1 and
/// F' = (d + 1) F_sum, summing to zero with uniform pairwise overlaps.
fn gsic_generators(basis: &OperatorBasis) -> Vec<ComplexMatrix> {
    let d = basis.dim();
    let shift = (d * (d + 1)) as f64;
    let mut f_sum = ComplexMatrix::zeros(d, d);
    for g in basis.ops() {
        f_sum = &f_sum + g;
    }
    let mut gens: Vec<ComplexMatrix> = basis
        .ops()
        .iter()
        .map(|g| &f_sum - &g.scaled_re(shift))
        .collect();
    gens.push(f_sum.scaled_re((d + 1) as f64));
    gens
}

fn shifted_op(d: usize, offset: f64, t: f64, gen: &ComplexMatrix) -> ComplexMatrix {
    let mut op = gen.scaled_re(t);
    for i in 0..d {
        let v = op.get(i, i) + Complex64::new(offset, 0.0);
        op.set(i, i, v);
    }
    op
}

/// Largest t with every operator PSD, by bisection on the minimum
/// eigenvalue. `feasible(0)` holds (the operators are I/d or I/d^2), and
/// the feasible set is an interval because each minimum eigenvalue is
/// concave in t.
fn bisect_max_t(mut feasible: impl FnMut(f64) -> bool) -> f64 {
    let mut hi = 1.0;
    let mut guard = 0;
    while feasible(hi) {
        hi *= 2.0;
        guard += 1;
        assert!(guard < 64, "positivity never lost while growing t");
    }
    let mut lo = 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Solves purity(t) = target for t in [0, hi] by bisection; purity is
/// strictly increasing in t.
fn bisect_purity(target: f64, hi: f64, mut purity: impl FnMut(f64) -> f64) -> f64 {
    let mut lo = 0.0;
    let mut hi = hi;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if purity(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn purity_of(op: &ComplexMatrix) -> f64 {
    op.trace_product(op).re
}

/// Builds the complete set of d + 1 MUMs on dimension d.
pub fn build_mums(d: usize, spec: ParamSpec) -> Result<MumSet, MeasurementError> {
    let basis = gell_mann_basis(d)?;
    let gens = mum_generators(&basis);
    let min_eig_at = |t: f64| {
        gens.iter()
            .flatten()
            .map(|g| shifted_op(d, 1.0 / d as f64, t, g).min_hermitian_eigenvalue())
            .fold(f64::INFINITY, f64::min)
    };
    let kappa_at = |t: f64| purity_of(&shifted_op(d, 1.0 / d as f64, t, &gens[0][0]));

    let t_max = bisect_max_t(|t| min_eig_at(t) >= 0.0);
    let kappa_max = kappa_at(t_max);
    let t = match spec {
        ParamSpec::Max => t_max,
        ParamSpec::Value(kappa) => {
            let lower = 1.0 / d as f64;
            if kappa <= lower || kappa > kappa_max + PARAM_SLACK {
                return Err(MeasurementError::KappaInfeasible {
                    requested: kappa,
                    dim: d,
                    lower,
                    max: kappa_max,
                });
            }
            bisect_purity(kappa, t_max, kappa_at)
        }
    };

    let blocks: Vec<Vec<ComplexMatrix>> = gens
        .iter()
        .map(|blk| {
            blk.iter()
                .map(|g| shifted_op(d, 1.0 / d as f64, t, g))
                .collect()
        })
        .collect();
    let kappa = purity_of(&blocks[0][0]);
    Ok(MumSet {
        dim: d,
        kappa,
        blocks,
    })
}

/// Builds the GSIC-POVM of d^2 operators on dimension d.
pub fn build_gsic(d: usize, spec: ParamSpec) -> Result<GsicPovm, MeasurementError> {
    let basis = gell_mann_basis(d)?;
    let gens = gsic_generators(&basis);
    let offset = 1.0 / (d * d) as f64;
    let min_eig_at = |t: f64| {
        gens.iter()
            .map(|g| shifted_op(d, offset, t, g).min_hermitian_eigenvalue())
            .fold(f64::INFINITY, f64::min)
    };
    let alpha_at = |t: f64| purity_of(&shifted_op(d, offset, t, &gens[0]));

    let t_max = bisect_max_t(|t| min_eig_at(t) >= 0.0);
    let alpha_max = alpha_at(t_max);
    let t = match spec {
        ParamSpec::Max => t_max,
        ParamSpec::Value(alpha) => {
            let lower = 1.0 / (d * d * d) as f64;
            if alpha <= lower || alpha > alpha_max + PARAM_SLACK {
                return Err(MeasurementError::AlphaInfeasible {
                    requested: alpha,
                    dim: d,
                    lower,
                    max: alpha_max,
                });
            }
            bisect_purity(alpha, t_max, alpha_at)
        }
    };

    let ops: Vec<ComplexMatrix> = gens.iter().map(|g| shifted_op(d, offset, t, g)).collect();
    let alpha = purity_of(&ops[0]);
    Ok(GsicPovm { dim: d, alpha, ops })
}

/// Recomputes every MUM defining condition and reports the worst deviation
/// per condition.
pub fn verify_mums(set: &MumSet) -> VerificationReport {
    let d = set.dim();
    let kappa = set.kappa();
    let flat: Vec<(usize, &ComplexMatrix)> = set
        .blocks()
        .iter()
        .enumerate()
        .flat_map(|(b, blk)| blk.iter().map(move |p| (b, p)))
        .collect();

    let mut condition_i: f64 = 0.0;
    for (_, p) in &flat {
        condition_i = condition_i.max((p.trace() - Complex64::ONE).norm());
    }

    let mut condition_ii: f64 = 0.0;
    for (idx_a, (b, p)) in flat.iter().enumerate() {
        for (idx_b, (bp, q)) in flat.iter().enumerate() {
            let got = p.trace_product(q).re;
            let want = if b == bp && idx_a == idx_b {
                kappa
            } else if b == bp {
                (1.0 - kappa) / (d as f64 - 1.0)
            } else {
                1.0 / d as f64
            };
            condition_ii = condition_ii.max((got - want).abs());
        }
    }

    let mut completeness: f64 = 0.0;
    for blk in set.blocks() {
        let mut sum = ComplexMatrix::zeros(d, d);
        for p in blk {
            sum = &sum + p;
        }
        completeness = completeness.max((&sum - &ComplexMatrix::identity(d)).max_abs());
    }

    let min_eigenvalue = flat
        .iter()
        .map(|(_, p)| p.min_hermitian_eigenvalue())
        .fold(f64::INFINITY, f64::min);

    VerificationReport {
        condition_i,
        condition_ii,
        completeness,
        min_eigenvalue,
    }
}

/// Recomputes every GSIC defining condition; `condition_i` is the purity
/// deviation |Tr(M^2) - alpha|.
pub fn verify_gsic(povm: &GsicPovm) -> VerificationReport {
    let d = povm.dim();
    let alpha = povm.alpha();
    let ops = povm.ops();

    let mut condition_i: f64 = 0.0;
    for m in ops {
        condition_i = condition_i.max((m.trace_product(m).re - alpha).abs());
    }

    let off_diag = (1.0 - d as f64 * alpha) / ((d * (d * d - 1)) as f64);
    let mut condition_ii: f64 = 0.0;
    for (i, m) in ops.iter().enumerate() {
        for (j, n) in ops.iter().enumerate() {
            if i == j {
                continue;
            }
            condition_ii = condition_ii.max((m.trace_product(n).re - off_diag).abs());
        }
    }

    let mut sum = ComplexMatrix::zeros(d, d);
    for m in ops {
        sum = &sum + m;
    }
    let completeness = (&sum - &ComplexMatrix::identity(d)).max_abs();

    let min_eigenvalue = ops
        .iter()
        .map(|m| m.min_hermitian_eigenvalue())
        .fold(f64::INFINITY, f64::min);

    VerificationReport {
        condition_i,
        condition_ii,
        completeness,
        min_eigenvalue,
    }
}
