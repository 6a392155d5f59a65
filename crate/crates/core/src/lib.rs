//! Detection of bipartite entanglement through measurement-based
//! separability criteria.
//!
//! The crate builds complete sets of mutually unbiased measurements (MUMs)
//! and general symmetric informationally complete POVMs (GSIC-POVMs) in any
//! finite dimension, evaluates trace-norm correlation-matrix criteria on
//! bipartite density matrices, and provides the canonical test states
//! (a 3x3 bound-entangled tiles state and the Werner family) together with
//! independent PPT/CCNR cross-checks and a threshold scanner.
//!
//! A violation of any criterion certifies entanglement; satisfaction is
//! inconclusive (the criteria are necessary conditions for separability).
//! All values are immutable after construction and every operation is a
//! pure function, so everything here is safe to share across threads.

pub mod criteria;
pub mod linalg;
pub mod measurements;
pub mod oracle;
pub mod states;

pub use criteria::{
    correlation_matrix, criterion_gsic_diagonal, criterion_gsic_tracenorm, criterion_mum_diagonal,
    criterion_mum_liu, criterion_mum_tracenorm, expectation_matrix, CorrelationMatrix,
    CriteriaError, CriterionEvaluator, CriterionId, CriterionParams, CriterionReport,
    LiuSelection, VIOLATION_MARGIN,
};
pub use linalg::{
    kron, partial_trace, partial_trace_matrix, trace_norm, validate_state, BipartiteState,
    ComplexMatrix, DensityMatrix, LinalgError, SeparableEnsemble, Subsystem, PSD_TOLERANCE,
};
pub use measurements::{
    build_gsic, build_mums, gell_mann_basis, verify_gsic, verify_mums, GsicPovm, MeasurementError,
    MeasurementFamily, MumSet, OperatorBasis, ParamSpec, VerificationReport,
};
pub use oracle::{
    ccnr_value, partial_transpose, ppt_min_eigenvalue, realign, threshold_scan, Boundary,
    OracleError, ScanPoint, ScanResult,
};
pub use states::{
    bennett_tiles, sample_density, sample_product_pure, sample_pure, sample_separable_mixture,
    swap_operator, werner, with_white_noise, StateFamily, StatesError, RNG_ALGORITHM,
};
