//! Noise and detector-efficiency thresholds for local realism with two
//! maximally entangled quNits measured through Bell multiports.
//!
//! The numerical core is generic over its scalar: the simplex engine runs on
//! `f64`/`f32` and on exact fields ([`BigRational`], `Q(√2)`, `Q(√3)`), and
//! the prediction tables follow the same scalar. The aliases below name the
//! instantiations used in practice.

pub mod bell_model;
pub mod lp;
pub mod multiport;
pub mod oracle;
pub mod scalar;

pub use num_rational::BigRational;

pub use bell_model::{
    bisect_critical_efficiency, build_efficiency_lp, build_threshold_lp, scan_critical_efficiency,
    solve_efficiency, solve_threshold, solve_threshold_tables, EfficiencyMethod, EfficiencySample,
    EfficiencyScanResult, HiddenVarIndex, ModelError, PURE_STATE_TOL,
};
pub use lp::{
    export_mps, rational_verify, simplex_solve, Basis, LpError, LpSolution, LpStatus, Pricing,
    SimplexOptions,
};
pub use multiport::{
    bell_multiport, efficiency_table, joint_probability, joint_probability_cosine,
    prediction_table, prediction_tables, standard_settings, standard_settings_exact, Dimension,
    MultiportError, PhaseSettings, PhaseVector, Setting, DEFAULT_MAX_DIMENSION,
};
pub use oracle::{
    chsh_analytic, enumerate_vertices, exact_vertex_threshold, oracle_threshold, verify_suite,
    OracleError,
};
pub use scalar::{ExactTrig, LpScalar, QuadraticSurd, Sqrt2Field, Sqrt3Field};

/// Floating-point linear program.
pub type LinearProgram = lp::LinearProgram<f64>;
/// Linear program over exact rationals.
pub type RationalLp = lp::LinearProgram<BigRational>;
/// Linear program over `Q(√2)`.
pub type Sqrt2Lp = lp::LinearProgram<Sqrt2Field>;
/// Linear program over `Q(√3)`.
pub type Sqrt3Lp = lp::LinearProgram<Sqrt3Field>;

pub type PredictionTable = multiport::PredictionTable<f64>;
pub type EfficiencyPredictionTable = multiport::EfficiencyPredictionTable<f64>;
pub type MultiportMatrix = multiport::MultiportMatrix<f64>;
pub type ThresholdResult = bell_model::ThresholdResult<f64>;
