//! Independent ground truth for small dimensions.
//!
//! The vertex program writes a local model as a convex mixture of deterministic
//! strategies, built column by column from each strategy's 0/1 marginals. For
//! qubits the CHSH closed form gives the threshold outright, and exact
//! arithmetic in `Q(√2)` / `Q(√3)` pins the n = 2 and n = 3 optima.

use num_rational::BigRational;
use thiserror::Error;

use crate::bell_model::{solve_threshold_tables, ModelError};
use crate::lp::{rational_verify, simplex_solve, Basis, LinearProgram, LpError, LpStatus};
use crate::multiport::{
    exact_prediction_tables, prediction_tables, standard_settings, standard_settings_exact,
    Dimension, MultiportError, PhaseSettings, PhaseVector, PredictionTable,
};
use crate::scalar::{ExactTrig, LpScalar, Sqrt2Field, Sqrt3Field};

/// Largest dimension the vertex enumeration accepts.
pub const ORACLE_MAX_DIMENSION: usize = 6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("oracle mode supports n ≤ {ORACLE_MAX_DIMENSION}, got {0}")]
    TooLarge(usize),
    #[error("the CHSH form needs n = 2, got {0}")]
    NotQubit(usize),
    #[error("vertex program ended {0:?} instead of optimal")]
    NotOptimal(LpStatus),
    #[error(transparent)]
    Multiport(#[from] MultiportError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// One fixed outcome per observable: a vertex of the local polytope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DeterministicStrategy {
    pub k1: usize,
    pub k2: usize,
    pub l1: usize,
    pub l2: usize,
}

impl DeterministicStrategy {
    /// 0/1 pair marginals, `4·n²` entries laid out pair-major then `(k, l)`.
    pub fn marginals(&self, n: usize) -> Vec<u8> {
        let mut out = vec![0u8; 4 * n * n];
        let alice = [self.k1, self.k2];
        let bob = [self.l1, self.l2];
        for (a, &k) in alice.iter().enumerate() {
            for (b, &l) in bob.iter().enumerate() {
                out[(2 * a + b) * n * n + k * n + l] = 1;
            }
        }
        out
    }
}

fn check_size(n: usize) -> Result<(), OracleError> {
    if n > ORACLE_MAX_DIMENSION {
        return Err(OracleError::TooLarge(n));
    }
    if n < 2 {
        return Err(MultiportError::DimensionTooSmall(n).into());
    }
    Ok(())
}

/// All `n⁴` deterministic strategies, `k1` varying fastest.
pub fn enumerate_vertices(n: usize) -> Result<Vec<DeterministicStrategy>, OracleError> {
    check_size(n)?;
    let mut out = Vec::with_capacity(n.pow(4));
    for l2 in 0..n {
        for l1 in 0..n {
            for k2 in 0..n {
                for k1 in 0..n {
                    out.push(DeterministicStrategy { k1, k2, l1, l2 });
                }
            }
        }
    }
    Ok(out)
}

/// `max v` s.t. `Σ_s w_s·marginals(s) = v·Q + (1−v)/n²`, `Σ w = 1`, `w ≥ 0`.
/// Variables are the vertex weights in [`enumerate_vertices`] order, then `v`.
pub fn build_vertex_lp<T: LpScalar>(
    tables: &[PredictionTable<T>; 4],
) -> Result<LinearProgram<T>, OracleError> {
    let n = tables[0].n();
    let vertices = enumerate_vertices(n)?;
    let v = vertices.len();
    let cells = 4 * n * n;
    let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); cells];
    for (s, vertex) in vertices.iter().enumerate() {
        for (r, bit) in vertex.marginals(n).into_iter().enumerate() {
            if bit == 1 {
                rows[r].push((s, T::one()));
            }
        }
    }
    let mut lp = LinearProgram::new(v + 1);
    lp.set_objective(v, T::one())?;
    lp.set_bounds(v, T::zero(), Some(T::one()))?;
    let noise = tables[0].noise_cell();
    for (r, mut coeffs) in rows.into_iter().enumerate() {
        let table = &tables[r / (n * n)];
        let (k, l) = ((r % (n * n)) / n, r % n);
        // v·Q + (1−v)·noise on the right, moved to the left
        coeffs.push((v, noise.clone() - table.base(k, l).clone()));
        lp.add_constraint(coeffs, noise.clone())?;
    }
    lp.add_constraint((0..v).map(|s| (s, T::one())).collect(), T::one())?;
    Ok(lp)
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub v_crit: f64,
    pub f_threshold: f64,
    /// Mixture weights over [`enumerate_vertices`].
    pub weights: Vec<f64>,
    /// Final basis, usable as an exact-verification hint.
    pub basis: Basis,
}

pub fn oracle_threshold_tables(
    tables: &[PredictionTable<f64>; 4],
) -> Result<OracleResult, OracleError> {
    let lp = build_vertex_lp(tables)?;
    let sol = simplex_solve(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(OracleError::NotOptimal(sol.status));
    }
    let v = lp.num_vars() - 1;
    Ok(OracleResult {
        v_crit: sol.primal[v],
        f_threshold: 1.0 - sol.primal[v],
        weights: sol.primal[..v].to_vec(),
        basis: sol.basis,
    })
}

pub fn oracle_threshold(settings: &PhaseSettings<f64>) -> Result<OracleResult, OracleError> {
    check_size(settings.n())?;
    oracle_threshold_tables(&prediction_tables(settings)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshResult {
    /// `E_ij = Σ (−1)^{k+l} Q_ij(k,l)` in (A1B1, A1B2, A2B1, A2B2) order.
    pub correlations: [f64; 4],
    /// Largest CHSH combination at visibility 1.
    pub s: f64,
    /// `2/|S|` when `|S| > 2`, else 1.
    pub v_crit: f64,
}

/// CHSH closed form for qubit settings.
pub fn chsh_analytic(settings: &PhaseSettings<f64>) -> Result<ChshResult, OracleError> {
    if settings.n() != 2 {
        return Err(OracleError::NotQubit(settings.n()));
    }
    let tables = prediction_tables(settings)?;
    let mut e = [0.0; 4];
    for (ei, t) in e.iter_mut().zip(&tables) {
        for k in 0..2 {
            for l in 0..2 {
                let sign = if (k + l) % 2 == 0 { 1.0 } else { -1.0 };
                *ei += sign * t.base(k, l);
            }
        }
    }
    let total: f64 = e.iter().sum();
    let s = e
        .iter()
        .map(|x| (total - 2.0 * x).abs())
        .fold(0.0, f64::max);
    let v_crit = if s > 2.0 { 2.0 / s } else { 1.0 };
    Ok(ChshResult {
        correlations: e,
        s,
        v_crit,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactThreshold<T> {
    pub v_crit: T,
    pub f_threshold: T,
    pub verified_from_hint: bool,
}

/// Vertex-program optimum in exact arithmetic for phases given as multiples of π.
///
/// A floating-point solve of the rounded program supplies the basis, which is
/// then certified (or re-solved) exactly.
pub fn exact_vertex_threshold<T: ExactTrig>(
    settings: &PhaseSettings<BigRational>,
) -> Result<ExactThreshold<T>, OracleError> {
    check_size(settings.n())?;
    let tables = exact_prediction_tables::<T>(settings)?;
    let lp = build_vertex_lp(&tables)?;
    let float = lp.map_scalar(LpScalar::to_f64);
    let hint = simplex_solve(&float)?.basis;
    let outcome = rational_verify(&lp, &hint)?;
    let v_crit = outcome
        .objective
        .ok_or(OracleError::NotOptimal(outcome.status))?;
    Ok(ExactThreshold {
        f_threshold: T::one() - v_crit.clone(),
        v_crit,
        verified_from_hint: outcome.verified_from_hint,
    })
}

/// One line of the verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn record(&mut self, name: String, outcome: Result<(bool, String), OracleError>) {
        let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        self.checks.push(Check {
            name,
            passed,
            detail,
        });
    }
}

fn qubit_settings(a2: f64, b1: f64, b2: f64) -> PhaseSettings<f64> {
    let v = |x: f64| PhaseVector::new(vec![0.0, x]).expect("finite");
    PhaseSettings::new(v(0.0), v(a2), v(b1), v(b2)).expect("equal lengths")
}

/// Cross-checks the threshold program against the oracles for every `n` in range
/// (oracle-sized dimensions only).
pub fn verify_suite(n_min: usize, n_max: usize) -> VerifyReport {
    let mut report = VerifyReport::default();
    for n in n_min.max(2)..=n_max.min(ORACLE_MAX_DIMENSION) {
        report.record(
            format!("n={n} joint vs vertex program"),
            (|| {
                let settings = standard_settings::<f64>(Dimension::new(n)?);
                let tables = prediction_tables(&settings)?;
                let joint = solve_threshold_tables(&tables)?;
                let vertex = oracle_threshold_tables(&tables)?;
                let gap = (joint.v_crit - vertex.v_crit).abs();
                Ok((
                    gap <= 1e-7,
                    format!("f={:.9} gap={gap:.1e}", joint.f_threshold),
                ))
            })(),
        );

        report.record(
            format!("n={n} vertex mixture sanity"),
            (|| {
                let vertices = enumerate_vertices(n)?;
                let mut mix = vec![0.0; 4 * n * n];
                let mut ok = vertices.len() == n.pow(4);
                for v in &vertices {
                    let m = v.marginals(n);
                    ok &= m
                        .chunks(n * n)
                        .all(|pair| pair.iter().map(|&b| b as usize).sum::<usize>() == 1);
                    for (acc, b) in mix.iter_mut().zip(m) {
                        *acc += f64::from(b) / vertices.len() as f64;
                    }
                }
                let noise = 1.0 / (n * n) as f64;
                let dev = mix.iter().map(|x| (x - noise).abs()).fold(0.0, f64::max);
                Ok((
                    ok && dev < 1e-12,
                    format!(
                        "{} vertices, uniform mixture deviation {dev:.1e}",
                        vertices.len()
                    ),
                ))
            })(),
        );
    }

    if n_min <= 2 && n_max >= 2 {
        let mut qubit_cases = vec![(
            "standard settings".to_string(),
            standard_settings::<f64>(Dimension::new(2).expect("2 ≥ 2")),
        )];
        for (i, (a2, b1, b2)) in [(1.1, 0.3, -0.9), (2.0, 0.7, 0.1), (0.4, 2.5, -1.7)]
            .into_iter()
            .enumerate()
        {
            qubit_cases.push((format!("fixed settings #{i}"), qubit_settings(a2, b1, b2)));
        }
        for (label, settings) in qubit_cases {
            report.record(
                format!("n=2 CHSH vs programs ({label})"),
                (|| {
                    let chsh = chsh_analytic(&settings)?;
                    let joint = solve_threshold_tables(&prediction_tables(&settings)?)?;
                    let vertex = oracle_threshold(&settings)?;
                    let gap = (chsh.v_crit - joint.v_crit)
                        .abs()
                        .max((chsh.v_crit - vertex.v_crit).abs());
                    Ok((
                        gap <= 1e-6,
                        format!("S={:.9} v={:.9} gap={gap:.1e}", chsh.s, chsh.v_crit),
                    ))
                })(),
            );
        }

        report.record(
            "n=2 exact optimum in Q(√2)".into(),
            (|| {
                let exact = exact_vertex_threshold::<Sqrt2Field>(&standard_settings_exact(
                    Dimension::new(2)?,
                ))?;
                let expected = Sqrt2Field::from_parts((0, 1), (1, 2));
                let float = solve_threshold_tables(&prediction_tables(
                    &standard_settings::<f64>(Dimension::new(2)?),
                )?)?;
                let gap = (exact.v_crit.to_f64() - float.v_crit).abs();
                Ok((
                    exact.v_crit == expected && gap <= 1e-9,
                    format!("v={} gap={gap:.1e}", exact.v_crit),
                ))
            })(),
        );
    }

    if n_min <= 3 && n_max >= 3 {
        report.record(
            "n=3 exact optimum in Q(√3)".into(),
            (|| {
                let exact = exact_vertex_threshold::<Sqrt3Field>(&standard_settings_exact(
                    Dimension::new(3)?,
                ))?;
                let float = solve_threshold_tables(&prediction_tables(
                    &standard_settings::<f64>(Dimension::new(3)?),
                )?)?;
                let gap = (exact.v_crit.to_f64() - float.v_crit).abs();
                Ok((
                    gap <= 1e-9,
                    format!(
                        "v={} ≈ {:.12} gap={gap:.1e}",
                        exact.v_crit,
                        exact.v_crit.to_f64()
                    ),
                ))
            })(),
        );
    }
    report
}
