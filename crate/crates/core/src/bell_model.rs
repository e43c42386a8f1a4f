//! Local-realism linear programs for the four-observable Bell experiment.
//!
//! Hidden variables are joint outcome assignments `(k1, k2, l1, l2)` for the
//! observables `A1, A2, B1, B2`. A visibility is reproducible by local hidden
//! variables iff some distribution over them has the predicted tables as its
//! pair marginals; the threshold LP maximizes that visibility.

use thiserror::Error;

use crate::lp::{simplex_solve_with, LinearProgram, LpError, LpStatus, SimplexOptions, SolveStats};
use crate::multiport::{
    prediction_tables, MultiportError, PhaseSettings, PredictionTable, SETTING_PAIRS,
};
use crate::scalar::LpScalar;

/// A visibility this close to 1 counts as "the pure state is local".
pub const PURE_STATE_TOL: f64 = 1e-7;

const CERT_NEGATIVITY_TOL: f64 = 1e-9;
const CERT_MASS_TOL: f64 = 1e-8;
const CERT_MARGINAL_TOL: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error(transparent)]
    Multiport(#[from] MultiportError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("threshold program ended {0:?} instead of optimal")]
    NotOptimal(LpStatus),
    #[error("certificate check failed: {what} off by {violation:e}")]
    CertificateInvalid { what: &'static str, violation: f64 },
    #[error("scan step {0} outside (0, 1)")]
    InvalidStep(f64),
    #[error("bisection tolerance {0} must be positive")]
    InvalidTolerance(f64),
    #[error("efficiency search aborted after {} samples: {source}", partial.samples.len())]
    SearchAborted {
        partial: Box<EfficiencyScanResult>,
        source: Box<ModelError>,
    },
}

/// One hidden-variable assignment; outcomes are `0..outcomes`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HiddenVarIndex {
    pub k1: usize,
    pub k2: usize,
    pub l1: usize,
    pub l2: usize,
}

impl HiddenVarIndex {
    pub fn flatten(&self, outcomes: usize) -> usize {
        ((self.k1 * outcomes + self.k2) * outcomes + self.l1) * outcomes + self.l2
    }

    pub fn unflatten(index: usize, outcomes: usize) -> Self {
        let l2 = index % outcomes;
        let rest = index / outcomes;
        let l1 = rest % outcomes;
        let rest = rest / outcomes;
        Self {
            k1: rest / outcomes,
            k2: rest % outcomes,
            l1,
            l2,
        }
    }

    /// Outcomes of the observable pair `pair` (index into [`SETTING_PAIRS`]).
    pub fn pair_outcome(&self, pair: usize) -> (usize, usize) {
        let (a, b) = SETTING_PAIRS[pair];
        let k = [self.k1, self.k2][a.index()];
        let l = [self.l1, self.l2][b.index()];
        (k, l)
    }
}

/// Row index of marginal `(k, l)` of pair `pair` in the assembled programs.
pub fn marginal_row(pair: usize, k: usize, l: usize, outcomes: usize) -> usize {
    (pair * outcomes + k) * outcomes + l
}

/// Builds: variables `outcomes⁴` hidden probabilities then `v ∈ [0,1]`; maximize `v`;
/// `4·outcomes²` marginal rows `Σ P − v·coeff = rhs`; one normalization row.
fn assemble<T: LpScalar>(
    outcomes: usize,
    cell: impl Fn(usize, usize, usize) -> (T, T),
) -> LinearProgram<T> {
    let hidden = outcomes.pow(4);
    let v = hidden;
    let mut lp = LinearProgram::new(hidden + 1);
    lp.set_objective(v, T::one()).expect("v in range");
    lp.set_bounds(v, T::zero(), Some(T::one()))
        .expect("v in range");

    let rows = 4 * outcomes * outcomes;
    let mut members: Vec<Vec<(usize, T)>> = vec![Vec::with_capacity(outcomes * outcomes + 1); rows];
    for h in 0..hidden {
        let idx = HiddenVarIndex::unflatten(h, outcomes);
        for pair in 0..4 {
            let (k, l) = idx.pair_outcome(pair);
            members[marginal_row(pair, k, l, outcomes)].push((h, T::one()));
        }
    }
    for pair in 0..4 {
        for k in 0..outcomes {
            for l in 0..outcomes {
                let r = marginal_row(pair, k, l, outcomes);
                let (v_coeff, rhs) = cell(pair, k, l);
                let mut coeffs = std::mem::take(&mut members[r]);
                coeffs.push((v, -v_coeff));
                lp.add_constraint(coeffs, rhs).expect("indices in range");
            }
        }
    }
    lp.add_constraint((0..hidden).map(|h| (h, T::one())).collect(), T::one())
        .expect("indices in range");
    lp
}

/// Ideal-detector program for the four tables in [`SETTING_PAIRS`] order.
pub fn build_threshold_lp<T: LpScalar>(tables: &[PredictionTable<T>; 4]) -> LinearProgram<T> {
    let n = tables[0].n();
    let noise = tables[0].noise_cell();
    assemble(n, |pair, k, l| {
        (
            tables[pair].base(k, l).clone() - noise.clone(),
            noise.clone(),
        )
    })
}

/// Program with outcome 0 meaning "no detection" and every detector firing with probability `eta`.
pub fn build_efficiency_lp<T: LpScalar>(
    tables: &[PredictionTable<T>; 4],
    eta: T,
) -> Result<LinearProgram<T>, ModelError> {
    if !(eta >= T::zero() && eta <= T::one()) {
        return Err(MultiportError::EfficiencyOutOfRange(eta.to_f64()).into());
    }
    let n = tables[0].n();
    let noise = tables[0].noise_cell();
    let miss = T::one() - eta.clone();
    let eta2 = eta.clone() * eta.clone();
    let single = eta * miss.clone() / T::from_ratio(n as i64, 1);
    let double = miss.clone() * miss;
    Ok(assemble(n + 1, |pair, k, l| match (k, l) {
        (0, 0) => (T::zero(), double.clone()),
        (0, _) | (_, 0) => (T::zero(), single.clone()),
        _ => (
            eta2.clone() * (tables[pair].base(k - 1, l - 1).clone() - noise.clone()),
            eta2.clone() * noise.clone(),
        ),
    }))
}

/// Pair marginals of a hidden-variable distribution, indexed like [`marginal_row`].
pub fn certificate_marginals(certificate: &[f64], outcomes: usize) -> Vec<f64> {
    let mut marginals = vec![0.0; 4 * outcomes * outcomes];
    for (h, p) in certificate.iter().enumerate() {
        let idx = HiddenVarIndex::unflatten(h, outcomes);
        for pair in 0..4 {
            let (k, l) = idx.pair_outcome(pair);
            marginals[marginal_row(pair, k, l, outcomes)] += p;
        }
    }
    marginals
}

#[derive(Debug, Clone)]
pub struct ThresholdResult<T> {
    pub n: usize,
    /// Present when solved from phase settings rather than raw tables.
    pub settings: Option<PhaseSettings<f64>>,
    /// Largest visibility that admits a local hidden-variable model.
    pub v_crit: T,
    /// Noise fraction `1 − v_crit`.
    pub f_threshold: T,
    /// Hidden-variable distribution at the optimum.
    pub certificate: Vec<T>,
    pub stats: SolveStats,
    /// Worst marginal reconstruction error of the certificate.
    pub marginal_error: f64,
}

fn solve_program<T: LpScalar>(
    lp: &LinearProgram<T>,
    targets: impl Fn(&T) -> Vec<f64>,
    outcomes: usize,
) -> Result<(T, Vec<T>, SolveStats, f64), ModelError> {
    let sol = simplex_solve_with(lp, &SimplexOptions::default())?;
    if sol.status != LpStatus::Optimal {
        return Err(ModelError::NotOptimal(sol.status));
    }
    let hidden = outcomes.pow(4);
    let v = sol.primal[hidden].clone();
    let certificate = sol.primal[..hidden].to_vec();
    let cert_f: Vec<f64> = certificate.iter().map(LpScalar::to_f64).collect();

    let most_negative = cert_f.iter().cloned().fold(0.0f64, f64::min);
    if most_negative < -CERT_NEGATIVITY_TOL {
        return Err(ModelError::CertificateInvalid {
            what: "negative probability",
            violation: -most_negative,
        });
    }
    let mass: f64 = cert_f.iter().sum();
    if (mass - 1.0).abs() > CERT_MASS_TOL {
        return Err(ModelError::CertificateInvalid {
            what: "total mass",
            violation: (mass - 1.0).abs(),
        });
    }
    let marginal_error = certificate_marginals(&cert_f, outcomes)
        .iter()
        .zip(targets(&v))
        .map(|(m, t)| (m - t).abs())
        .fold(0.0, f64::max);
    if marginal_error > CERT_MARGINAL_TOL {
        return Err(ModelError::CertificateInvalid {
            what: "marginal",
            violation: marginal_error,
        });
    }
    Ok((v, certificate, sol.stats, marginal_error))
}

/// Threshold from explicit tables (any scalar the LP engine supports).
pub fn solve_threshold_tables<T: LpScalar>(
    tables: &[PredictionTable<T>; 4],
) -> Result<ThresholdResult<T>, ModelError> {
    let n = tables[0].n();
    let lp = build_threshold_lp(tables);
    let targets = |v: &T| {
        let mut out = Vec::with_capacity(4 * n * n);
        for table in tables {
            for k in 0..n {
                for l in 0..n {
                    out.push(table.at_visibility(k, l, v).to_f64());
                }
            }
        }
        out
    };
    let (v_crit, certificate, stats, marginal_error) = solve_program(&lp, targets, n)?;
    Ok(ThresholdResult {
        n,
        settings: None,
        f_threshold: T::one() - v_crit.clone(),
        v_crit,
        certificate,
        stats,
        marginal_error,
    })
}

/// Threshold noise fraction for the given settings.
pub fn solve_threshold(settings: &PhaseSettings<f64>) -> Result<ThresholdResult<f64>, ModelError> {
    let tables = prediction_tables(settings)?;
    let mut result = solve_threshold_tables(&tables)?;
    result.settings = Some(settings.clone());
    Ok(result)
}

/// Largest visibility admitting a local model at detector efficiency `eta`.
pub fn solve_efficiency(
    tables: &[PredictionTable<f64>; 4],
    eta: f64,
) -> Result<ThresholdResult<f64>, ModelError> {
    let n = tables[0].n();
    let lp = build_efficiency_lp(tables, eta)?;
    let targets = |v: &f64| {
        let outcomes = n + 1;
        let mut out = Vec::with_capacity(4 * outcomes * outcomes);
        for table in tables {
            let ext = crate::multiport::efficiency_table(table, eta).expect("eta validated");
            for k in 0..outcomes {
                for l in 0..outcomes {
                    out.push(ext.cell(k, l, v));
                }
            }
        }
        out
    };
    let (v_crit, certificate, stats, marginal_error) = solve_program(&lp, targets, n + 1)?;
    Ok(ThresholdResult {
        n,
        settings: None,
        f_threshold: 1.0 - v_crit,
        v_crit,
        certificate,
        stats,
        marginal_error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencySample {
    pub eta: f64,
    pub v_crit: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EfficiencyMethod {
    Scan,
    Bisection,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyScanResult {
    pub n: usize,
    pub settings: PhaseSettings<f64>,
    /// Evaluated points, sorted by increasing `eta`.
    pub samples: Vec<EfficiencySample>,
    pub eta_critical: f64,
    pub method: EfficiencyMethod,
    /// LP solves spent narrowing the bracket (excludes the `eta = 1` probe).
    pub refinement_solves: usize,
}

impl EfficiencyScanResult {
    /// `v_crit` at `eta = 1`, when sampled.
    pub fn ideal_v_crit(&self) -> Option<f64> {
        self.samples.iter().find(|s| s.eta == 1.0).map(|s| s.v_crit)
    }

    pub fn total_iterations(&self) -> usize {
        self.samples.iter().map(|s| s.iterations).sum()
    }
}

fn is_local(v_crit: f64) -> bool {
    v_crit >= 1.0 - PURE_STATE_TOL
}

struct Search {
    n: usize,
    settings: PhaseSettings<f64>,
    tables: [PredictionTable<f64>; 4],
    samples: Vec<EfficiencySample>,
}

impl Search {
    fn new(settings: &PhaseSettings<f64>) -> Result<Self, ModelError> {
        Ok(Self {
            n: settings.n(),
            settings: settings.clone(),
            tables: prediction_tables(settings)?,
            samples: Vec::new(),
        })
    }

    fn sample(&mut self, eta: f64) -> Result<f64, ModelError> {
        let r = solve_efficiency(&self.tables, eta)?;
        self.samples.push(EfficiencySample {
            eta,
            v_crit: r.v_crit,
            iterations: r.stats.iterations,
        });
        Ok(r.v_crit)
    }

    fn finish(
        mut self,
        eta_critical: f64,
        method: EfficiencyMethod,
        refinement_solves: usize,
    ) -> EfficiencyScanResult {
        self.samples.sort_by(|a, b| a.eta.total_cmp(&b.eta));
        EfficiencyScanResult {
            n: self.n,
            settings: self.settings,
            samples: self.samples,
            eta_critical,
            method,
            refinement_solves,
        }
    }

    fn abort(
        self,
        method: EfficiencyMethod,
        refinement_solves: usize,
        err: ModelError,
    ) -> ModelError {
        let partial = self.finish(f64::NAN, method, refinement_solves);
        ModelError::SearchAborted {
            partial: Box::new(partial),
            source: Box::new(err),
        }
    }
}

/// Walks `eta` down from 1 in steps of `step` until the pure state admits a local model.
///
/// The critical efficiency is the first grid point where that happens.
pub fn scan_critical_efficiency(
    settings: &PhaseSettings<f64>,
    step: f64,
) -> Result<EfficiencyScanResult, ModelError> {
    if !(step > 0.0 && step < 1.0) {
        return Err(ModelError::InvalidStep(step));
    }
    let mut search = Search::new(settings)?;
    let mut i = 0usize;
    loop {
        // grid points rounded to 1e-12 so 1 − 18·0.01 prints as 0.82
        let eta = ((1.0 - i as f64 * step).max(0.0) * 1e12).round() / 1e12;
        match search.sample(eta) {
            Ok(v) if is_local(v) || eta == 0.0 => {
                return Ok(search.finish(eta, EfficiencyMethod::Scan, i));
            }
            Ok(_) => {}
            Err(e) => return Err(search.abort(EfficiencyMethod::Scan, i, e)),
        }
        i += 1;
    }
}

/// Bisects on "the pure state is local at `eta`" over `[0, 1]` to within `tol`.
pub fn bisect_critical_efficiency(
    settings: &PhaseSettings<f64>,
    tol: f64,
) -> Result<EfficiencyScanResult, ModelError> {
    if !(tol > 0.0) {
        return Err(ModelError::InvalidTolerance(tol));
    }
    let mut search = Search::new(settings)?;
    match search.sample(1.0) {
        Ok(v) if is_local(v) => return Ok(search.finish(1.0, EfficiencyMethod::Bisection, 0)),
        Ok(_) => {}
        Err(e) => return Err(search.abort(EfficiencyMethod::Bisection, 0, e)),
    }
    // eta = 0 is local by construction: nothing ever fires
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut solves = 0;
    while hi - lo > 2.0 * tol {
        let mid = 0.5 * (lo + hi);
        solves += 1;
        match search.sample(mid) {
            Ok(v) if is_local(v) => lo = mid,
            Ok(_) => hi = mid,
            Err(e) => return Err(search.abort(EfficiencyMethod::Bisection, solves, e)),
        }
    }
    Ok(search.finish(0.5 * (lo + hi), EfficiencyMethod::Bisection, solves))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::simplex_solve;
    use crate::multiport::{standard_settings, Dimension, PhaseVector};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn standard(n: usize) -> PhaseSettings<f64> {
        standard_settings(Dimension::new(n).unwrap())
    }

    #[test]
    fn index_flattening_is_a_bijection() {
        for outcomes in [2usize, 3, 4] {
            let total = outcomes.pow(4);
            let mut seen = vec![false; total];
            for h in 0..total {
                let idx = HiddenVarIndex::unflatten(h, outcomes);
                assert_eq!(idx.flatten(outcomes), h);
                assert!(!std::mem::replace(&mut seen[h], true));
            }
        }
    }

    #[test]
    fn program_sizes() {
        let t3 = prediction_tables(&standard(3)).unwrap();
        let lp = build_threshold_lp(&t3);
        assert_eq!(lp.num_vars(), 81 + 1);
        assert_eq!(lp.num_constraints(), 36 + 1);

        let t2 = prediction_tables(&standard(2)).unwrap();
        let lp = build_threshold_lp(&t2);
        assert_eq!(lp.num_vars(), 16 + 1);
        assert_eq!(lp.num_constraints(), 16 + 1);

        let lp = build_efficiency_lp(&t2, 0.9).unwrap();
        assert_eq!(lp.num_vars(), 81 + 1);
        assert_eq!(lp.num_constraints(), 36 + 1);
        assert!(build_efficiency_lp(&t2, -0.1).is_err());
    }

    #[test]
    fn white_noise_is_classical() {
        let tables = prediction_tables(&standard(3)).unwrap();
        let mut lp = build_threshold_lp(&tables);
        let v = lp.num_vars() - 1;
        lp.set_bounds(v, 0.0, Some(0.0)).unwrap();
        let mut uniform = vec![1.0 / 81.0; 81];
        uniform.push(0.0);
        assert!(lp.max_residual(&uniform) < 1e-14);
        assert_eq!(simplex_solve(&lp).unwrap().status, LpStatus::Optimal);
    }

    #[test]
    fn qubit_threshold() {
        let r = solve_threshold(&standard(2)).unwrap();
        assert!((r.v_crit - FRAC_1_SQRT_2).abs() < 1e-9);
        assert!((r.f_threshold - (1.0 - FRAC_1_SQRT_2)).abs() < 1e-9);
        assert!(r.marginal_error < 1e-7);
    }

    #[test]
    fn efficiency_extremes() {
        let tables = prediction_tables(&standard(2)).unwrap();
        let ideal = solve_threshold_tables(&tables).unwrap();
        let at_one = solve_efficiency(&tables, 1.0).unwrap();
        assert!((ideal.v_crit - at_one.v_crit).abs() < 1e-8);
        let at_zero = solve_efficiency(&tables, 0.0).unwrap();
        assert!((at_zero.v_crit - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gauge_shift_leaves_threshold() {
        let s = standard(3);
        let base = solve_threshold(&s).unwrap();
        let shifted = PhaseSettings::new(
            s.a1.shifted(0.37),
            s.a2.clone(),
            s.b1.clone(),
            s.b2.shifted(-1.1),
        )
        .unwrap();
        let t0 = prediction_tables(&s).unwrap();
        let t1 = prediction_tables(&shifted).unwrap();
        for (a, b) in t0.iter().zip(&t1) {
            for (x, y) in a.base_cells().iter().zip(b.base_cells()) {
                assert!((x - y).abs() < 1e-10);
            }
        }
        let r = solve_threshold(&shifted).unwrap();
        assert!((r.v_crit - base.v_crit).abs() < 1e-6);
    }

    #[test]
    fn relabeling_alice_leaves_threshold() {
        let tables = prediction_tables(&standard(3)).unwrap();
        let base = solve_threshold_tables(&tables).unwrap();
        let perm = [1, 2, 0];
        let relabeled = tables.clone().map(|t| t.relabel_alice(&perm));
        let r = solve_threshold_tables(&relabeled).unwrap();
        assert!((r.v_crit - base.v_crit).abs() < 1e-8);
    }

    #[test]
    fn search_argument_validation() {
        let s = standard(2);
        assert_eq!(
            scan_critical_efficiency(&s, 0.0),
            Err(ModelError::InvalidStep(0.0))
        );
        assert_eq!(
            scan_critical_efficiency(&s, 1.0),
            Err(ModelError::InvalidStep(1.0))
        );
        assert_eq!(
            bisect_critical_efficiency(&s, 0.0),
            Err(ModelError::InvalidTolerance(0.0))
        );
    }

    #[test]
    fn coarse_searches_terminate() {
        let s = standard(2);
        let scan = scan_critical_efficiency(&s, 0.5).unwrap();
        assert_eq!(scan.eta_critical, 0.5);
        assert_eq!(scan.method, EfficiencyMethod::Scan);
        let bis = bisect_critical_efficiency(&s, 0.25).unwrap();
        assert!(bis.refinement_solves <= 2);
        assert!((bis.eta_critical - 0.828).abs() <= 0.25);
    }

    #[test]
    fn custom_settings_validate_lengths() {
        let v2 = PhaseVector::new(vec![0.0, 0.1]).unwrap();
        let v3 = PhaseVector::new(vec![0.0, 0.1, 0.2]).unwrap();
        assert!(PhaseSettings::new(v2.clone(), v2.clone(), v2, v3).is_err());
    }
}
