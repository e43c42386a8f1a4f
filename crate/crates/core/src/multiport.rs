//! Bell multiports, phase settings, and the quantum joint-outcome predictions.
//!
//! Outcomes and ports are 0-based throughout. The 1-based phase term
//! `m(k+l−2)·2π/N` becomes `m(k+l)·2π/N` with 0-based `k`, `l`; the port index
//! `m` only enters through differences, so its offset cancels.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, FloatConst};
use thiserror::Error;

use crate::scalar::{ratio, ExactTrig, LpScalar};

/// Dimension ceiling applied unless configured otherwise.
pub const DEFAULT_MAX_DIMENSION: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MultiportError {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("dimension {n} exceeds the ceiling {ceiling}")]
    DimensionTooLarge { n: usize, ceiling: usize },
    #[error("phase vector has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("outcome {index} out of range for dimension {n}")]
    OutcomeOutOfRange { index: usize, n: usize },
    #[error("phase value is not finite")]
    NonFinitePhase,
    #[error("detector efficiency {0} outside [0, 1]")]
    EfficiencyOutOfRange(f64),
    #[error("phase {0}·π has no exact cosine in the requested field")]
    NotExactlyRepresentable(String),
}

/// Number of ports per observer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dimension(usize);

impl Dimension {
    pub fn new(n: usize) -> Result<Self, MultiportError> {
        Self::with_ceiling(n, DEFAULT_MAX_DIMENSION)
    }

    pub fn with_ceiling(n: usize, ceiling: usize) -> Result<Self, MultiportError> {
        if n < 2 {
            return Err(MultiportError::DimensionTooSmall(n));
        }
        if n > ceiling {
            return Err(MultiportError::DimensionTooLarge { n, ceiling });
        }
        Ok(Self(n))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

/// Unitary of an `n`-port Bell multiport, `U[j][i] = γ^(j·i)/√n` with `γ = e^(2πi/n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiportMatrix<T> {
    n: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Float + FloatConst> MultiportMatrix<T> {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row * self.n + col]
    }

    /// Largest entrywise deviation of `U†U` from the identity.
    pub fn unitarity_defect(&self) -> T {
        let n = self.n;
        let mut worst = T::zero();
        for a in 0..n {
            for b in 0..n {
                let dot = (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, k| {
                    acc + self.entry(k, a).conj() * self.entry(k, b)
                });
                let target = if a == b { T::one() } else { T::zero() };
                worst = worst.max((dot - Complex::new(target, T::zero())).norm());
            }
        }
        worst
    }
}

pub fn bell_multiport<T: Float + FloatConst>(n: Dimension) -> MultiportMatrix<T> {
    let n = n.get();
    let nt = T::from(n).expect("dimension fits the float type");
    let scale = nt.sqrt().recip();
    let mut entries = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            // reduce the exponent mod n before scaling to keep the angle small
            let power = T::from((j * i) % n).expect("small integer");
            let angle = T::TAU() * power / nt;
            entries.push(Complex::from_polar(scale, angle));
        }
    }
    MultiportMatrix { n, entries }
}

/// Phase shifts in front of one observer's multiport, one per input port.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector<P>(Vec<P>);

impl<P> PhaseVector<P> {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[P] {
        &self.0
    }
}

impl<T: Float> PhaseVector<T> {
    /// Radians, stored as given.
    pub fn new(phases: Vec<T>) -> Result<Self, MultiportError> {
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(MultiportError::NonFinitePhase);
        }
        Ok(Self(phases))
    }

    /// Adds `offset` to every component.
    pub fn shifted(&self, offset: T) -> Self {
        Self(self.0.iter().map(|p| *p + offset).collect())
    }
}

impl PhaseVector<BigRational> {
    /// Exact phases given as multiples of π.
    pub fn from_pi_multiples(multiples: Vec<BigRational>) -> Self {
        Self(multiples)
    }

    pub fn to_radians(&self) -> PhaseVector<f64> {
        PhaseVector(
            self.0
                .iter()
                .map(|r| LpScalar::to_f64(r) * std::f64::consts::PI)
                .collect(),
        )
    }
}

/// Which of an observer's two observables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Setting {
    First,
    Second,
}

impl Setting {
    pub const BOTH: [Setting; 2] = [Setting::First, Setting::Second];

    pub fn index(self) -> usize {
        match self {
            Setting::First => 0,
            Setting::Second => 1,
        }
    }
}

/// The four observable pairs in row-major order: (A1,B1), (A1,B2), (A2,B1), (A2,B2).
pub const SETTING_PAIRS: [(Setting, Setting); 4] = [
    (Setting::First, Setting::First),
    (Setting::First, Setting::Second),
    (Setting::Second, Setting::First),
    (Setting::Second, Setting::Second),
];

/// Alice's two phase vectors and Bob's two.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSettings<P> {
    pub a1: PhaseVector<P>,
    pub a2: PhaseVector<P>,
    pub b1: PhaseVector<P>,
    pub b2: PhaseVector<P>,
}

impl<P> PhaseSettings<P> {
    pub fn new(
        a1: PhaseVector<P>,
        a2: PhaseVector<P>,
        b1: PhaseVector<P>,
        b2: PhaseVector<P>,
    ) -> Result<Self, MultiportError> {
        let expected = a1.len();
        for v in [&a2, &b1, &b2] {
            if v.len() != expected {
                return Err(MultiportError::LengthMismatch {
                    expected,
                    found: v.len(),
                });
            }
        }
        if expected < 2 {
            return Err(MultiportError::DimensionTooSmall(expected));
        }
        Ok(Self { a1, a2, b1, b2 })
    }

    pub fn n(&self) -> usize {
        self.a1.len()
    }

    pub fn alice(&self, s: Setting) -> &PhaseVector<P> {
        match s {
            Setting::First => &self.a1,
            Setting::Second => &self.a2,
        }
    }

    pub fn bob(&self, s: Setting) -> &PhaseVector<P> {
        match s {
            Setting::First => &self.b1,
            Setting::Second => &self.b2,
        }
    }
}

impl PhaseSettings<BigRational> {
    pub fn to_radians(&self) -> PhaseSettings<f64> {
        PhaseSettings {
            a1: self.a1.to_radians(),
            a2: self.a2.to_radians(),
            b1: self.b1.to_radians(),
            b2: self.b2.to_radians(),
        }
    }
}

/// The fixed settings used for every dimension, as exact multiples of π:
/// `a1 = 0`, `a2[m] = m/n`, `b1[m] = m/(2n)`, `b2 = −b1`.
pub fn standard_settings_exact(n: Dimension) -> PhaseSettings<BigRational> {
    let n = n.get() as i64;
    let a1 = (0..n).map(|_| ratio(0, 1)).collect();
    let a2 = (0..n).map(|m| ratio(m, n)).collect();
    let b1: Vec<BigRational> = (0..n).map(|m| ratio(m, 2 * n)).collect();
    let b2 = b1.iter().map(|r| -r.clone()).collect();
    PhaseSettings {
        a1: PhaseVector(a1),
        a2: PhaseVector(a2),
        b1: PhaseVector(b1),
        b2: PhaseVector(b2),
    }
}

/// [`standard_settings_exact`] in radians.
pub fn standard_settings<T: Float + FloatConst>(n: Dimension) -> PhaseSettings<T> {
    let nn = n.get();
    let nt = T::from(nn).expect("dimension fits the float type");
    let two = T::one() + T::one();
    let step_a = T::PI() / nt;
    let step_b = T::PI() / (two * nt);
    let idx = |m: usize| T::from(m).expect("small integer");
    PhaseSettings {
        a1: PhaseVector(vec![T::zero(); nn]),
        a2: PhaseVector((0..nn).map(|m| idx(m) * step_a).collect()),
        b1: PhaseVector((0..nn).map(|m| idx(m) * step_b).collect()),
        b2: PhaseVector((0..nn).map(|m| -(idx(m) * step_b)).collect()),
    }
}

fn check_pair<P>(
    n: usize,
    a: &PhaseVector<P>,
    b: &PhaseVector<P>,
    k: usize,
    l: usize,
) -> Result<(), MultiportError> {
    for v in [a, b] {
        if v.len() != n {
            return Err(MultiportError::LengthMismatch {
                expected: n,
                found: v.len(),
            });
        }
    }
    for index in [k, l] {
        if index >= n {
            return Err(MultiportError::OutcomeOutOfRange { index, n });
        }
    }
    Ok(())
}

/// Pure-state probability of outcome `k` at Alice and `l` at Bob, from amplitudes:
/// `(1/n)·|Σ_m e^{i(φA_m + φB_m)} U[m][k] U[m][l]|²`.
pub fn joint_probability<T: Float + FloatConst>(
    unitary: &MultiportMatrix<T>,
    phase_a: &PhaseVector<T>,
    phase_b: &PhaseVector<T>,
    k: usize,
    l: usize,
) -> Result<T, MultiportError> {
    let n = unitary.dim();
    check_pair(n, phase_a, phase_b, k, l)?;
    let amplitude = (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, m| {
        let phase = Complex::from_polar(T::one(), phase_a.0[m] + phase_b.0[m]);
        acc + phase * unitary.entry(m, k) * unitary.entry(m, l)
    });
    Ok(amplitude.norm_sqr() / T::from(n).expect("dimension fits the float type"))
}

/// Same probability through the interference-sum form
/// `(1/n³)(n + 2 Σ_{m>m'} cos(Φ_m − Φ_m'))`, `Φ_m = φA_m + φB_m + m(k+l)·2π/n`.
pub fn joint_probability_cosine<T: Float + FloatConst>(
    phase_a: &PhaseVector<T>,
    phase_b: &PhaseVector<T>,
    k: usize,
    l: usize,
) -> Result<T, MultiportError> {
    let n = phase_a.len();
    check_pair(n, phase_a, phase_b, k, l)?;
    let nt = T::from(n).expect("dimension fits the float type");
    let big_phi: Vec<T> = (0..n)
        .map(|m| {
            let turns = T::from((m * (k + l)) % n).expect("small integer");
            phase_a.0[m] + phase_b.0[m] + turns * T::TAU() / nt
        })
        .collect();
    let mut interference = T::zero();
    for m in 1..n {
        for mp in 0..m {
            interference = interference + (big_phi[m] - big_phi[mp]).cos();
        }
    }
    Ok((nt + (interference + interference)) / (nt * nt * nt))
}

/// Ideal joint probabilities `Q(k,l)` for one observable pair at visibility 1.
///
/// At visibility `v` the predicted cell is `v·Q(k,l) + (1−v)/n²`.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionTable<T> {
    n: usize,
    base: Vec<T>,
}

impl<T: LpScalar> PredictionTable<T> {
    /// Wraps an `n × n` row-major table.
    pub fn from_base(n: usize, base: Vec<T>) -> Result<Self, MultiportError> {
        if base.len() != n * n {
            return Err(MultiportError::LengthMismatch {
                expected: n * n,
                found: base.len(),
            });
        }
        Ok(Self { n, base })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base(&self, k: usize, l: usize) -> &T {
        &self.base[k * self.n + l]
    }

    pub fn base_cells(&self) -> &[T] {
        &self.base
    }

    /// Uniform noise cell `1/n²`.
    pub fn noise_cell(&self) -> T {
        let n = self.n as i64;
        T::from_ratio(1, n * n)
    }

    /// Realized probability at visibility `v`.
    pub fn at_visibility(&self, k: usize, l: usize, v: &T) -> T {
        v.clone() * self.base(k, l).clone() + (T::one() - v.clone()) * self.noise_cell()
    }

    /// Table with Alice's outcome labels permuted: row `k` moves to `perm[k]`.
    pub fn relabel_alice(&self, perm: &[usize]) -> Self {
        let n = self.n;
        let mut base = vec![T::zero(); n * n];
        for k in 0..n {
            for l in 0..n {
                base[perm[k] * n + l] = self.base(k, l).clone();
            }
        }
        Self { n, base }
    }

    pub fn row_sums(&self) -> Vec<T> {
        (0..self.n)
            .map(|k| (0..self.n).fold(T::zero(), |acc, l| acc + self.base(k, l).clone()))
            .collect()
    }

    pub fn col_sums(&self) -> Vec<T> {
        (0..self.n)
            .map(|l| (0..self.n).fold(T::zero(), |acc, k| acc + self.base(k, l).clone()))
            .collect()
    }
}

pub fn prediction_table<T: Float + FloatConst + LpScalar>(
    settings: &PhaseSettings<T>,
    alice: Setting,
    bob: Setting,
) -> Result<PredictionTable<T>, MultiportError> {
    let n = settings.n();
    let u = bell_multiport::<T>(Dimension::with_ceiling(n, usize::MAX)?);
    let (a, b) = (settings.alice(alice), settings.bob(bob));
    let mut base = Vec::with_capacity(n * n);
    for k in 0..n {
        for l in 0..n {
            base.push(joint_probability(&u, a, b, k, l)?);
        }
    }
    Ok(PredictionTable { n, base })
}

/// Tables for the four pairs, in [`SETTING_PAIRS`] order.
pub fn prediction_tables<T: Float + FloatConst + LpScalar>(
    settings: &PhaseSettings<T>,
) -> Result<[PredictionTable<T>; 4], MultiportError> {
    let t = |(a, b): (Setting, Setting)| prediction_table(settings, a, b);
    Ok([
        t(SETTING_PAIRS[0])?,
        t(SETTING_PAIRS[1])?,
        t(SETTING_PAIRS[2])?,
        t(SETTING_PAIRS[3])?,
    ])
}

/// Exact table from phases given as multiples of π, through the cosine form.
pub fn exact_prediction_table<T: ExactTrig>(
    settings: &PhaseSettings<BigRational>,
    alice: Setting,
    bob: Setting,
) -> Result<PredictionTable<T>, MultiportError> {
    let n = settings.n();
    let (a, b) = (settings.alice(alice), settings.bob(bob));
    let ni = n as i64;
    let mut base = Vec::with_capacity(n * n);
    for k in 0..n {
        for l in 0..n {
            // Φ_m in units of π
            let big_phi: Vec<BigRational> = (0..n)
                .map(|m| &a.0[m] + &b.0[m] + ratio(2 * ((m * (k + l)) % n) as i64, ni))
                .collect();
            let mut interference = T::zero();
            for m in 1..n {
                for mp in 0..m {
                    let diff = &big_phi[m] - &big_phi[mp];
                    let c = T::cos_pi(&diff)
                        .ok_or_else(|| MultiportError::NotExactlyRepresentable(diff.to_string()))?;
                    interference = interference + c;
                }
            }
            let value = (T::from_ratio(ni, 1) + T::from_ratio(2, 1) * interference)
                / T::from_ratio(ni * ni * ni, 1);
            base.push(value);
        }
    }
    Ok(PredictionTable { n, base })
}

pub fn exact_prediction_tables<T: ExactTrig>(
    settings: &PhaseSettings<BigRational>,
) -> Result<[PredictionTable<T>; 4], MultiportError> {
    let t = |(a, b): (Setting, Setting)| exact_prediction_table::<T>(settings, a, b);
    Ok([
        t(SETTING_PAIRS[0])?,
        t(SETTING_PAIRS[1])?,
        t(SETTING_PAIRS[2])?,
        t(SETTING_PAIRS[3])?,
    ])
}

/// Predictions with detectors that fire with probability `eta`.
///
/// Outcome 0 is "no click"; fired outcomes `1..=n` map to table outcomes `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyPredictionTable<T> {
    fired: PredictionTable<T>,
    eta: T,
}

impl<T: LpScalar> EfficiencyPredictionTable<T> {
    pub fn n(&self) -> usize {
        self.fired.n
    }

    pub fn eta(&self) -> &T {
        &self.eta
    }

    pub fn fired(&self) -> &PredictionTable<T> {
        &self.fired
    }

    /// Probability of extended outcomes `(k, l) ∈ {0..=n}²` at visibility `v`.
    pub fn cell(&self, k: usize, l: usize, v: &T) -> T {
        let eta = self.eta.clone();
        let miss = T::one() - eta.clone();
        let n = T::from_ratio(self.fired.n as i64, 1);
        match (k, l) {
            (0, 0) => miss.clone() * miss,
            (0, _) | (_, 0) => eta * miss / n,
            _ => eta.clone() * eta * self.fired.at_visibility(k - 1, l - 1, v),
        }
    }
}

pub fn efficiency_table<T: LpScalar>(
    table: &PredictionTable<T>,
    eta: T,
) -> Result<EfficiencyPredictionTable<T>, MultiportError> {
    if !(eta >= T::zero() && eta <= T::one()) {
        return Err(MultiportError::EfficiencyOutOfRange(eta.to_f64()));
    }
    Ok(EfficiencyPredictionTable {
        fired: table.clone(),
        eta,
    })
}
