//! Scalar types the LP engine and the prediction tables are generic over.
//!
//! Floating-point scalars carry nonzero tolerances; exact scalars (rationals and
//! the quadratic fields `Q(√D)`) compare with zero tolerance.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Ordered field element usable by the simplex engine.
pub trait LpScalar:
    Clone
    + fmt::Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// Whether arithmetic is exact (no rounding).
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;

    fn is_finite(&self) -> bool {
        true
    }

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Primal feasibility tolerance.
    fn feasibility_tol() -> Self;
    /// Reduced-cost tolerance.
    fn optimality_tol() -> Self;
    /// Smallest acceptable pivot magnitude.
    fn pivot_tol() -> Self;

    /// `y ← y − a·x`, skipping the zeros of `x`.
    fn sub_scaled(y: &mut [Self], a: &Self, x: &[Self]) {
        for (yi, xi) in y.iter_mut().zip(x) {
            if !xi.is_zero() {
                *yi = yi.clone() - a.clone() * xi.clone();
            }
        }
    }
}

impl LpScalar for f64 {
    const EXACT: bool = false;

    fn sub_scaled(y: &mut [Self], a: &Self, x: &[Self]) {
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi -= a * xi;
        }
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn feasibility_tol() -> Self {
        1e-8
    }
    fn optimality_tol() -> Self {
        1e-7
    }
    fn pivot_tol() -> Self {
        1e-10
    }
}

impl LpScalar for f32 {
    const EXACT: bool = false;

    fn sub_scaled(y: &mut [Self], a: &Self, x: &[Self]) {
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi -= a * xi;
        }
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
    fn is_finite(&self) -> bool {
        f32::is_finite(*self)
    }
    fn abs(&self) -> Self {
        f32::abs(*self)
    }
    fn feasibility_tol() -> Self {
        1e-4
    }
    fn optimality_tol() -> Self {
        1e-4
    }
    fn pivot_tol() -> Self {
        1e-6
    }
}

impl LpScalar for BigRational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        ratio(num, den)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn feasibility_tol() -> Self {
        Self::zero()
    }
    fn optimality_tol() -> Self {
        Self::zero()
    }
    fn pivot_tol() -> Self {
        Self::zero()
    }
}

/// Element `a + b·√D` of the real quadratic field `Q(√D)`, with exact rational parts.
///
/// `D` must be a positive non-square integer; ordering relies on `√D` being irrational.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticSurd<const D: i64> {
    pub rational: BigRational,
    pub surd: BigRational,
}

/// `Q(√2)`, enough for angles that are multiples of π/4.
pub type Sqrt2Field = QuadraticSurd<2>;
/// `Q(√3)`, enough for angles that are multiples of π/6.
pub type Sqrt3Field = QuadraticSurd<3>;

impl<const D: i64> QuadraticSurd<D> {
    pub fn new(rational: BigRational, surd: BigRational) -> Self {
        debug_assert!(D > 1 && (D as f64).sqrt().fract() != 0.0);
        Self { rational, surd }
    }

    pub fn from_parts(a: (i64, i64), b: (i64, i64)) -> Self {
        Self::new(ratio(a.0, a.1), ratio(b.0, b.1))
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.rational.clone(), -self.surd.clone())
    }

    /// Field norm `a² − D·b²`, zero only for zero.
    pub fn norm(&self) -> BigRational {
        &self.rational * &self.rational
            - BigRational::from_integer(D.into()) * &self.surd * &self.surd
    }

    fn signum(&self) -> Ordering {
        let zero = BigRational::zero();
        let sa = self.rational.cmp(&zero);
        let sb = self.surd.cmp(&zero);
        match (sa, sb) {
            (s, Ordering::Equal) => s,
            (Ordering::Equal, s) => s,
            (s, t) if s == t => s,
            (s, t) => {
                // opposite signs: the larger of a² and D·b² wins
                let a2 = &self.rational * &self.rational;
                let b2 = BigRational::from_integer(D.into()) * &self.surd * &self.surd;
                if a2 > b2 {
                    s
                } else {
                    t
                }
            }
        }
    }
}

impl<const D: i64> fmt::Debug for QuadraticSurd<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<const D: i64> fmt::Display for QuadraticSurd<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.surd.is_zero() {
            write!(f, "{}", self.rational)
        } else if self.rational.is_zero() {
            write!(f, "({})√{}", self.surd, D)
        } else if self.surd.is_negative() {
            write!(f, "{} - {}√{}", self.rational, -self.surd.clone(), D)
        } else {
            write!(f, "{} + {}√{}", self.rational, self.surd, D)
        }
    }
}

impl<const D: i64> PartialOrd for QuadraticSurd<D> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<const D: i64> Ord for QuadraticSurd<D> {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum()
    }
}

impl<const D: i64> Zero for QuadraticSurd<D> {
    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }
}

impl<const D: i64> One for QuadraticSurd<D> {
    fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero())
    }
}

impl<const D: i64> Add for QuadraticSurd<D> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.rational + rhs.rational, self.surd + rhs.surd)
    }
}

impl<const D: i64> Sub for QuadraticSurd<D> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.rational - rhs.rational, self.surd - rhs.surd)
    }
}

impl<const D: i64> Mul for QuadraticSurd<D> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let d = BigRational::from_integer(D.into());
        Self::new(
            &self.rational * &rhs.rational + d * &self.surd * &rhs.surd,
            &self.rational * &rhs.surd + &self.surd * &rhs.rational,
        )
    }
}

impl<const D: i64> Div for QuadraticSurd<D> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let norm = rhs.norm();
        assert!(!norm.is_zero(), "division by zero in Q(√{D})");
        let p = self * rhs.conjugate();
        Self::new(p.rational / &norm, p.surd / norm)
    }
}

impl<const D: i64> Neg for QuadraticSurd<D> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.rational, -self.surd)
    }
}

impl<const D: i64> From<BigRational> for QuadraticSurd<D> {
    fn from(r: BigRational) -> Self {
        Self::new(r, BigRational::zero())
    }
}

impl<const D: i64> LpScalar for QuadraticSurd<D> {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        ratio(num, den).into()
    }
    fn to_f64(&self) -> f64 {
        LpScalar::to_f64(&self.rational) + LpScalar::to_f64(&self.surd) * (D as f64).sqrt()
    }
    fn feasibility_tol() -> Self {
        Self::zero()
    }
    fn optimality_tol() -> Self {
        Self::zero()
    }
    fn pivot_tol() -> Self {
        Self::zero()
    }
}

pub(crate) fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact cosine of rational multiples of π, for the angles a scalar field can hold.
pub trait ExactTrig: LpScalar {
    /// `cos(turns·π)`, or `None` when the value is outside the field.
    fn cos_pi(multiple: &BigRational) -> Option<Self>;
}

/// Reduce `multiple` modulo 2 and return `k` with `multiple ≡ k/steps (mod 2)`, if integral.
fn reduced_steps(multiple: &BigRational, steps: i64) -> Option<i64> {
    let scaled = multiple * BigRational::from_integer(steps.into());
    if !scaled.is_integer() {
        return None;
    }
    let period = BigInt::from(2 * steps);
    let k = num_integer::Integer::mod_floor(&scaled.to_integer(), &period);
    k.to_i64()
}

impl ExactTrig for BigRational {
    fn cos_pi(multiple: &BigRational) -> Option<Self> {
        // multiples of π/3 and π/2 have rational cosines
        if let Some(k) = reduced_steps(multiple, 3) {
            const TABLE: [(i64, i64); 6] = [(1, 1), (1, 2), (-1, 2), (-1, 1), (-1, 2), (1, 2)];
            let (p, q) = TABLE[k as usize];
            return Some(ratio(p, q));
        }
        reduced_steps(multiple, 2).map(|k| {
            const TABLE: [i64; 4] = [1, 0, -1, 0];
            BigRational::from_integer(TABLE[k as usize].into())
        })
    }
}

impl ExactTrig for Sqrt2Field {
    fn cos_pi(multiple: &BigRational) -> Option<Self> {
        let k = reduced_steps(multiple, 4)?;
        // cos(kπ/4) = a + b√2
        const TABLE: [((i64, i64), (i64, i64)); 8] = [
            ((1, 1), (0, 1)),
            ((0, 1), (1, 2)),
            ((0, 1), (0, 1)),
            ((0, 1), (-1, 2)),
            ((-1, 1), (0, 1)),
            ((0, 1), (-1, 2)),
            ((0, 1), (0, 1)),
            ((0, 1), (1, 2)),
        ];
        let (a, b) = TABLE[k as usize];
        Some(Self::from_parts(a, b))
    }
}

impl ExactTrig for Sqrt3Field {
    fn cos_pi(multiple: &BigRational) -> Option<Self> {
        let k = reduced_steps(multiple, 6)?;
        // cos(kπ/6) = a + b√3
        const TABLE: [((i64, i64), (i64, i64)); 12] = [
            ((1, 1), (0, 1)),
            ((0, 1), (1, 2)),
            ((1, 2), (0, 1)),
            ((0, 1), (0, 1)),
            ((-1, 2), (0, 1)),
            ((0, 1), (-1, 2)),
            ((-1, 1), (0, 1)),
            ((0, 1), (-1, 2)),
            ((-1, 2), (0, 1)),
            ((0, 1), (0, 1)),
            ((1, 2), (0, 1)),
            ((0, 1), (1, 2)),
        ];
        let (a, b) = TABLE[k as usize];
        Some(Self::from_parts(a, b))
    }
}
