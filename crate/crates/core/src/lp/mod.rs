//! Equality-form linear programs and the engine that solves them.
//!
//! A [`LinearProgram`] maximizes `cᵀx` subject to `Ax = b` and `l ≤ x ≤ u`, with
//! finite lower bounds (default 0) and optional upper bounds. The same generic
//! revised simplex runs over floating-point and exact scalars.

mod exact;
mod mps;
mod simplex;

pub use exact::{rational_verify, ExactOutcome};
pub use mps::{export_mps, mps_name};
pub use simplex::{
    simplex_solve, simplex_solve_with, Basis, LpSolution, LpStatus, Pricing, SimplexOptions,
    SolveStats,
};

use thiserror::Error;

use crate::scalar::LpScalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("variable index {index} out of range for {num_vars} variables")]
    IndexOutOfRange { index: usize, num_vars: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("bounds of variable {0} are inconsistent")]
    InvalidBounds(usize),
    #[error("iteration limit of {limit} reached in phase {phase} after {iterations} iterations")]
    IterationLimit {
        limit: usize,
        iterations: usize,
        phase: u8,
    },
    #[error("basis matrix is numerically singular")]
    SingularBasis,
    #[error("exact verification requires an exact scalar type")]
    NotExact,
}

/// One equality row `Σ coeffs·x = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<T> {
    pub coeffs: Vec<(usize, T)>,
    pub rhs: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<T> {
    num_vars: usize,
    objective: Vec<T>,
    constraints: Vec<Constraint<T>>,
    lower: Vec<T>,
    upper: Vec<Option<T>>,
}

impl<T: LpScalar> LinearProgram<T> {
    /// A program over `num_vars` nonnegative, unbounded-above variables with zero objective.
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: vec![T::zero(); num_vars],
            constraints: Vec::new(),
            lower: vec![T::zero(); num_vars],
            upper: vec![None; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn objective(&self) -> &[T] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint<T>] {
        &self.constraints
    }

    pub fn lower_bounds(&self) -> &[T] {
        &self.lower
    }

    pub fn upper_bounds(&self) -> &[Option<T>] {
        &self.upper
    }

    fn check_index(&self, index: usize) -> Result<(), LpError> {
        if index >= self.num_vars {
            return Err(LpError::IndexOutOfRange {
                index,
                num_vars: self.num_vars,
            });
        }
        Ok(())
    }

    pub fn set_objective(&mut self, var: usize, coeff: T) -> Result<(), LpError> {
        self.check_index(var)?;
        if !coeff.is_finite() {
            return Err(LpError::NonFinite("objective"));
        }
        self.objective[var] = coeff;
        Ok(())
    }

    /// Sets `lower ≤ x_var ≤ upper`; `None` means no upper bound.
    pub fn set_bounds(&mut self, var: usize, lower: T, upper: Option<T>) -> Result<(), LpError> {
        self.check_index(var)?;
        if !lower.is_finite() || upper.as_ref().is_some_and(|u| !u.is_finite()) {
            return Err(LpError::NonFinite("bounds"));
        }
        if upper.as_ref().is_some_and(|u| *u < lower) {
            return Err(LpError::InvalidBounds(var));
        }
        self.lower[var] = lower;
        self.upper[var] = upper;
        Ok(())
    }

    /// Appends an equality row. Repeated indices are summed; zero coefficients dropped.
    pub fn add_constraint(&mut self, coeffs: Vec<(usize, T)>, rhs: T) -> Result<usize, LpError> {
        if !rhs.is_finite() {
            return Err(LpError::NonFinite("right-hand side"));
        }
        let mut merged: Vec<(usize, T)> = Vec::with_capacity(coeffs.len());
        let mut sorted = coeffs;
        sorted.sort_by_key(|(i, _)| *i);
        for (index, value) in sorted {
            self.check_index(index)?;
            if !value.is_finite() {
                return Err(LpError::NonFinite("constraint coefficient"));
            }
            match merged.last_mut() {
                Some((last, acc)) if *last == index => *acc = acc.clone() + value,
                _ => merged.push((index, value)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        self.constraints.push(Constraint {
            coeffs: merged,
            rhs,
        });
        Ok(self.constraints.len() - 1)
    }

    /// Converts every coefficient with `f`.
    pub fn map_scalar<U: LpScalar>(&self, f: impl Fn(&T) -> U) -> LinearProgram<U> {
        LinearProgram {
            num_vars: self.num_vars,
            objective: self.objective.iter().map(&f).collect(),
            constraints: self
                .constraints
                .iter()
                .map(|c| Constraint {
                    coeffs: c.coeffs.iter().map(|(i, v)| (*i, f(v))).collect(),
                    rhs: f(&c.rhs),
                })
                .collect(),
            lower: self.lower.iter().map(&f).collect(),
            upper: self.upper.iter().map(|u| u.as_ref().map(&f)).collect(),
        }
    }

    /// Returns the program with rows reordered by `order` (a permutation of row indices).
    pub fn permute_constraints(&self, order: &[usize]) -> Result<Self, LpError> {
        let m = self.constraints.len();
        let mut seen = vec![false; m];
        for &r in order {
            if r >= m || std::mem::replace(&mut seen[r], true) {
                return Err(LpError::DimensionMismatch(
                    "row order is not a permutation".into(),
                ));
            }
        }
        if order.len() != m {
            return Err(LpError::DimensionMismatch(
                "row order is not a permutation".into(),
            ));
        }
        let mut out = self.clone();
        out.constraints = order.iter().map(|&r| self.constraints[r].clone()).collect();
        Ok(out)
    }

    pub fn objective_value(&self, x: &[T]) -> T {
        self.objective
            .iter()
            .zip(x)
            .fold(T::zero(), |acc, (c, v)| acc + c.clone() * v.clone())
    }

    /// Row activities `Ax`.
    pub fn activities(&self, x: &[T]) -> Vec<T> {
        self.constraints
            .iter()
            .map(|c| {
                c.coeffs
                    .iter()
                    .fold(T::zero(), |acc, (i, a)| acc + a.clone() * x[*i].clone())
            })
            .collect()
    }

    /// Largest absolute row violation `|Ax − b|`.
    pub fn max_residual(&self, x: &[T]) -> f64 {
        self.activities(x)
            .iter()
            .zip(&self.constraints)
            .map(|(ax, c)| (ax.clone() - c.rhs.clone()).to_f64().abs())
            .fold(0.0, f64::max)
    }

    /// Largest bound violation of `x`.
    pub fn max_bound_violation(&self, x: &[T]) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..self.num_vars {
            worst = worst.max((self.lower[j].clone() - x[j].clone()).to_f64());
            if let Some(u) = &self.upper[j] {
                worst = worst.max((x[j].clone() - u.clone()).to_f64());
            }
        }
        worst
    }

    /// Column-major copy of the constraint matrix.
    pub(crate) fn columns(&self) -> Vec<Vec<(usize, T)>> {
        let mut cols: Vec<Vec<(usize, T)>> = vec![Vec::new(); self.num_vars];
        for (r, c) in self.constraints.iter().enumerate() {
            for (j, a) in &c.coeffs {
                cols[*j].push((r, a.clone()));
            }
        }
        cols
    }
}
