//! Exact optimality certificates from a floating-point basis.

use crate::scalar::LpScalar;

use super::simplex::{simplex_solve, Basis, LpStatus};
use super::{LinearProgram, LpError};

#[derive(Debug, Clone)]
pub struct ExactOutcome<T> {
    pub status: LpStatus,
    /// Exact optimum when `status` is optimal.
    pub objective: Option<T>,
    pub primal: Vec<T>,
    pub dual: Vec<T>,
    /// True when the hinted basis was already optimal; false after a full exact solve.
    pub verified_from_hint: bool,
}

/// Verifies `hint` as an optimal basis of `lp` in exact arithmetic, or re-solves exactly.
///
/// The hint's basic columns must reproduce the right-hand side with nonbasic
/// variables at the indicated bounds, stay within bounds, and price out with no
/// improving reduced cost. Anything short of that (singular or rank-deficient
/// basis, infeasible values, wrong-signed reduced costs) falls back to a full
/// exact simplex solve.
pub fn rational_verify<T: LpScalar>(
    lp: &LinearProgram<T>,
    hint: &Basis,
) -> Result<ExactOutcome<T>, LpError> {
    if !T::EXACT {
        return Err(LpError::NotExact);
    }
    if let Some(outcome) = check_hint(lp, hint)? {
        return Ok(outcome);
    }
    let sol = simplex_solve(lp)?;
    Ok(ExactOutcome {
        status: sol.status,
        objective: sol.is_optimal().then_some(sol.objective_value),
        primal: sol.primal,
        dual: sol.dual,
        verified_from_hint: false,
    })
}

fn check_hint<T: LpScalar>(
    lp: &LinearProgram<T>,
    hint: &Basis,
) -> Result<Option<ExactOutcome<T>>, LpError> {
    let n = lp.num_vars();
    let m = lp.num_constraints();
    for &j in hint.basic.iter().chain(&hint.at_upper) {
        if j >= n {
            return Err(LpError::IndexOutOfRange {
                index: j,
                num_vars: n,
            });
        }
    }
    let mut is_basic = vec![false; n];
    for &j in &hint.basic {
        is_basic[j] = true;
    }

    let mut x: Vec<T> = lp.lower_bounds().to_vec();
    for &j in &hint.at_upper {
        match &lp.upper_bounds()[j] {
            Some(u) if !is_basic[j] => x[j] = u.clone(),
            _ => return Ok(None),
        }
    }

    let cols = lp.columns();
    let basic = &hint.basic;

    // A_B x_B = b − A_N x_N
    let mut rhs: Vec<T> = lp.constraints().iter().map(|c| c.rhs.clone()).collect();
    for j in (0..n).filter(|&j| !is_basic[j]) {
        if x[j].is_zero() {
            continue;
        }
        for (i, a) in &cols[j] {
            rhs[*i] = rhs[*i].clone() - a.clone() * x[j].clone();
        }
    }
    let mut a_b = vec![vec![T::zero(); basic.len()]; m];
    for (pos, &j) in basic.iter().enumerate() {
        for (i, a) in &cols[j] {
            a_b[*i][pos] = a.clone();
        }
    }
    let Some(x_b) = solve_unique(a_b.clone(), rhs) else {
        return Ok(None);
    };
    for (&j, v) in basic.iter().zip(x_b) {
        x[j] = v;
    }
    let lower = lp.lower_bounds();
    let upper = lp.upper_bounds();
    if (0..n).any(|j| x[j] < lower[j] || upper[j].as_ref().is_some_and(|u| x[j] > *u)) {
        return Ok(None);
    }

    // A_Bᵀ y = c_B, any solution; free components set to zero
    let transposed: Vec<Vec<T>> = (0..basic.len())
        .map(|pos| (0..m).map(|i| a_b[i][pos].clone()).collect())
        .collect();
    let c_b: Vec<T> = basic.iter().map(|&j| lp.objective()[j].clone()).collect();
    let Some(y) = solve_any(transposed, c_b) else {
        return Ok(None);
    };

    let at_upper: Vec<bool> = {
        let mut v = vec![false; n];
        for &j in &hint.at_upper {
            v[j] = true;
        }
        v
    };
    for j in (0..n).filter(|&j| !is_basic[j]) {
        let d = cols[j]
            .iter()
            .fold(lp.objective()[j].clone(), |acc, (i, a)| {
                acc - y[*i].clone() * a.clone()
            });
        let fixed = upper[j].as_ref().is_some_and(|u| *u == lower[j]);
        let improving = if at_upper[j] {
            d < T::zero()
        } else {
            d > T::zero()
        };
        if improving && !fixed {
            return Ok(None);
        }
    }

    Ok(Some(ExactOutcome {
        status: LpStatus::Optimal,
        objective: Some(lp.objective_value(&x)),
        primal: x,
        dual: y,
        verified_from_hint: true,
    }))
}

/// Row-reduces `[a | b]`; returns the pivot columns or `None` if inconsistent.
fn reduce<T: LpScalar>(a: &mut [Vec<T>], b: &mut [T]) -> Option<Vec<usize>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        b.swap(r, p);
        let pv = a[r][c].clone();
        for v in a[r].iter_mut() {
            *v = v.clone() / pv.clone();
        }
        b[r] = b[r].clone() / pv;
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for k in 0..cols {
                let sub = f.clone() * a[r][k].clone();
                a[i][k] = a[i][k].clone() - sub;
            }
            b[i] = b[i].clone() - f * b[r].clone();
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if b[r..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    Some(pivots)
}

fn solve_any<T: LpScalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let cols = a.first().map_or(0, Vec::len);
    let pivots = reduce(&mut a, &mut b)?;
    let mut x = vec![T::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = b[r].clone();
    }
    Some(x)
}

fn solve_unique<T: LpScalar>(a: Vec<Vec<T>>, b: Vec<T>) -> Option<Vec<T>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut a = a;
    let mut b = b;
    let pivots = reduce(&mut a, &mut b)?;
    if pivots.len() != cols {
        return None;
    }
    let mut x = vec![T::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = b[r].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::simplex_solve;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn sample() -> LinearProgram<BigRational> {
        // maximize 3x + 2y: x + y + s = 4, x + 3y + t = 6
        let mut lp = LinearProgram::new(4);
        lp.set_objective(0, q(3, 1)).unwrap();
        lp.set_objective(1, q(2, 1)).unwrap();
        lp.add_constraint(vec![(0, q(1, 1)), (1, q(1, 1)), (2, q(1, 1))], q(4, 1))
            .unwrap();
        lp.add_constraint(vec![(0, q(1, 1)), (1, q(3, 1)), (3, q(1, 1))], q(6, 1))
            .unwrap();
        lp
    }

    #[test]
    fn float_hint_verifies_exactly() {
        let exact = sample();
        let float = exact.map_scalar(|v| LpScalar::to_f64(v));
        let sol = simplex_solve(&float).unwrap();
        let outcome = rational_verify(&exact, &sol.basis).unwrap();
        assert!(outcome.verified_from_hint);
        assert_eq!(outcome.objective, Some(q(12, 1)));
    }

    #[test]
    fn bad_hint_falls_back() {
        let exact = sample();
        let hint = Basis {
            basic: vec![2, 3],
            at_upper: vec![],
        };
        let outcome = rational_verify(&exact, &hint).unwrap();
        assert!(!outcome.verified_from_hint);
        assert_eq!(outcome.objective, Some(q(12, 1)));
        // singular hint
        let hint = Basis {
            basic: vec![0],
            at_upper: vec![],
        };
        assert_eq!(
            rational_verify(&exact, &hint).unwrap().objective,
            Some(q(12, 1))
        );
    }

    #[test]
    fn infeasible_exact_system() {
        let mut lp = LinearProgram::<BigRational>::new(1);
        lp.add_constraint(vec![(0, q(1, 1))], q(1, 1)).unwrap();
        lp.add_constraint(vec![(0, q(1, 1))], q(2, 1)).unwrap();
        let outcome = rational_verify(&lp, &Basis::default()).unwrap();
        assert_eq!(outcome.status, LpStatus::Infeasible);
        assert!(outcome.objective.is_none());
    }

    #[test]
    fn duplicate_rows_do_not_change_the_optimum() {
        let base = sample();
        let mut dup = base.clone();
        for c in base.constraints() {
            dup.add_constraint(c.coeffs.clone(), c.rhs.clone()).unwrap();
        }
        let float = dup.map_scalar(|v| LpScalar::to_f64(v));
        let hint = simplex_solve(&float).unwrap().basis;
        let a = rational_verify(&base, &hint).unwrap();
        let b = rational_verify(&dup, &hint).unwrap();
        assert!(b.verified_from_hint);
        assert_eq!(a.objective, b.objective);
    }

    #[test]
    fn float_scalars_are_rejected() {
        let lp = LinearProgram::<f64>::new(1);
        assert_eq!(
            rational_verify(&lp, &Basis::default()).unwrap_err(),
            LpError::NotExact
        );
    }
}
