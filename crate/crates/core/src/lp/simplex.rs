//! Dense revised simplex with bounded variables.
//!
//! Phase 1 starts from an artificial basis; artificials that cannot be pivoted
//! out afterwards mark redundant rows and are pinned to zero. Pricing is Devex
//! (Dantzig for exact scalars) until a streak of degenerate pivots switches to
//! Bland's rule, which stays on until the objective moves again.

use crate::scalar::LpScalar;

use super::{LinearProgram, LpError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pricing {
    /// Largest reduced cost.
    Dantzig,
    /// Reduced cost scaled by reference-framework weights.
    Devex,
}

#[derive(Debug, Clone)]
pub struct SimplexOptions<T> {
    /// Exact scalars always price by Dantzig.
    pub pricing: Pricing,
    pub feasibility_tol: T,
    pub optimality_tol: T,
    pub pivot_tol: T,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub bland_after: usize,
    /// `None` means `50·(rows + cols)`.
    pub iteration_limit: Option<usize>,
    /// Pivots between recomputations of the basis inverse; `None` scales with the row count.
    pub refactor_every: Option<usize>,
}

impl<T: LpScalar> Default for SimplexOptions<T> {
    fn default() -> Self {
        Self {
            pricing: Pricing::Devex,
            feasibility_tol: T::feasibility_tol(),
            optimality_tol: T::optimality_tol(),
            pivot_tol: T::pivot_tol(),
            bland_after: 50,
            iteration_limit: None,
            refactor_every: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub iterations: usize,
    pub phase1_iterations: usize,
    pub degenerate_pivots: usize,
    pub bland_pivots: usize,
    pub bound_flips: usize,
    pub refactorizations: usize,
    pub redundant_rows: usize,
}

/// Final basis restricted to structural variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Basis {
    /// Basic structural columns, in no particular order.
    pub basic: Vec<usize>,
    /// Nonbasic structural columns sitting at their upper bound.
    pub at_upper: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    pub objective_value: T,
    pub primal: Vec<T>,
    /// One multiplier per constraint row.
    pub dual: Vec<T>,
    /// `c − Aᵀy` for every structural variable.
    pub reduced_costs: Vec<T>,
    pub basis: Basis,
    pub stats: SolveStats,
}

impl<T: LpScalar> LpSolution<T> {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// Objective of the bounded dual: `bᵀy + Σ u·max(d,0) + Σ l·min(d,0)`.
    pub fn dual_objective(&self, lp: &LinearProgram<T>) -> f64 {
        let mut total: f64 = lp
            .constraints()
            .iter()
            .zip(&self.dual)
            .map(|(c, y)| c.rhs.to_f64() * y.to_f64())
            .sum();
        for (j, d) in self.reduced_costs.iter().enumerate() {
            let d = d.to_f64();
            if d > 0.0 {
                if let Some(u) = &lp.upper_bounds()[j] {
                    total += u.to_f64() * d;
                }
            } else {
                total += lp.lower_bounds()[j].to_f64() * d;
            }
        }
        total
    }

    /// `bᵀy` alone.
    pub fn rhs_dual_objective(&self, lp: &LinearProgram<T>) -> f64 {
        lp.constraints()
            .iter()
            .zip(&self.dual)
            .map(|(c, y)| c.rhs.to_f64() * y.to_f64())
            .sum()
    }

    /// Largest positive reduced cost on a variable without an upper bound.
    pub fn dual_infeasibility(&self, lp: &LinearProgram<T>) -> f64 {
        self.reduced_costs
            .iter()
            .zip(lp.upper_bounds())
            .filter(|(_, u)| u.is_none())
            .map(|(d, _)| d.to_f64().max(0.0))
            .fold(0.0, f64::max)
    }

    /// Largest product of a bound slack with the reduced cost pushing against it.
    pub fn complementary_slackness_violation(&self, lp: &LinearProgram<T>) -> f64 {
        let mut worst = 0.0f64;
        for (j, d) in self.reduced_costs.iter().enumerate() {
            let d = d.to_f64();
            let x = self.primal[j].to_f64();
            let from_lower = (x - lp.lower_bounds()[j].to_f64()).max(0.0);
            worst = worst.max(from_lower * (-d).max(0.0));
            if let Some(u) = &lp.upper_bounds()[j] {
                worst = worst.max((u.to_f64() - x).max(0.0) * d.max(0.0));
            }
        }
        worst
    }
}

pub fn simplex_solve<T: LpScalar>(lp: &LinearProgram<T>) -> Result<LpSolution<T>, LpError> {
    simplex_solve_with(lp, &SimplexOptions::default())
}

pub fn simplex_solve_with<T: LpScalar>(
    lp: &LinearProgram<T>,
    opts: &SimplexOptions<T>,
) -> Result<LpSolution<T>, LpError> {
    let mut engine = Engine::new(lp, opts);

    engine.phase_one()?;
    let infeasibility = engine.artificial_total();
    if infeasibility > engine.opts.feasibility_tol {
        return Ok(engine.finish(LpStatus::Infeasible));
    }
    engine.drive_out_artificials();

    engine.set_phase_two_costs();
    let status = match engine.iterate(2)? {
        PhaseEnd::Optimal => LpStatus::Optimal,
        PhaseEnd::Unbounded => LpStatus::Unbounded,
    };
    Ok(engine.finish(status))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarState {
    Basic(usize),
    Lower,
    Upper,
    /// Nonbasic artificial after phase 1; never re-enters.
    Excluded,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

enum Step<T> {
    Flip(T),
    Pivot { row: usize, step: T, to_upper: bool },
}

struct Engine<'a, T> {
    lp: &'a LinearProgram<T>,
    opts: &'a SimplexOptions<T>,
    m: usize,
    n: usize,
    cols: Vec<Vec<(usize, T)>>,
    lower: Vec<T>,
    upper: Vec<Option<T>>,
    x: Vec<T>,
    state: Vec<VarState>,
    basis: Vec<usize>,
    /// Column-major: entry `(i, k)` of `B⁻¹` sits at `k·m + i`.
    binv: Vec<T>,
    cost: Vec<T>,
    /// Reduced costs of nonbasic columns, updated from the pivot row.
    d: Vec<T>,
    /// Devex reference weights; exact scalars price by Dantzig instead.
    weights: Vec<f64>,
    stale_costs: bool,
    stats: SolveStats,
    limit: usize,
    refactor_every: usize,
    bland: bool,
    degenerate_streak: usize,
    since_refactor: usize,
}

impl<'a, T: LpScalar> Engine<'a, T> {
    fn new(lp: &'a LinearProgram<T>, opts: &'a SimplexOptions<T>) -> Self {
        let m = lp.num_constraints();
        let n = lp.num_vars();
        let mut cols = lp.columns();
        let mut lower = lp.lower_bounds().to_vec();
        let mut upper = lp.upper_bounds().to_vec();
        let mut x = lower.clone();
        let mut state = vec![VarState::Lower; n];

        let activities = lp.activities(&x);
        let mut binv = vec![T::zero(); m * m];
        let mut basis = Vec::with_capacity(m);
        for (r, (c, ax)) in lp.constraints().iter().zip(activities).enumerate() {
            let residual = c.rhs.clone() - ax;
            let negative = residual < T::zero();
            let sign = if negative { -T::one() } else { T::one() };
            cols.push(vec![(r, sign.clone())]);
            lower.push(T::zero());
            upper.push(None);
            x.push(if negative { -residual } else { residual });
            state.push(VarState::Basic(r));
            basis.push(n + r);
            binv[r * m + r] = sign;
        }

        let mut cost = vec![T::zero(); n];
        cost.extend(std::iter::repeat(-T::one()).take(m));

        let limit = opts.iteration_limit.unwrap_or(50 * (m + n));
        let refactor_every = opts.refactor_every.unwrap_or(if T::EXACT {
            usize::MAX
        } else {
            (2 * m).max(200)
        });
        let mut engine = Self {
            lp,
            opts,
            m,
            n,
            cols,
            lower,
            upper,
            x,
            state,
            basis,
            binv,
            cost,
            d: vec![T::zero(); n + m],
            weights: vec![1.0; n + m],
            stale_costs: false,
            stats: SolveStats::default(),
            limit,
            refactor_every,
            bland: false,
            degenerate_streak: 0,
            since_refactor: 0,
        };
        engine.recompute_reduced_costs();
        engine
    }

    fn phase_one(&mut self) -> Result<(), LpError> {
        self.iterate(1)?;
        self.stats.phase1_iterations = self.stats.iterations;
        Ok(())
    }

    fn artificial_total(&self) -> T {
        self.x[self.n..]
            .iter()
            .fold(T::zero(), |acc, v| acc + v.clone())
    }

    fn set_phase_two_costs(&mut self) {
        for (j, c) in self.cost.iter_mut().enumerate() {
            *c = if j < self.n {
                self.lp.objective()[j].clone()
            } else {
                T::zero()
            };
        }
        self.bland = false;
        self.degenerate_streak = 0;
        self.weights.iter_mut().for_each(|w| *w = 1.0);
        self.recompute_reduced_costs();
    }

    /// Pivots zero-valued basic artificials out where possible; the rest mark redundant rows.
    fn drive_out_artificials(&mut self) {
        for r in 0..self.m {
            let art = self.basis[r];
            if art < self.n {
                continue;
            }
            let row = self.binv_row(r);
            // entries this small mean the row is numerically dependent
            let threshold = self.opts.pivot_tol.clone() * T::from_ratio(1000, 1);
            let mut best: Option<(usize, T)> = None;
            for j in 0..self.n {
                if matches!(self.state[j], VarState::Basic(_)) {
                    continue;
                }
                let value = self.row_entry(&row, j).abs();
                if value > threshold && best.as_ref().map_or(true, |(_, b)| value > *b) {
                    best = Some((j, value));
                }
            }
            match best {
                Some((j, _)) => {
                    let alpha = self.ftran(j);
                    self.x[art] = T::zero();
                    self.pivot(r, j, &alpha, false);
                }
                None => {
                    self.x[art] = T::zero();
                    self.upper[art] = Some(T::zero());
                    self.stats.redundant_rows += 1;
                }
            }
        }
        for j in self.n..self.n + self.m {
            if !matches!(self.state[j], VarState::Basic(_)) {
                self.state[j] = VarState::Excluded;
                self.x[j] = T::zero();
            }
        }
    }

    fn iterate(&mut self, phase: u8) -> Result<PhaseEnd, LpError> {
        loop {
            if self.stats.iterations >= self.limit {
                return Err(LpError::IterationLimit {
                    limit: self.limit,
                    iterations: self.stats.iterations,
                    phase,
                });
            }
            if self.since_refactor >= self.refactor_every {
                self.refactor()?;
            }
            let Some((q, increase)) = self.price() else {
                if self.settle()? {
                    continue;
                }
                return Ok(PhaseEnd::Optimal);
            };
            let alpha = self.ftran(q);
            let Some(step) = self.ratio_test(q, increase, &alpha) else {
                if self.settle()? {
                    continue;
                }
                return Ok(PhaseEnd::Unbounded);
            };
            self.stats.iterations += 1;
            if self.bland {
                self.stats.bland_pivots += 1;
            }

            let t = match &step {
                Step::Flip(t) => t.clone(),
                Step::Pivot { step, .. } => step.clone(),
            };
            if t <= self.opts.feasibility_tol {
                self.stats.degenerate_pivots += 1;
                self.degenerate_streak += 1;
                if self.degenerate_streak >= self.opts.bland_after {
                    self.bland = true;
                }
            } else {
                self.degenerate_streak = 0;
                self.bland = false;
            }

            let signed = if increase { t.clone() } else { -t.clone() };
            if !t.is_zero() {
                for (i, a) in alpha.iter().enumerate() {
                    if !a.is_zero() {
                        let b = self.basis[i];
                        self.x[b] = self.x[b].clone() - signed.clone() * a.clone();
                    }
                }
                self.x[q] = self.x[q].clone() + signed;
            }

            match step {
                Step::Flip(_) => {
                    self.stats.bound_flips += 1;
                    if increase {
                        self.state[q] = VarState::Upper;
                        self.x[q] = self.upper[q].clone().expect("flip needs an upper bound");
                    } else {
                        self.state[q] = VarState::Lower;
                        self.x[q] = self.lower[q].clone();
                    }
                }
                Step::Pivot { row, to_upper, .. } => {
                    self.update_pricing(row, q, &alpha[row]);
                    self.pivot(row, q, &alpha, to_upper);
                }
            }
        }
    }

    /// Refreshes a drifted factorization or stale reduced costs before a phase
    /// is declared finished; `true` means pricing has to run again.
    fn settle(&mut self) -> Result<bool, LpError> {
        if !T::EXACT && self.since_refactor > 0 {
            self.refactor()?;
            return Ok(true);
        }
        if self.stale_costs {
            self.recompute_reduced_costs();
            return Ok(true);
        }
        Ok(false)
    }

    /// `y = c_Bᵀ B⁻¹`.
    fn duals(&self) -> Vec<T> {
        let m = self.m;
        (0..m)
            .map(|k| {
                self.basis.iter().zip(&self.binv[k * m..(k + 1) * m]).fold(
                    T::zero(),
                    |acc, (&b, v)| {
                        let c = &self.cost[b];
                        if c.is_zero() || v.is_zero() {
                            acc
                        } else {
                            acc + c.clone() * v.clone()
                        }
                    },
                )
            })
            .collect()
    }

    fn reduced_cost(&self, j: usize, y: &[T]) -> T {
        self.cols[j]
            .iter()
            .fold(self.cost[j].clone(), |acc, (i, a)| {
                acc - y[*i].clone() * a.clone()
            })
    }

    fn recompute_reduced_costs(&mut self) {
        let y = self.duals();
        for j in 0..self.n + self.m {
            self.d[j] = match self.state[j] {
                VarState::Lower | VarState::Upper => self.reduced_cost(j, &y),
                VarState::Basic(_) | VarState::Excluded => T::zero(),
            };
        }
        self.stale_costs = false;
    }

    fn is_fixed(&self, j: usize) -> bool {
        self.upper[j].as_ref().is_some_and(|u| *u <= self.lower[j])
    }

    /// Entering variable and whether it increases.
    fn price(&self) -> Option<(usize, bool)> {
        let tol = &self.opts.optimality_tol;
        let devex = !T::EXACT && !self.bland && self.opts.pricing == Pricing::Devex;
        let mut best: Option<(usize, bool, T, f64)> = None;
        for j in 0..self.n + self.m {
            let increase = match self.state[j] {
                VarState::Lower => true,
                VarState::Upper => false,
                VarState::Basic(_) | VarState::Excluded => continue,
            };
            if self.is_fixed(j) {
                continue;
            }
            let gain = if increase {
                self.d[j].clone()
            } else {
                -self.d[j].clone()
            };
            if gain <= *tol {
                continue;
            }
            if self.bland {
                return Some((j, increase));
            }
            let score = if devex {
                let g = gain.to_f64();
                g * g / self.weights[j]
            } else {
                0.0
            };
            let better = match &best {
                None => true,
                Some((_, _, g, s)) => {
                    if devex {
                        score > *s
                    } else {
                        gain > *g
                    }
                }
            };
            if better {
                best = Some((j, increase, gain, score));
            }
        }
        best.map(|(j, inc, ..)| (j, inc))
    }

    /// `B⁻¹ A_j`.
    fn ftran(&self, j: usize) -> Vec<T> {
        let m = self.m;
        let mut alpha = vec![T::zero(); m];
        for (k, a) in &self.cols[j] {
            T::sub_scaled(&mut alpha, &-a.clone(), &self.binv[k * m..(k + 1) * m]);
        }
        alpha
    }

    /// Row `r` of `B⁻¹`.
    fn binv_row(&self, r: usize) -> Vec<T> {
        (0..self.m)
            .map(|k| self.binv[k * self.m + r].clone())
            .collect()
    }

    fn row_entry(&self, row: &[T], j: usize) -> T {
        self.cols[j].iter().fold(T::zero(), |acc, (i, a)| {
            if row[*i].is_zero() {
                acc
            } else {
                acc + row[*i].clone() * a.clone()
            }
        })
    }

    /// Moves the reduced costs and Devex weights to the basis after `q` replaces row `r`.
    fn update_pricing(&mut self, r: usize, q: usize, alpha_rq: &T) {
        let rho = self.binv_row(r);
        let leaving = self.basis[r];
        let theta = self.d[q].clone() / alpha_rq.clone();
        let wq = self.weights[q];
        let arq = alpha_rq.to_f64();
        for j in 0..self.n + self.m {
            if j == q || !matches!(self.state[j], VarState::Lower | VarState::Upper) {
                continue;
            }
            let arj = self.row_entry(&rho, j);
            if arj.is_zero() {
                continue;
            }
            if !T::EXACT {
                let ratio = arj.to_f64() / arq;
                self.weights[j] = self.weights[j].max(ratio * ratio * wq);
            }
            self.d[j] = self.d[j].clone() - theta.clone() * arj;
        }
        self.d[leaving] = -theta;
        self.d[q] = T::zero();
        self.weights[leaving] = (wq / (arq * arq)).max(1.0);
        if self.weights[leaving] > 1e8 {
            self.weights.iter_mut().for_each(|w| *w = 1.0);
        }
        self.stale_costs = true;
    }

    /// Two-pass (Harris) ratio test; exact scalars reduce to the textbook rule.
    fn ratio_test(&self, q: usize, increase: bool, alpha: &[T]) -> Option<Step<T>> {
        let piv = &self.opts.pivot_tol;
        let tol = &self.opts.feasibility_tol;
        // (row, |δ|, slack, to_upper)
        let mut candidates: Vec<(usize, T, T, bool)> = Vec::new();
        let mut relaxed_bound: Option<T> = None;
        for (i, a) in alpha.iter().enumerate() {
            let delta = if increase { a.clone() } else { -a.clone() };
            let b = self.basis[i];
            let (magnitude, slack, to_upper) = if delta > *piv {
                (delta, self.x[b].clone() - self.lower[b].clone(), false)
            } else if delta < -piv.clone() {
                match &self.upper[b] {
                    Some(u) => (-delta, u.clone() - self.x[b].clone(), true),
                    None => continue,
                }
            } else {
                continue;
            };
            let mut relaxed = (slack.clone() + tol.clone()) / magnitude.clone();
            if relaxed < T::zero() {
                // drifted past its bound; the row only admits a zero step
                relaxed = T::zero();
            }
            if relaxed_bound.as_ref().map_or(true, |r| relaxed < *r) {
                relaxed_bound = Some(relaxed);
            }
            candidates.push((i, magnitude, slack, to_upper));
        }

        let flip = self.upper[q]
            .as_ref()
            .map(|u| u.clone() - self.lower[q].clone());

        let Some(bound) = relaxed_bound else {
            return flip.map(Step::Flip);
        };

        let zero = T::zero();
        let ratio = |slack: &T, magnitude: &T| {
            if *slack <= zero {
                T::zero()
            } else {
                slack.clone() / magnitude.clone()
            }
        };

        let chosen = if self.bland {
            // exact minimum ratio, ties to the smallest variable index
            let min = candidates
                .iter()
                .map(|(_, mag, slack, _)| ratio(slack, mag))
                .fold(None, |acc: Option<T>, r| match acc {
                    Some(a) if a <= r => Some(a),
                    _ => Some(r),
                })
                .expect("nonempty");
            candidates
                .iter()
                .filter(|(_, mag, slack, _)| ratio(slack, mag) <= min.clone() + tol.clone())
                .min_by_key(|(i, ..)| self.basis[*i])
                .expect("nonempty")
        } else {
            candidates
                .iter()
                .filter(|(_, mag, slack, _)| ratio(slack, mag) <= bound)
                .fold(None, |acc: Option<&(usize, T, T, bool)>, c| match acc {
                    Some(best) if best.1 >= c.1 => Some(best),
                    _ => Some(c),
                })
                .expect("the relaxed minimum is always attained")
        };

        let step = ratio(&chosen.2, &chosen.1);
        if let Some(f) = flip {
            if f <= step {
                return Some(Step::Flip(f));
            }
        }
        Some(Step::Pivot {
            row: chosen.0,
            step,
            to_upper: chosen.3,
        })
    }

    fn pivot(&mut self, r: usize, q: usize, alpha: &[T], to_upper: bool) {
        let m = self.m;
        let leaving = self.basis[r];
        self.x[leaving] = if to_upper {
            self.upper[leaving]
                .clone()
                .expect("leaving at upper needs a bound")
        } else {
            self.lower[leaving].clone()
        };
        self.state[leaving] = if leaving >= self.n {
            VarState::Excluded
        } else if to_upper {
            VarState::Upper
        } else {
            VarState::Lower
        };
        self.basis[r] = q;
        self.state[q] = VarState::Basic(r);

        let pivot = alpha[r].clone();
        for col in self.binv.chunks_mut(m) {
            if col[r].is_zero() {
                continue;
            }
            let p = col[r].clone() / pivot.clone();
            T::sub_scaled(col, &p, alpha);
            col[r] = p;
        }
        self.since_refactor += 1;
    }

    /// Recomputes `B⁻¹` by Gauss–Jordan elimination and the basic values from scratch.
    fn refactor(&mut self) -> Result<(), LpError> {
        let m = self.m;
        self.stats.refactorizations += 1;
        self.since_refactor = 0;

        // work = [B | I], row-major m × 2m
        let width = 2 * m;
        let mut work = vec![T::zero(); m * width];
        for (pos, &b) in self.basis.iter().enumerate() {
            for (i, a) in &self.cols[b] {
                work[i * width + pos] = a.clone();
            }
        }
        for i in 0..m {
            work[i * width + m + i] = T::one();
        }
        for col in 0..m {
            let (pivot_row, pivot_abs) = (col..m).map(|i| (i, work[i * width + col].abs())).fold(
                (col, T::zero()),
                |best, cand| if cand.1 > best.1 { cand } else { best },
            );
            if pivot_abs <= self.opts.pivot_tol || pivot_abs.is_zero() {
                return Err(LpError::SingularBasis);
            }
            if pivot_row != col {
                for k in 0..width {
                    work.swap(col * width + k, pivot_row * width + k);
                }
            }
            let p = work[col * width + col].clone();
            // columns left of `col` are already reduced to the identity
            let pivot_row: Vec<T> = work[col * width + col..(col + 1) * width]
                .iter()
                .map(|v| {
                    if v.is_zero() {
                        T::zero()
                    } else {
                        v.clone() / p.clone()
                    }
                })
                .collect();
            work[col * width + col..(col + 1) * width].clone_from_slice(&pivot_row);
            for i in 0..m {
                if i == col {
                    continue;
                }
                let f = work[i * width + col].clone();
                if f.is_zero() {
                    continue;
                }
                T::sub_scaled(&mut work[i * width + col..(i + 1) * width], &f, &pivot_row);
            }
        }
        for i in 0..m {
            for k in 0..m {
                self.binv[k * m + i] = work[i * width + m + k].clone();
            }
        }

        // x_B = B⁻¹ (b − N x_N)
        let mut residual: Vec<T> = self
            .lp
            .constraints()
            .iter()
            .map(|c| c.rhs.clone())
            .collect();
        for j in 0..self.n + self.m {
            if matches!(self.state[j], VarState::Basic(_)) || self.x[j].is_zero() {
                continue;
            }
            for (i, a) in &self.cols[j] {
                residual[*i] = residual[*i].clone() - a.clone() * self.x[j].clone();
            }
        }
        let mut xb = vec![T::zero(); m];
        for (col, r) in self.binv.chunks(m).zip(&residual) {
            if r.is_zero() {
                continue;
            }
            T::sub_scaled(&mut xb, &-r.clone(), col);
        }
        for (i, v) in xb.into_iter().enumerate() {
            self.x[self.basis[i]] = v;
        }
        self.recompute_reduced_costs();
        Ok(())
    }

    fn finish(self, status: LpStatus) -> LpSolution<T> {
        let y = self.duals();
        let reduced_costs: Vec<T> = (0..self.n).map(|j| self.reduced_cost(j, &y)).collect();
        let primal: Vec<T> = self.x[..self.n].to_vec();
        let objective_value = if status == LpStatus::Optimal {
            self.lp.objective_value(&primal)
        } else {
            T::zero()
        };
        let mut basis = Basis::default();
        for j in 0..self.n {
            match self.state[j] {
                VarState::Basic(_) => basis.basic.push(j),
                VarState::Upper => basis.at_upper.push(j),
                _ => {}
            }
        }
        LpSolution {
            status,
            objective_value,
            primal,
            dual: y,
            reduced_costs,
            basis,
            stats: self.stats,
        }
    }
}
