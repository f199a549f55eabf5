//! A small dense two-phase simplex solver, generic over the scalar.
//!
//! The same code runs in exact rational arithmetic (certified results) and in
//! f64 with a pivot tolerance (fast quadrature-grade results). Bland's rule
//! keeps the exact instantiation cycle-free; problems here are tiny, so
//! speed of the pivot rule is not a concern.

use super::{NormSpec, SpaceError};
use crate::scalar::Rat;
use num_traits::{One, Signed, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait LpNum:
    Clone
    + PartialEq
    + PartialOrd
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn lp_zero() -> Self;
    fn lp_one() -> Self;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn from_rat(r: &Rat) -> Self;
    fn to_approx_f64(&self) -> f64;
    /// Equality at the solver's precision, relative to a scale hint.
    fn approx_same(&self, other: &Self, scale: &Self) -> bool;
    fn is_nonzero(&self) -> bool {
        self.is_pos() || self.is_neg()
    }
}

impl LpNum for Rat {
    fn lp_zero() -> Self {
        Zero::zero()
    }
    fn lp_one() -> Self {
        One::one()
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn to_approx_f64(&self) -> f64 {
        crate::scalar::rat_to_f64(self)
    }
    fn approx_same(&self, other: &Self, _scale: &Self) -> bool {
        self == other
    }
}

const F64_TOL: f64 = 1e-9;

impl LpNum for f64 {
    fn lp_zero() -> Self {
        0.0
    }
    fn lp_one() -> Self {
        1.0
    }
    fn is_pos(&self) -> bool {
        *self > F64_TOL
    }
    fn is_neg(&self) -> bool {
        *self < -F64_TOL
    }
    fn from_rat(r: &Rat) -> Self {
        crate::scalar::rat_to_f64(r)
    }
    fn to_approx_f64(&self) -> f64 {
        *self
    }
    fn approx_same(&self, other: &Self, scale: &Self) -> bool {
        (self - other).abs() <= 1e-9 * scale.abs().max(1.0)
    }
}

/// Affine expression over LP variables.
#[derive(Debug, Clone)]
pub struct Expr<T> {
    pub terms: Vec<(usize, T)>,
    pub constant: T,
}

impl<T: LpNum> Expr<T> {
    pub fn constant(c: T) -> Self {
        Expr {
            terms: vec![],
            constant: c,
        }
    }

    pub fn var(idx: usize) -> Self {
        Expr {
            terms: vec![(idx, T::lp_one())],
            constant: T::lp_zero(),
        }
    }

    pub fn add(&self, other: &Expr<T>) -> Expr<T> {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Expr {
            terms,
            constant: self.constant.clone() + other.constant.clone(),
        }
    }

    pub fn sub(&self, other: &Expr<T>) -> Expr<T> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Expr<T> {
        Expr {
            terms: self
                .terms
                .iter()
                .map(|(i, c)| (*i, -c.clone()))
                .collect(),
            constant: -self.constant.clone(),
        }
    }

    pub fn scale(&self, by: &T) -> Expr<T> {
        Expr {
            terms: self
                .terms
                .iter()
                .map(|(i, c)| (*i, c.clone() * by.clone()))
                .collect(),
            constant: self.constant.clone() * by.clone(),
        }
    }

    pub fn eval(&self, x: &[T]) -> T {
        self.terms.iter().fold(self.constant.clone(), |acc, (i, c)| {
            acc + c.clone() * x[*i].clone()
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cmp {
    Le,
    Eq,
}

#[derive(Debug, Clone)]
struct Row<T> {
    coeffs: Vec<(usize, T)>,
    cmp: Cmp,
    rhs: T,
}

/// Incrementally built LP: all variables nonnegative; free variables are
/// split pairs managed by the builder.
#[derive(Debug, Clone)]
pub struct LpBuilder<T> {
    n_vars: usize,
    rows: Vec<Row<T>>,
    objective: Vec<(usize, T)>,
}

/// A free (sign-unrestricted) variable, represented as pos - neg.
#[derive(Debug, Clone, Copy)]
pub struct FreeVar {
    pos: usize,
    neg: usize,
}

impl<T: LpNum> Default for LpBuilder<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: LpNum> LpBuilder<T> {
    pub fn new() -> Self {
        LpBuilder {
            n_vars: 0,
            rows: vec![],
            objective: vec![],
        }
    }

    pub fn nonneg_var(&mut self) -> usize {
        self.n_vars += 1;
        self.n_vars - 1
    }

    pub fn free_var(&mut self) -> FreeVar {
        FreeVar {
            pos: self.nonneg_var(),
            neg: self.nonneg_var(),
        }
    }

    pub fn free_expr(&mut self) -> Expr<T> {
        let v = self.free_var();
        Expr {
            terms: vec![(v.pos, T::lp_one()), (v.neg, -T::lp_one())],
            constant: T::lp_zero(),
        }
    }

    /// Constrain expr <= 0.
    pub fn leq_zero(&mut self, expr: &Expr<T>) {
        self.rows.push(Row {
            coeffs: expr.terms.clone(),
            cmp: Cmp::Le,
            rhs: -expr.constant.clone(),
        });
    }

    /// Constrain expr == 0.
    pub fn eq_zero(&mut self, expr: &Expr<T>) {
        self.rows.push(Row {
            coeffs: expr.terms.clone(),
            cmp: Cmp::Eq,
            rhs: -expr.constant.clone(),
        });
    }

    /// Minimize the given expression (its constant is added back to the
    /// reported objective value).
    pub fn minimize(&mut self, expr: &Expr<T>) -> T {
        self.objective = expr.terms.clone();
        expr.constant.clone()
    }

    pub fn solve_min(&self, obj: &Expr<T>) -> Result<LpSolution<T>, SpaceError> {
        let mut lp = self.clone();
        let shift = lp.minimize(obj);
        let sol = simplex(&lp)?;
        Ok(LpSolution {
            objective: sol.objective + shift,
            x: sol.x,
        })
    }

    pub fn solve_max(&self, obj: &Expr<T>) -> Result<LpSolution<T>, SpaceError> {
        let sol = self.solve_min(&obj.neg())?;
        Ok(LpSolution {
            objective: -sol.objective,
            x: sol.x,
        })
    }
}

#[derive(Debug, Clone)]
pub struct LpSolution<T> {
    pub x: Vec<T>,
    pub objective: T,
}

const MAX_PIVOTS: usize = 200_000;

/// Dense two-phase simplex with Bland's rule.
fn simplex<T: LpNum>(lp: &LpBuilder<T>) -> Result<LpSolution<T>, SpaceError> {
    let m = lp.rows.len();
    let n = lp.n_vars;

    // layout pass: columns are structural | slack/surplus | artificial | rhs
    let flips: Vec<bool> = lp.rows.iter().map(|r| r.rhs.is_neg()).collect();
    let needs_art: Vec<bool> = lp
        .rows
        .iter()
        .zip(&flips)
        .map(|(r, &f)| r.cmp == Cmp::Eq || f)
        .collect();
    let n_slack = lp.rows.iter().filter(|r| r.cmp == Cmp::Le).count();
    let n_art = needs_art.iter().filter(|&&a| a).count();
    let n_cols = n + n_slack + n_art;
    let rhs_col = n_cols;

    let mut tab: Vec<Vec<T>> = vec![vec![T::lp_zero(); n_cols + 1]; m];
    let mut basis = vec![usize::MAX; m];
    let mut slack_idx = n;
    let mut art_idx = n + n_slack;
    let mut artificials = vec![];

    for (i, row) in lp.rows.iter().enumerate() {
        let flip = flips[i];
        for (j, c) in &row.coeffs {
            let c = if flip { -c.clone() } else { c.clone() };
            tab[i][*j] = tab[i][*j].clone() + c;
        }
        tab[i][rhs_col] = if flip { -row.rhs.clone() } else { row.rhs.clone() };
        if row.cmp == Cmp::Le {
            // slack for as-is rows, surplus for flipped rows
            tab[i][slack_idx] = if flip { -T::lp_one() } else { T::lp_one() };
            if !flip {
                basis[i] = slack_idx;
            }
            slack_idx += 1;
        }
        if needs_art[i] {
            tab[i][art_idx] = T::lp_one();
            basis[i] = art_idx;
            artificials.push(art_idx);
            art_idx += 1;
        }
    }

    // phase 1
    if !artificials.is_empty() {
        let mut cost = vec![T::lp_zero(); n_cols + 1];
        for &a in &artificials {
            cost[a] = T::lp_one();
        }
        reduce_cost_row(&mut cost, &tab, &basis);
        run_simplex(&mut tab, &mut cost, &mut basis, rhs_col)?;
        let w = -cost[rhs_col].clone();
        if w.is_pos() {
            return Err(SpaceError::NumericFailure(
                "linear program infeasible".into(),
            ));
        }
        // pivot lingering artificials out of the basis when possible
        for i in 0..m {
            if artificials.contains(&basis[i]) {
                if let Some(j) = (0..n + n_slack).find(|&j| tab[i][j].is_nonzero()) {
                    pivot(&mut tab, &mut cost, &mut basis, i, j, rhs_col);
                }
            }
        }
        // freeze artificial columns out of phase 2
        for row in tab.iter_mut() {
            for &a in &artificials {
                row[a] = T::lp_zero();
            }
        }
    }

    // phase 2
    let mut cost = vec![T::lp_zero(); n_cols + 1];
    for (j, c) in &lp.objective {
        cost[*j] = cost[*j].clone() + c.clone();
    }
    reduce_cost_row(&mut cost, &tab, &basis);
    run_simplex(&mut tab, &mut cost, &mut basis, rhs_col)?;

    let mut x = vec![T::lp_zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] = tab[i][rhs_col].clone();
        }
    }
    let mut objective = T::lp_zero();
    for (j, c) in &lp.objective {
        objective = objective + c.clone() * x[*j].clone();
    }
    Ok(LpSolution { x, objective })
}

fn reduce_cost_row<T: LpNum>(cost: &mut [T], tab: &[Vec<T>], basis: &[usize]) {
    for (i, &b) in basis.iter().enumerate() {
        if cost[b].is_nonzero() {
            let factor = cost[b].clone();
            for (c, t) in cost.iter_mut().zip(&tab[i]) {
                *c = c.clone() - factor.clone() * t.clone();
            }
        }
    }
}

fn run_simplex<T: LpNum>(
    tab: &mut [Vec<T>],
    cost: &mut [T],
    basis: &mut [usize],
    rhs_col: usize,
) -> Result<(), SpaceError> {
    for _ in 0..MAX_PIVOTS {
        // Bland: entering = lowest index with negative reduced cost
        let Some(enter) = (0..rhs_col).find(|&j| cost[j].is_neg()) else {
            return Ok(());
        };
        // leaving: min ratio, ties by lowest basic variable index
        let mut leave: Option<(usize, T)> = None;
        for (i, row) in tab.iter().enumerate() {
            if !row[enter].is_pos() {
                continue;
            }
            let ratio = row[rhs_col].clone() / row[enter].clone();
            match &leave {
                None => leave = Some((i, ratio)),
                Some((li, lr)) => {
                    if ratio < *lr || (ratio == *lr && basis[i] < basis[*li]) {
                        leave = Some((i, ratio));
                    }
                }
            }
        }
        let Some((leave, _)) = leave else {
            return Err(SpaceError::NumericFailure(
                "linear program unbounded".into(),
            ));
        };
        pivot(tab, cost, basis, leave, enter, rhs_col);
    }
    Err(SpaceError::NumericFailure(
        "simplex iteration limit exceeded".into(),
    ))
}

fn pivot<T: LpNum>(
    tab: &mut [Vec<T>],
    cost: &mut [T],
    basis: &mut [usize],
    row: usize,
    col: usize,
    rhs_col: usize,
) {
    let p = tab[row][col].clone();
    for j in 0..=rhs_col {
        tab[row][j] = tab[row][j].clone() / p.clone();
    }
    for i in 0..tab.len() {
        if i == row || !tab[i][col].is_nonzero() {
            continue;
        }
        let factor = tab[i][col].clone();
        for j in 0..=rhs_col {
            let d = factor.clone() * tab[row][j].clone();
            tab[i][j] = tab[i][j].clone() - d;
        }
    }
    if cost[col].is_nonzero() {
        let factor = cost[col].clone();
        for j in 0..=rhs_col {
            let d = factor.clone() * tab[row][j].clone();
            cost[j] = cost[j].clone() - d;
        }
    }
    basis[row] = col;
}

/// Emit LP rows enforcing norm(entries, spec) <= bound.
///
/// Only polyhedral specs are expressible; the epigraph uses one auxiliary
/// variable per absolute value.
pub fn add_norm_leq<T: LpNum>(
    b: &mut LpBuilder<T>,
    spec: &NormSpec,
    entries: &[Expr<T>],
    bound: &Expr<T>,
) -> Result<(), SpaceError> {
    match spec {
        NormSpec::Lp { p } if p.is_one() => {
            let mut total = Expr::constant(T::lp_zero());
            for e in entries {
                let u = Expr::var(b.nonneg_var());
                b.leq_zero(&e.sub(&u));
                b.leq_zero(&e.neg().sub(&u));
                total = total.add(&u);
            }
            b.leq_zero(&total.sub(bound));
            Ok(())
        }
        NormSpec::Sup => {
            for e in entries {
                b.leq_zero(&e.sub(bound));
                b.leq_zero(&e.neg().sub(bound));
            }
            Ok(())
        }
        NormSpec::V1 => {
            // variation of the zero-bordered path 0, e_1, ..., e_n, 0
            let zero = Expr::constant(T::lp_zero());
            let mut total = Expr::constant(T::lp_zero());
            let n = entries.len();
            for k in 0..=n {
                let prev = if k == 0 { &zero } else { &entries[k - 1] };
                let next = if k == n { &zero } else { &entries[k] };
                let d = next.sub(prev);
                let u = Expr::var(b.nonneg_var());
                b.leq_zero(&d.sub(&u));
                b.leq_zero(&d.neg().sub(&u));
                total = total.add(&u);
            }
            b.leq_zero(&total.sub(bound));
            Ok(())
        }
        NormSpec::DirectSumMax {
            left,
            left_dim,
            right,
            ..
        } => {
            add_norm_leq(b, left, &entries[..*left_dim], bound)?;
            add_norm_leq(b, right, &entries[*left_dim..], bound)
        }
        other => Err(SpaceError::NotPolyhedral(format!("{other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn simple_max_problem_exact() {
        // max x + 2y st x + y <= 4, 2x + y >= 2, y <= 3, x,y >= 0 -> 7 at (1,3)
        let mut b: LpBuilder<Rat> = LpBuilder::new();
        let x = Expr::var(b.nonneg_var());
        let y = Expr::var(b.nonneg_var());
        b.leq_zero(&x.add(&y).sub(&Expr::constant(rat(4, 1))));
        b.leq_zero(&x.scale(&rat(2, 1)).add(&y).neg().add(&Expr::constant(rat(2, 1))));
        b.leq_zero(&y.sub(&Expr::constant(rat(3, 1))));
        let sol = b.solve_max(&x.add(&y.scale(&rat(2, 1)))).unwrap();
        assert_eq!(sol.objective, rat(7, 1));
        assert_eq!(x.eval(&sol.x), rat(1, 1));
        assert_eq!(y.eval(&sol.x), rat(3, 1));
    }

    #[test]
    fn equality_constraints_need_phase_one() {
        // min x + y st x - y == 3, x <= 5 -> 3 at (3, 0)
        let mut b: LpBuilder<Rat> = LpBuilder::new();
        let x = Expr::var(b.nonneg_var());
        let y = Expr::var(b.nonneg_var());
        b.eq_zero(&x.sub(&y).sub(&Expr::constant(rat(3, 1))));
        b.leq_zero(&x.sub(&Expr::constant(rat(5, 1))));
        let sol = b.solve_min(&x.add(&y)).unwrap();
        assert_eq!(sol.objective, rat(3, 1));
    }

    #[test]
    fn infeasible_is_detected() {
        let mut b: LpBuilder<Rat> = LpBuilder::new();
        let x = Expr::var(b.nonneg_var());
        b.leq_zero(&x.sub(&Expr::constant(rat(1, 1))));
        b.eq_zero(&x.sub(&Expr::constant(rat(2, 1))));
        assert!(b.solve_min(&x).is_err());
    }

    #[test]
    fn free_variables_go_negative() {
        // min x st x >= -7 (x free) -> -7
        let mut b: LpBuilder<Rat> = LpBuilder::new();
        let x = b.free_expr();
        b.leq_zero(&x.neg().sub(&Expr::constant(rat(7, 1))));
        let sol = b.solve_min(&x).unwrap();
        assert_eq!(sol.objective, rat(-7, 1));
    }

    #[test]
    fn f64_instantiation_agrees() {
        let mut b: LpBuilder<f64> = LpBuilder::new();
        let x = Expr::var(b.nonneg_var());
        let y = Expr::var(b.nonneg_var());
        b.leq_zero(&x.add(&y).sub(&Expr::constant(4.0)));
        b.leq_zero(&y.sub(&Expr::constant(3.0)));
        let sol = b.solve_max(&x.add(&y.scale(&2.0))).unwrap();
        assert!((sol.objective - 7.0).abs() < 1e-9);
    }

    #[test]
    fn norm_epigraph_minimizes_to_the_norm() {
        // min s st ||f||_spec <= s equals the norm, for fixed f
        let f = [rat(1, 1), rat(0, 1), rat(1, 1)];
        for (spec, expected) in [
            (NormSpec::V1, rat(4, 1)),
            (NormSpec::l1(), rat(2, 1)),
            (NormSpec::Sup, rat(1, 1)),
        ] {
            let mut b: LpBuilder<Rat> = LpBuilder::new();
            let s = Expr::var(b.nonneg_var());
            let entries: Vec<Expr<Rat>> =
                f.iter().map(|c| Expr::constant(c.clone())).collect();
            add_norm_leq(&mut b, &spec, &entries, &s).unwrap();
            let sol = b.solve_min(&s).unwrap();
            assert_eq!(sol.objective, expected, "spec {spec:?}");
        }
    }
}
