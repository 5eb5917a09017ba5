//! Dense two-phase tableau simplex with Bland's pivoting rule.
//!
//! Generic over the scalar field: [`BigRational`] gives exact optima (the
//! default for the domination LPs), `f64` is available for large instances.
//! Bland's rule makes the pivot sequence, and therefore the returned vertex
//! of the optimal face, a deterministic function of the input.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Scalar field the tableau runs over.
pub trait LpScalar:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Signed
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
{
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    /// Treat as zero during pivoting. Exact for rationals.
    fn negligible(&self) -> bool;

    fn positive(&self) -> bool {
        !self.negligible() && self.is_positive()
    }

    fn negative(&self) -> bool {
        !self.negligible() && self.is_negative()
    }
}

impl LpScalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn negligible(&self) -> bool {
        self.is_zero()
    }
}

impl LpScalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn negligible(&self) -> bool {
        self.abs() < 1e-11
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// `minimize objective . x` subject to `rows`, `x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram<T> {
    pub objective: Vec<T>,
    pub rows: Vec<Constraint<T>>,
}

#[derive(Clone, Debug)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { x: Vec<T>, value: T },
    Infeasible,
    Unbounded,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ColumnKind {
    Structural,
    Slack,
    Artificial,
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    kinds: Vec<ColumnKind>,
}

impl<T: LpScalar> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        self.rhs[r] = self.rhs[r].clone() / p;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c].clone();
            if f.is_zero() {
                continue;
            }
            for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
            self.rhs[i] = self.rhs[i].clone() - f * pivot_rhs.clone();
        }
        self.basis[r] = c;
    }

    /// Reduced costs `c_j - c_B B^-1 A_j` for the current basis.
    fn reduced_costs(&self, cost: &[T]) -> Vec<T> {
        let mut d = cost.to_vec();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = cost[self.basis[i]].clone();
            if cb.is_zero() {
                continue;
            }
            for (dj, a) in d.iter_mut().zip(row) {
                if !a.is_zero() {
                    *dj = dj.clone() - cb.clone() * a.clone();
                }
            }
        }
        d
    }

    /// Runs primal simplex on `cost` restricted to columns allowed by
    /// `allowed`. Returns false when unbounded.
    fn optimize(&mut self, cost: &[T], allowed: impl Fn(ColumnKind) -> bool) -> bool {
        loop {
            let d = self.reduced_costs(cost);
            let entering = (0..d.len()).find(|&j| allowed(self.kinds[j]) && d[j].negative());
            let Some(c) = entering else {
                return true;
            };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.positive() {
                    continue;
                }
                let ratio = self.rhs[i].clone() / a.clone();
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br || (ratio == br && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            match leave {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

/// Solves `lp` to optimality.
pub fn minimize<T: LpScalar>(lp: &LinearProgram<T>) -> LpOutcome<T> {
    let nvars = lp.objective.len();
    let m = lp.rows.len();

    // Normalize to nonnegative right-hand sides.
    let rows: Vec<(Vec<T>, Relation, T)> = lp
        .rows
        .iter()
        .map(|c| {
            assert_eq!(c.coeffs.len(), nvars, "constraint width mismatch");
            if c.rhs.is_negative() {
                let rel = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (
                    c.coeffs.iter().map(|a| -a.clone()).collect(),
                    rel,
                    -c.rhs.clone(),
                )
            } else {
                (c.coeffs.clone(), c.relation, c.rhs.clone())
            }
        })
        .collect();

    let slack_count = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let art_count = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let width = nvars + slack_count + art_count;
    let mut kinds = vec![ColumnKind::Structural; nvars];
    kinds.extend(std::iter::repeat_n(ColumnKind::Slack, slack_count));
    kinds.extend(std::iter::repeat_n(ColumnKind::Artificial, art_count));

    let mut tab = Tableau {
        rows: Vec::with_capacity(m),
        rhs: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        kinds,
    };
    let (mut next_slack, mut next_art) = (nvars, nvars + slack_count);
    for (coeffs, rel, rhs) in rows {
        let mut row = coeffs;
        row.resize(width, T::zero());
        let basic = match rel {
            Relation::Le => {
                row[next_slack] = T::one();
                next_slack += 1;
                next_slack - 1
            }
            Relation::Ge => {
                row[next_slack] = -T::one();
                next_slack += 1;
                row[next_art] = T::one();
                next_art += 1;
                next_art - 1
            }
            Relation::Eq => {
                row[next_art] = T::one();
                next_art += 1;
                next_art - 1
            }
        };
        tab.rows.push(row);
        tab.rhs.push(rhs);
        tab.basis.push(basic);
    }

    if art_count > 0 {
        let phase1: Vec<T> = tab
            .kinds
            .iter()
            .map(|k| {
                if *k == ColumnKind::Artificial {
                    T::one()
                } else {
                    T::zero()
                }
            })
            .collect();
        tab.optimize(&phase1, |_| true);
        let infeasibility = tab
            .basis
            .iter()
            .zip(&tab.rhs)
            .filter(|(b, _)| tab.kinds[**b] == ColumnKind::Artificial)
            .fold(T::zero(), |acc, (_, r)| acc + r.clone());
        if !infeasibility.negligible() {
            return LpOutcome::Infeasible;
        }
        // Drive remaining (zero-valued) artificials out of the basis; drop
        // rows that are linear combinations of the others.
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.kinds[tab.basis[r]] == ColumnKind::Artificial {
                let col = (0..width).find(|&j| {
                    tab.kinds[j] != ColumnKind::Artificial && !tab.rows[r][j].negligible()
                });
                match col {
                    Some(j) => tab.pivot(r, j),
                    None => {
                        tab.rows.remove(r);
                        tab.rhs.remove(r);
                        tab.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    let mut cost = lp.objective.clone();
    cost.resize(width, T::zero());
    if !tab.optimize(&cost, |k| k != ColumnKind::Artificial) {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![T::zero(); nvars];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < nvars {
            x[b] = tab.rhs[i].clone();
        }
    }
    let value = x
        .iter()
        .zip(&lp.objective)
        .fold(T::zero(), |acc, (xi, ci)| acc + xi.clone() * ci.clone());
    LpOutcome::Optimal { x, value }
}
