//! Linear programs over the unit box: minimize `c . x` subject to
//! `0 <= x <= 1` and a growing list of inequalities `a . x <= b`.
//!
//! [`BoundedSimplex`] is the stateful engine; [`solve`] and
//! [`resolve_with_new_constraints`] are the one-shot entry points.

mod simplex;

use std::fmt::Write as _;

pub use simplex::{Basis, BoundedSimplex};

use crate::code::CheckRow;
use crate::error::LpError;

/// Which parity check produced a constraint.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CheckId {
    /// Row of the parity-check matrix.
    Row(usize),
    /// A redundant check built by combining rows.
    Redundant(CheckRow),
}

/// Where a parity constraint came from: the check and the odd subset `V`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Provenance {
    pub check: CheckId,
    pub subset: Vec<usize>,
}

/// One inequality `sum coef_i x_i <= rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearConstraint {
    pub terms: Vec<(usize, f64)>,
    pub rhs: f64,
    pub provenance: Option<Provenance>,
}

impl LinearConstraint {
    pub fn new(terms: Vec<(usize, f64)>, rhs: f64) -> Self {
        LinearConstraint { terms, rhs, provenance: None }
    }

    pub fn lhs(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|&(i, a)| a * x[i]).sum()
    }

    /// `lhs - rhs`; positive means the constraint is violated at `x`.
    pub fn violation(&self, x: &[f64]) -> f64 {
        self.lhs(x) - self.rhs
    }

    pub(crate) fn validate(&self, n: usize, index: usize) -> Result<(), LpError> {
        let bad = |reason: String| LpError::InvalidConstraint { index, reason };
        if self.terms.is_empty() {
            return Err(bad("no terms".into()));
        }
        if !self.rhs.is_finite() {
            return Err(bad("rhs is not finite".into()));
        }
        let mut seen = vec![false; n];
        for &(i, a) in &self.terms {
            if i >= n {
                return Err(bad(format!("variable {i} out of range")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(bad(format!("variable {i} repeated")));
            }
            if !a.is_finite() {
                return Err(bad(format!("coefficient of x{i} is not finite")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub constraints: Vec<LinearConstraint>,
}

impl LpProblem {
    pub fn new(objective: Vec<f64>) -> Self {
        LpProblem { objective, constraints: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.objective.len()
    }

    pub fn validate(&self) -> Result<(), LpError> {
        if let Some(c) = self.objective.iter().find(|c| !c.is_finite()) {
            return Err(LpError::InvalidConstraint {
                index: usize::MAX,
                reason: format!("objective coefficient {c} is not finite"),
            });
        }
        for (k, c) in self.constraints.iter().enumerate() {
            c.validate(self.n(), k)?;
        }
        Ok(())
    }

    /// Plain-text dump in CPLEX LP syntax, readable by most external solvers.
    pub fn to_lp_text(&self) -> String {
        fn linear(out: &mut String, terms: impl Iterator<Item = (usize, f64)>) {
            let mut first = true;
            for (i, a) in terms {
                match (first, a < 0.0) {
                    (true, false) => {}
                    (true, true) => out.push_str("- "),
                    (false, false) => out.push_str(" + "),
                    (false, true) => out.push_str(" - "),
                }
                let _ = write!(out, "{} x{i}", a.abs());
                first = false;
            }
            if first {
                out.push_str("0 x0");
            }
        }
        let mut out = String::from("Minimize\n obj: ");
        linear(&mut out, self.objective.iter().copied().enumerate());
        out.push_str("\nSubject To\n");
        for (k, c) in self.constraints.iter().enumerate() {
            let _ = write!(out, " c{k}: ");
            linear(&mut out, c.terms.iter().copied());
            let _ = writeln!(out, " <= {}", c.rhs);
        }
        out.push_str("Bounds\n");
        for i in 0..self.n() {
            let _ = writeln!(out, " 0 <= x{i} <= 1");
        }
        out.push_str("End\n");
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpOptions {
    /// Primal feasibility tolerance.
    pub feas_tol: f64,
    /// Dual feasibility (optimality) tolerance.
    pub opt_tol: f64,
    /// Smallest pivot element accepted by the ratio tests.
    pub pivot_tol: f64,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub bland_after: usize,
    pub max_pivots: usize,
    /// Basis updates between refactorizations (scaled up for large bases).
    pub refactor_interval: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            feas_tol: 1e-9,
            opt_tol: 1e-9,
            pivot_tol: 1e-10,
            bland_after: 50,
            max_pivots: 500_000,
            refactor_interval: 100,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    IterationLimit,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective_value: f64,
    pub basis: Basis,
    pub status: LpStatus,
    /// Simplex pivots spent by the call that produced this solution.
    pub pivots: usize,
}

/// Solves from the slack basis with every structural variable at the bound
/// its cost prefers.
pub fn solve(problem: &LpProblem, opts: &LpOptions) -> Result<LpSolution, LpError> {
    let mut engine = BoundedSimplex::from_problem(problem, *opts)?;
    Ok(engine.solve())
}

/// Re-solves `problem` plus `new`. With `warm` the previous basis is kept and
/// the new rows enter with their slacks basic; otherwise the combined
/// problem is solved from scratch.
pub fn resolve_with_new_constraints(
    problem: &LpProblem,
    previous: &LpSolution,
    new: &[LinearConstraint],
    warm: bool,
    opts: &LpOptions,
) -> Result<LpSolution, LpError> {
    if warm {
        let mut engine = BoundedSimplex::from_problem_and_basis(problem, &previous.basis, *opts)?;
        engine.add_constraints(new)?;
        Ok(engine.solve())
    } else {
        let mut combined = problem.clone();
        combined.constraints.extend_from_slice(new);
        solve(&combined, opts)
    }
}

/// Rank of the constraints (box sides included) that hold with equality at
/// `x`. A basic feasible point of an `n`-dimensional problem has rank `n`.
pub fn active_constraint_rank(problem: &LpProblem, x: &[f64], tol: f64) -> usize {
    let n = problem.n();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, &v) in x.iter().enumerate() {
        if v.abs() <= tol || (v - 1.0).abs() <= tol {
            let mut r = vec![0.0; n];
            r[i] = 1.0;
            rows.push(r);
        }
    }
    for c in &problem.constraints {
        if c.violation(x).abs() <= tol {
            let mut r = vec![0.0; n];
            for &(i, a) in &c.terms {
                r[i] = a;
            }
            rows.push(r);
        }
    }
    dense_rank(rows, n)
}

fn dense_rank(mut rows: Vec<Vec<f64>>, n: usize) -> usize {
    let mut rank = 0;
    for col in 0..n {
        let Some((p, _)) = rows
            .iter()
            .enumerate()
            .skip(rank)
            .map(|(r, row)| (r, row[col].abs()))
            .filter(|&(_, v)| v > 1e-9)
            .max_by(|a, b| a.1.total_cmp(&b.1))
        else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            let f = row[col] / pivot[col];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot) {
                    *v -= f * pv;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lp_text_dump() {
        let mut p = LpProblem::new(vec![1.0, -2.0]);
        p.constraints.push(LinearConstraint::new(vec![(0, 1.0), (1, -1.0)], 0.0));
        let text = p.to_lp_text();
        assert!(text.contains("obj: 1 x0 - 2 x1"));
        assert!(text.contains("c0: 1 x0 - 1 x1 <= 0"));
        assert!(text.contains("0 <= x1 <= 1"));
    }

    #[test]
    fn validation_catches_bad_constraints() {
        let mut p = LpProblem::new(vec![1.0, 1.0]);
        p.constraints.push(LinearConstraint::new(vec![(0, 1.0), (0, 1.0)], 1.0));
        assert!(p.validate().is_err());
        p.constraints[0] = LinearConstraint::new(vec![(2, 1.0)], 1.0);
        assert!(p.validate().is_err());
        p.constraints[0] = LinearConstraint::new(vec![], 1.0);
        assert!(p.validate().is_err());
    }

    #[test]
    fn rank_of_box_corner() {
        let p = LpProblem::new(vec![1.0, 1.0, 1.0]);
        assert_eq!(active_constraint_rank(&p, &[0.0, 1.0, 0.0], 1e-9), 3);
        assert_eq!(active_constraint_rank(&p, &[0.0, 0.5, 0.0], 1e-9), 2);
    }
}
