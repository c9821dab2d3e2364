//! Bounded-variable revised simplex with an explicit dense basis inverse.
//!
//! Every row `a . x <= b` gets a slack `s >= 0`, so the equality system is
//! `A x + s = b`. Structural variables live in `[0, 1]`. Variable `j < n` is
//! structural, `n + i` is the slack of row `i`.
//!
//! Because every structural variable is boxed, the slack basis with each
//! `x_j` at the bound its cost prefers is dual feasible, and so is an optimal
//! basis extended by the slacks of freshly added rows. Both cold and warm
//! solves therefore run the dual simplex until primal feasibility; a primal
//! pass then removes any dual infeasibility left by round-off.

use super::{LinearConstraint, LpOptions, LpProblem, LpSolution, LpStatus};
use crate::error::LpError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum VarState {
    Basic(usize),
    Lower,
    Upper,
}

/// Opaque record of a basis, used to warm-start a later solve.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Basis {
    head: Vec<usize>,
    at_upper: Vec<bool>,
    n: usize,
}

impl Basis {
    pub fn rows(&self) -> usize {
        self.head.len()
    }
}

enum Phase {
    Done,
    Infeasible,
    Limit,
}

#[derive(Clone, Debug)]
pub struct BoundedSimplex {
    n: usize,
    cost: Vec<f64>,
    rows: Vec<Vec<(usize, f64)>>,
    rhs: Vec<f64>,
    /// Per structural variable: (row, coefficient).
    cols: Vec<Vec<(usize, f64)>>,
    head: Vec<usize>,
    state: Vec<VarState>,
    value: Vec<f64>,
    reduced: Vec<f64>,
    /// Row-major `k x k` inverse of the basis matrix.
    binv: Vec<f64>,
    opts: LpOptions,
    updates: usize,
    pivots_total: usize,
    // scratch
    rho: Vec<f64>,
    alpha_row: Vec<f64>,
    alpha_col: Vec<f64>,
}

impl BoundedSimplex {
    /// Box-only problem; the optimum is the vertex picked by the signs of the
    /// costs (lower bound on ties).
    pub fn new(objective: &[f64], opts: LpOptions) -> Result<Self, LpError> {
        if let Some(c) = objective.iter().find(|c| !c.is_finite()) {
            return Err(LpError::InvalidConstraint {
                index: usize::MAX,
                reason: format!("objective coefficient {c} is not finite"),
            });
        }
        let n = objective.len();
        let state: Vec<VarState> = objective
            .iter()
            .map(|&c| if c < 0.0 { VarState::Upper } else { VarState::Lower })
            .collect();
        let value = state.iter().map(|s| if *s == VarState::Upper { 1.0 } else { 0.0 }).collect();
        Ok(BoundedSimplex {
            n,
            cost: objective.to_vec(),
            rows: Vec::new(),
            rhs: Vec::new(),
            cols: vec![Vec::new(); n],
            head: Vec::new(),
            state,
            value,
            reduced: objective.to_vec(),
            binv: Vec::new(),
            opts,
            updates: 0,
            pivots_total: 0,
            rho: Vec::new(),
            alpha_row: Vec::new(),
            alpha_col: Vec::new(),
        })
    }

    pub fn from_problem(problem: &LpProblem, opts: LpOptions) -> Result<Self, LpError> {
        problem.validate()?;
        let mut s = Self::new(&problem.objective, opts)?;
        s.add_constraints(&problem.constraints)?;
        Ok(s)
    }

    /// Rebuilds the engine for `problem` at a stored basis. The basis must
    /// have been taken from a problem with the same rows.
    pub fn from_problem_and_basis(
        problem: &LpProblem,
        basis: &Basis,
        opts: LpOptions,
    ) -> Result<Self, LpError> {
        problem.validate()?;
        if basis.n != problem.n() || basis.head.len() != problem.constraints.len() {
            return Err(LpError::BasisMismatch);
        }
        let mut s = Self::new(&problem.objective, opts)?;
        s.add_constraints(&problem.constraints)?;
        let n = s.n;
        let k = s.rows.len();
        if basis.head.iter().any(|&j| j >= n + k) {
            return Err(LpError::BasisMismatch);
        }
        for j in 0..n + k {
            s.state[j] = if j < n && basis.at_upper[j] { VarState::Upper } else { VarState::Lower };
        }
        for (p, &j) in basis.head.iter().enumerate() {
            if matches!(s.state[j], VarState::Basic(_)) {
                return Err(LpError::BasisMismatch);
            }
            s.state[j] = VarState::Basic(p);
        }
        s.head = basis.head.clone();
        if !s.refactor() {
            s.reset_to_slack_basis();
        } else {
            s.repair_dual_feasibility();
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_constraints(&self) -> usize {
        self.rows.len()
    }

    /// Pivots performed over the lifetime of this engine.
    pub fn total_pivots(&self) -> usize {
        self.pivots_total
    }

    pub fn basis(&self) -> Basis {
        Basis {
            head: self.head.clone(),
            at_upper: (0..self.n).map(|j| self.state[j] == VarState::Upper).collect(),
            n: self.n,
        }
    }

    /// Current structural values clamped to the box.
    pub fn x(&self) -> Vec<f64> {
        self.value[..self.n].iter().map(|v| v.clamp(0.0, 1.0)).collect()
    }

    pub fn objective_value(&self) -> f64 {
        self.cost.iter().zip(&self.value).map(|(c, v)| c * v).sum()
    }

    fn k(&self) -> usize {
        self.rows.len()
    }

    fn upper(&self, j: usize) -> f64 {
        if j < self.n {
            1.0
        } else {
            f64::INFINITY
        }
    }

    /// Appends rows; their slacks enter the basis at value `b - a . x`, which
    /// leaves dual feasibility untouched.
    pub fn add_constraints(&mut self, new: &[LinearConstraint]) -> Result<(), LpError> {
        if new.is_empty() {
            return Ok(());
        }
        let k0 = self.k();
        for (offset, c) in new.iter().enumerate() {
            c.validate(self.n, k0 + offset)?;
        }
        let k1 = k0 + new.len();
        let mut binv = vec![0.0; k1 * k1];
        for p in 0..k0 {
            binv[p * k1..p * k1 + k0].copy_from_slice(&self.binv[p * k0..(p + 1) * k0]);
        }
        for (offset, c) in new.iter().enumerate() {
            let r = k0 + offset;
            // row r of the inverse: -(w B^-1) in the old block, 1 on the diagonal
            for &(i, a) in &c.terms {
                if let VarState::Basic(p) = self.state[i] {
                    let src = &self.binv[p * k0..(p + 1) * k0];
                    let dst = &mut binv[r * k1..r * k1 + k0];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d -= a * s;
                    }
                }
            }
            binv[r * k1 + r] = 1.0;
            let slack_value = c.rhs - c.lhs(&self.value[..self.n]);
            for &(i, a) in &c.terms {
                self.cols[i].push((r, a));
            }
            self.rows.push(c.terms.clone());
            self.rhs.push(c.rhs);
            self.head.push(self.n + r);
            self.state.push(VarState::Basic(r));
            self.value.push(slack_value);
            self.reduced.push(0.0);
        }
        self.binv = binv;
        Ok(())
    }

    /// Runs the dual simplex to primal feasibility, then the primal simplex
    /// to clear dual infeasibilities. Returns the solution the engine ends at.
    pub fn solve(&mut self) -> LpSolution {
        let start = self.pivots_total;
        let mut status = LpStatus::Optimal;
        let mut rounds = 0;
        loop {
            rounds += 1;
            match self.dual_phase() {
                Phase::Infeasible => {
                    status = LpStatus::Infeasible;
                    break;
                }
                Phase::Limit => {
                    status = LpStatus::IterationLimit;
                    break;
                }
                Phase::Done => {}
            }
            match self.primal_phase() {
                Phase::Limit => {
                    status = LpStatus::IterationLimit;
                    break;
                }
                Phase::Infeasible | Phase::Done => {}
            }
            // recompute values and duals before declaring optimality; a large
            // residual means the inverse itself has drifted
            self.recompute_values();
            self.recompute_reduced();
            if self.row_residual() > self.opts.feas_tol && !self.refactor() {
                self.reset_to_slack_basis();
                continue;
            }
            if self.leaving_row(false).is_none() && self.entering_primal(false).is_none() {
                break;
            }
            if rounds > 20 {
                status = LpStatus::IterationLimit;
                break;
            }
        }
        LpSolution {
            x: self.x(),
            objective_value: self.objective_value(),
            basis: self.basis(),
            status,
            pivots: self.pivots_total - start,
        }
    }

    fn primal_infeasibility(&self, p: usize) -> f64 {
        let j = self.head[p];
        let v = self.value[j];
        if v < -self.opts.feas_tol {
            -v
        } else if v > self.upper(j) + self.opts.feas_tol {
            v - self.upper(j)
        } else {
            0.0
        }
    }

    fn leaving_row(&self, bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for p in 0..self.k() {
            let inf = self.primal_infeasibility(p);
            if inf <= 0.0 {
                continue;
            }
            let better = match best {
                None => true,
                Some((q, b)) => {
                    if bland {
                        self.head[p] < self.head[q]
                    } else {
                        inf > b
                    }
                }
            };
            if better {
                best = Some((p, inf));
            }
        }
        best.map(|(p, _)| p)
    }

    fn load_binv_row(&mut self, r: usize) {
        let k = self.k();
        self.rho.clear();
        self.rho.extend_from_slice(&self.binv[r * k..(r + 1) * k]);
    }

    /// `alpha_row[j] = (B^-1 A)_{r j}` for every nonbasic `j`, from `rho`.
    fn compute_alpha_row(&mut self) {
        let n = self.n;
        let k = self.k();
        self.alpha_row.clear();
        self.alpha_row.resize(n + k, 0.0);
        for j in 0..n {
            if !matches!(self.state[j], VarState::Basic(_)) {
                self.alpha_row[j] = self.cols[j].iter().map(|&(i, a)| self.rho[i] * a).sum();
            }
        }
        for i in 0..k {
            if !matches!(self.state[n + i], VarState::Basic(_)) {
                self.alpha_row[n + i] = self.rho[i];
            }
        }
    }

    /// `alpha_col = B^-1 a_q`.
    fn compute_alpha_col(&mut self, q: usize) {
        let k = self.k();
        self.alpha_col.clear();
        self.alpha_col.resize(k, 0.0);
        if q < self.n {
            for &(i, a) in &self.cols[q] {
                for p in 0..k {
                    self.alpha_col[p] += self.binv[p * k + i] * a;
                }
            }
        } else {
            let i = q - self.n;
            for p in 0..k {
                self.alpha_col[p] = self.binv[p * k + i];
            }
        }
    }

    fn dual_phase(&mut self) -> Phase {
        let mut degenerate_run = 0usize;
        loop {
            if self.pivots_total >= self.opts.max_pivots {
                return Phase::Limit;
            }
            if self.updates >= self.refactor_threshold() && !self.refactor() {
                self.reset_to_slack_basis();
            }
            let bland = degenerate_run >= self.opts.bland_after;
            let Some(r) = self.leaving_row(bland) else {
                return Phase::Done;
            };
            let leaving = self.head[r];
            let below = self.value[leaving] < 0.0;
            let target = if below { 0.0 } else { self.upper(leaving) };

            self.load_binv_row(r);
            self.compute_alpha_row();

            // entering candidates keep the reduced costs sign-feasible; the
            // two-pass test trades a tolerance of slack for a larger pivot
            let tol = self.opts.pivot_tol;
            let eligible = |j: usize, a: f64, st: VarState| -> bool {
                match st {
                    VarState::Basic(_) => false,
                    VarState::Lower => {
                        if below {
                            a < -tol
                        } else {
                            a > tol
                        }
                    }
                    VarState::Upper => {
                        j < self.n && if below { a > tol } else { a < -tol }
                    }
                }
            };
            let total = self.n + self.k();
            let mut bound = f64::INFINITY;
            for j in 0..total {
                let a = self.alpha_row[j];
                if eligible(j, a, self.state[j]) {
                    let d = self.reduced[j].abs();
                    bound = bound.min((d + self.opts.opt_tol) / a.abs());
                }
            }
            if bound == f64::INFINITY {
                return Phase::Infeasible;
            }
            let mut entering: Option<(usize, f64, f64)> = None;
            if bland {
                let ratio_of = |j: usize| self.sign_feasible_reduced(j).abs() / self.alpha_row[j].abs();
                let min_ratio = (0..total)
                    .filter(|&j| eligible(j, self.alpha_row[j], self.state[j]))
                    .map(ratio_of)
                    .fold(f64::INFINITY, f64::min);
                entering = (0..total)
                    .filter(|&j| eligible(j, self.alpha_row[j], self.state[j]))
                    .find(|&j| ratio_of(j) <= min_ratio + 1e-12)
                    .map(|j| (j, self.alpha_row[j], ratio_of(j)));
            } else {
                for j in 0..total {
                    let a = self.alpha_row[j];
                    if !eligible(j, a, self.state[j]) {
                        continue;
                    }
                    let ratio = self.sign_feasible_reduced(j).abs() / a.abs();
                    if ratio <= bound && entering.is_none_or(|(_, qa, _)| a.abs() > qa.abs()) {
                        entering = Some((j, a, ratio));
                    }
                }
            }
            let Some((q, _, ratio)) = entering else {
                return Phase::Infeasible;
            };

            self.compute_alpha_col(q);
            let pivot = self.alpha_col[r];
            if (pivot - self.alpha_row[q]).abs() > 1e-7 * (1.0 + pivot.abs()) || pivot.abs() < tol {
                // stale inverse: refactor and retry this iteration
                if self.updates == 0 || !self.refactor() {
                    self.reset_to_slack_basis();
                }
                continue;
            }

            let step = (self.value[leaving] - target) / pivot;
            let theta_dual = self.reduced[q] / pivot;
            self.apply_pivot(r, q, step, theta_dual, target);
            if ratio <= 1e-12 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
        }
    }

    /// Reduced cost with the wrong-signed round-off clipped to zero.
    fn sign_feasible_reduced(&self, j: usize) -> f64 {
        let d = self.reduced[j];
        match self.state[j] {
            VarState::Lower => d.max(0.0),
            VarState::Upper => d.min(0.0),
            VarState::Basic(_) => 0.0,
        }
    }

    /// Moves `q` into basic position `r`; the leaving variable settles at
    /// `target`. Requires `alpha_row` and `alpha_col` for this pivot.
    fn apply_pivot(&mut self, r: usize, q: usize, step: f64, theta_dual: f64, target: f64) {
        let k = self.k();
        let n = self.n;
        let leaving = self.head[r];

        for p in 0..k {
            let j = self.head[p];
            self.value[j] -= self.alpha_col[p] * step;
        }
        self.value[q] += step;
        self.value[leaving] = target;

        for j in 0..n + k {
            if !matches!(self.state[j], VarState::Basic(_)) {
                self.reduced[j] -= theta_dual * self.alpha_row[j];
            }
        }
        self.reduced[leaving] = -theta_dual;
        self.reduced[q] = 0.0;

        self.state[leaving] = if target == 0.0 { VarState::Lower } else { VarState::Upper };
        self.state[q] = VarState::Basic(r);
        self.head[r] = q;

        let pivot = self.alpha_col[r];
        let (before, rest) = self.binv.split_at_mut(r * k);
        let (pivot_row, after) = rest.split_at_mut(k);
        for v in pivot_row.iter_mut() {
            *v /= pivot;
        }
        for (p, row) in before.chunks_exact_mut(k).chain(after.chunks_exact_mut(k)).enumerate() {
            let p = if p < r { p } else { p + 1 };
            let f = self.alpha_col[p];
            if f != 0.0 {
                for (v, pr) in row.iter_mut().zip(pivot_row.iter()) {
                    *v -= f * pr;
                }
            }
        }
        self.updates += 1;
        self.pivots_total += 1;
    }

    fn entering_primal(&self, bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.n + self.k() {
            let d = self.reduced[j];
            let gain = match self.state[j] {
                VarState::Lower if d < -self.opts.opt_tol => -d,
                VarState::Upper if d > self.opts.opt_tol => d,
                _ => continue,
            };
            let better = match best {
                None => true,
                Some((_, g)) => !bland && gain > g,
            };
            if better {
                best = Some((j, gain));
            }
            if bland {
                break;
            }
        }
        best.map(|(j, _)| j)
    }

    fn primal_phase(&mut self) -> Phase {
        let mut degenerate_run = 0usize;
        loop {
            if self.pivots_total >= self.opts.max_pivots {
                return Phase::Limit;
            }
            if self.updates >= self.refactor_threshold() && !self.refactor() {
                self.reset_to_slack_basis();
                return Phase::Done;
            }
            let bland = degenerate_run >= self.opts.bland_after;
            let Some(q) = self.entering_primal(bland) else {
                return Phase::Done;
            };
            let dir = if self.state[q] == VarState::Lower { 1.0 } else { -1.0 };
            self.compute_alpha_col(q);

            // x_B moves by -dir * t * alpha_col
            let mut t_max = self.upper(q);
            let mut leave: Option<(usize, f64)> = None;
            for p in 0..self.k() {
                let a = dir * self.alpha_col[p];
                if a.abs() <= self.opts.pivot_tol {
                    continue;
                }
                let j = self.head[p];
                let v = self.value[j];
                let (t, target) = if a > 0.0 {
                    ((v - 0.0).max(0.0) / a, 0.0)
                } else {
                    let ub = self.upper(j);
                    if ub.is_infinite() {
                        continue;
                    }
                    ((ub - v).max(0.0) / -a, ub)
                };
                let better = match leave {
                    None => t < t_max,
                    Some((lp, _)) => {
                        t < t_max - 1e-12
                            || (t <= t_max + 1e-12
                                && if bland {
                                    self.head[p] < self.head[lp]
                                } else {
                                    self.alpha_col[p].abs() > self.alpha_col[lp].abs()
                                })
                    }
                };
                if better {
                    t_max = t_max.min(t);
                    leave = Some((p, target));
                }
            }
            if t_max.is_infinite() {
                // unbounded direction cannot happen with boxed structurals
                return Phase::Infeasible;
            }
            match leave {
                None => {
                    // bound flip of the entering variable
                    let t = t_max;
                    for p in 0..self.k() {
                        let j = self.head[p];
                        self.value[j] -= dir * t * self.alpha_col[p];
                    }
                    self.value[q] = if dir > 0.0 { 1.0 } else { 0.0 };
                    self.state[q] = if dir > 0.0 { VarState::Upper } else { VarState::Lower };
                    self.pivots_total += 1;
                    degenerate_run = 0;
                }
                Some((r, target)) => {
                    self.load_binv_row(r);
                    self.compute_alpha_row();
                    let theta_dual = self.reduced[q] / self.alpha_col[r];
                    self.apply_pivot(r, q, dir * t_max, theta_dual, target);
                    if t_max <= 1e-12 {
                        degenerate_run += 1;
                    } else {
                        degenerate_run = 0;
                    }
                }
            }
        }
    }

    /// Largest `|a . x + s - b|` over the rows.
    fn row_residual(&self) -> f64 {
        let n = self.n;
        self.rows
            .iter()
            .enumerate()
            .map(|(i, terms)| {
                let lhs: f64 = terms.iter().map(|&(j, a)| a * self.value[j]).sum();
                (lhs + self.value[n + i] - self.rhs[i]).abs()
            })
            .fold(0.0, f64::max)
    }

    fn refactor_threshold(&self) -> usize {
        self.opts.refactor_interval.max(self.k() / 2)
    }

    /// Recomputes the inverse, basic values and reduced costs from scratch.
    /// Returns false if the basis matrix is singular.
    fn refactor(&mut self) -> bool {
        let k = self.k();
        let n = self.n;
        // dense B, row-major; column p is the column of head[p]
        let mut b = vec![0.0; k * k];
        for (p, &j) in self.head.iter().enumerate() {
            if j < n {
                for &(i, a) in &self.cols[j] {
                    b[i * k + p] = a;
                }
            } else {
                b[(j - n) * k + p] = 1.0;
            }
        }
        match invert(&mut b, k) {
            Some(inv) => self.binv = inv,
            None => return false,
        }
        self.updates = 0;
        self.recompute_values();
        self.recompute_reduced();
        true
    }

    fn recompute_values(&mut self) {
        let k = self.k();
        let n = self.n;
        for j in 0..n + k {
            match self.state[j] {
                VarState::Lower => self.value[j] = 0.0,
                VarState::Upper => self.value[j] = 1.0,
                VarState::Basic(_) => {}
            }
        }
        // residual rhs: b - sum over nonbasic structurals
        let mut resid = self.rhs.clone();
        for j in 0..n {
            if self.state[j] == VarState::Upper {
                for &(i, a) in &self.cols[j] {
                    resid[i] -= a;
                }
            }
        }
        for p in 0..k {
            let row = &self.binv[p * k..(p + 1) * k];
            let v: f64 = row.iter().zip(&resid).map(|(x, y)| x * y).sum();
            self.value[self.head[p]] = v;
        }
    }

    fn recompute_reduced(&mut self) {
        let k = self.k();
        let n = self.n;
        // y = c_B^T B^-1
        let mut y = vec![0.0; k];
        for p in 0..k {
            let c = self.basic_cost(p);
            if c != 0.0 {
                let row = &self.binv[p * k..(p + 1) * k];
                for (yi, b) in y.iter_mut().zip(row) {
                    *yi += c * b;
                }
            }
        }
        for j in 0..n {
            self.reduced[j] = match self.state[j] {
                VarState::Basic(_) => 0.0,
                _ => self.cost[j] - self.cols[j].iter().map(|&(i, a)| y[i] * a).sum::<f64>(),
            };
        }
        for i in 0..k {
            self.reduced[n + i] = match self.state[n + i] {
                VarState::Basic(_) => 0.0,
                _ => -y[i],
            };
        }
    }

    fn basic_cost(&self, p: usize) -> f64 {
        let j = self.head[p];
        if j < self.n {
            self.cost[j]
        } else {
            0.0
        }
    }

    /// Flips nonbasic structurals to the bound their reduced cost prefers.
    /// Falls back to the slack basis if a nonbasic slack is dual infeasible.
    fn repair_dual_feasibility(&mut self) {
        let mut flipped = false;
        for j in 0..self.n {
            let d = self.reduced[j];
            match self.state[j] {
                VarState::Lower if d < -self.opts.opt_tol => {
                    self.state[j] = VarState::Upper;
                    flipped = true;
                }
                VarState::Upper if d > self.opts.opt_tol => {
                    self.state[j] = VarState::Lower;
                    flipped = true;
                }
                _ => {}
            }
        }
        let n = self.n;
        if (0..self.k()).any(|i| {
            !matches!(self.state[n + i], VarState::Basic(_)) && self.reduced[n + i] < -self.opts.opt_tol
        }) {
            self.reset_to_slack_basis();
            return;
        }
        if flipped {
            self.recompute_values();
        }
    }

    fn reset_to_slack_basis(&mut self) {
        let k = self.k();
        let n = self.n;
        for j in 0..n {
            self.state[j] = if self.cost[j] < 0.0 { VarState::Upper } else { VarState::Lower };
        }
        for i in 0..k {
            self.state[n + i] = VarState::Basic(i);
        }
        self.head = (0..k).map(|i| n + i).collect();
        self.binv = vec![0.0; k * k];
        for i in 0..k {
            self.binv[i * k + i] = 1.0;
        }
        self.updates = 0;
        self.recompute_values();
        self.recompute_reduced();
    }
}

/// Gauss-Jordan inverse with partial pivoting of a row-major `k x k` matrix.
fn invert(a: &mut [f64], k: usize) -> Option<Vec<f64>> {
    let mut inv = vec![0.0; k * k];
    for i in 0..k {
        inv[i * k + i] = 1.0;
    }
    for col in 0..k {
        let (p, best) = (col..k)
            .map(|r| (r, a[r * k + col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))?;
        if best < 1e-11 {
            return None;
        }
        if p != col {
            for c in 0..k {
                a.swap(p * k + c, col * k + c);
                inv.swap(p * k + c, col * k + c);
            }
        }
        let d = a[col * k + col];
        for c in 0..k {
            a[col * k + c] /= d;
            inv[col * k + c] /= d;
        }
        for r in 0..k {
            if r == col {
                continue;
            }
            let f = a[r * k + col];
            if f == 0.0 {
                continue;
            }
            for c in 0..k {
                a[r * k + c] -= f * a[col * k + c];
                inv[r * k + c] -= f * inv[col * k + c];
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{solve, LinearConstraint, LpProblem};

    fn opts() -> LpOptions {
        LpOptions::default()
    }

    #[test]
    fn box_only() {
        let s = solve(&LpProblem::new(vec![1.0]), &opts()).unwrap();
        assert_eq!(s.x, vec![0.0]);
        assert_eq!(s.objective_value, 0.0);
        let s = solve(&LpProblem::new(vec![-1.0]), &opts()).unwrap();
        assert_eq!(s.x, vec![1.0]);
        assert_eq!(s.objective_value, -1.0);
        assert_eq!(s.status, LpStatus::Optimal);
    }

    #[test]
    fn infeasible_detected() {
        let mut p = LpProblem::new(vec![1.0, 1.0]);
        // x0 + x1 >= 3 is impossible in the box
        p.constraints.push(LinearConstraint::new(vec![(0, -1.0), (1, -1.0)], -3.0));
        assert_eq!(solve(&p, &opts()).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn inverse_of_permutation() {
        let mut a = vec![0.0, 1.0, 1.0, 0.0];
        let inv = invert(&mut a, 2).unwrap();
        assert_eq!(inv, vec![0.0, 1.0, 1.0, 0.0]);
        let mut s = vec![1.0, 1.0, 1.0, 1.0];
        assert!(invert(&mut s, 2).is_none());
    }

    #[test]
    fn warm_start_from_engine_matches_cold() {
        let mut engine = BoundedSimplex::new(&[-1.0, 0.1, 0.1], opts()).unwrap();
        let first = engine.solve();
        assert_eq!(first.x, vec![1.0, 0.0, 0.0]);
        engine
            .add_constraints(&[LinearConstraint::new(vec![(0, 1.0), (1, -1.0), (2, -1.0)], 0.0)])
            .unwrap();
        let warm = engine.solve();
        let mut p = LpProblem::new(vec![-1.0, 0.1, 0.1]);
        p.constraints.push(LinearConstraint::new(vec![(0, 1.0), (1, -1.0), (2, -1.0)], 0.0));
        let cold = solve(&p, &opts()).unwrap();
        assert!((warm.objective_value - cold.objective_value).abs() < 1e-12);
    }
}
