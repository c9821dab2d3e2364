//! Adaptive LP decoding.
//!
//! The first LP keeps only one side of each box constraint, the side the
//! channel prefers, so its optimum is the hard decision. Each round finds
//! every violated parity constraint at the current optimum, adds them all
//! and re-solves. When no cut is left the optimum is that of the full
//! relaxation; it is reached in at most `n` rounds.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use crate::channel::LlrVector;
use crate::code::{CheckRow, ParityCheckCode};
use crate::cuts::{Cut, CutSearcher, DEFAULT_CUT_EPSILON};
use crate::error::DecodeError;
use crate::lp::{
    BoundedSimplex, CheckId, LinearConstraint, LpOptions, LpSolution, LpStatus, Provenance,
};

/// Largest check degree accepted by [`decode_standard`] (`2^13` constraints
/// per check).
pub const MAX_STANDARD_DEGREE: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecodeOptions {
    /// Cap on LP solves in the adaptive loop; `None` means `n`.
    pub max_iterations: Option<usize>,
    pub warm_start: bool,
    pub epsilon_int: f64,
    pub cut_epsilon: f64,
    /// Cap on cuts added per round; `None` adds every cut found.
    pub max_cuts_per_iteration: Option<usize>,
    pub lp: LpOptions,
}

impl Default for DecodeOptions {
    fn default() -> Self {
        DecodeOptions {
            max_iterations: None,
            warm_start: true,
            epsilon_int: 1e-6,
            cut_epsilon: DEFAULT_CUT_EPSILON,
            max_cuts_per_iteration: None,
            lp: LpOptions::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum DecodeStatus {
    MlCodeword,
    Pseudocodeword,
    LimitExceeded,
}

impl DecodeStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            DecodeStatus::MlCodeword => "MlCodeword",
            DecodeStatus::Pseudocodeword => "Pseudocodeword",
            DecodeStatus::LimitExceeded => "LimitExceeded",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeOutcome {
    pub x: Vec<f64>,
    pub objective_value: f64,
    pub integral: bool,
    pub status: DecodeStatus,
    /// LP solves of the adaptive loop, the first one included.
    pub iterations: usize,
    pub cuts_added_total: usize,
    /// Parity constraints in the final LP.
    pub final_parity_constraints: usize,
    /// Parity constraints when the adaptive loop stopped, before any RPC
    /// rounds.
    pub adaptive_parity_constraints: usize,
    pub lp_pivots_total: usize,
    /// Pivots of each LP solve, in order.
    pub solve_pivots: Vec<usize>,
    /// Optimal objective after each LP solve.
    pub objective_trace: Vec<f64>,
    /// Cuts added after each LP solve (zero for the last one when converged).
    pub cuts_per_iteration: Vec<usize>,
    /// Cuts found again after they had already been added; nonzero only when
    /// round-off leaves a constraint marginally violated.
    pub repeated_cuts: usize,
    pub rpc_cuts_added: usize,
    pub rpc_cycle_trials: usize,
    pub rpc_repeated_collections: usize,
    pub lp_solves: usize,
    pub elapsed: Duration,
}

impl DecodeOutcome {
    /// `x` rounded to the nearest bit.
    pub fn hard_bits(&self) -> Vec<u8> {
        self.x.iter().map(|&v| u8::from(v >= 0.5)).collect()
    }

    /// Number of coordinates within `eps` of 0 or 1.
    pub fn integral_count(&self, eps: f64) -> usize {
        self.x.iter().filter(|&&v| is_integral(v, eps)).count()
    }
}

pub(crate) fn is_integral(v: f64, eps: f64) -> bool {
    (v - v.round()).abs() <= eps
}

/// The `n` bound constraints of the first LP: `x_i >= 0` (written
/// `-x_i <= 0`) when `gamma_i >= 0`, else `x_i <= 1`.
pub fn initial_constraints(gamma: &LlrVector) -> Vec<LinearConstraint> {
    gamma
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, &g)| {
            if g >= 0.0 {
                LinearConstraint::new(vec![(i, -1.0)], 0.0)
            } else {
                LinearConstraint::new(vec![(i, 1.0)], 1.0)
            }
        })
        .collect()
}

/// True when at least `n - q` coordinates of `outcome.x` are integral.
pub fn verify_pseudocodeword_integrality(outcome: &DecodeOutcome, q: usize, epsilon_int: f64) -> bool {
    outcome.integral_count(epsilon_int) >= outcome.x.len().saturating_sub(q)
}

/// Cutting-plane LP state shared by the adaptive and RPC decoders.
pub(crate) struct CuttingPlaneLp<'a> {
    code: &'a ParityCheckCode,
    gamma: Vec<f64>,
    opts: DecodeOptions,
    engine: BoundedSimplex,
    constraints: Vec<LinearConstraint>,
    seen: HashSet<Provenance>,
    extra_checks: Vec<CheckRow>,
    extra_seen: HashSet<CheckRow>,
    searcher: CutSearcher,
    last: LpSolution,
    pub(crate) solve_pivots: Vec<usize>,
    pub(crate) objective_trace: Vec<f64>,
    pub(crate) cuts_per_iteration: Vec<usize>,
    pub(crate) cuts_added: usize,
    pub(crate) repeated_cuts: usize,
    started: Instant,
}

pub(crate) enum Round {
    Converged,
    Limit,
}

impl<'a> CuttingPlaneLp<'a> {
    pub(crate) fn new(
        code: &'a ParityCheckCode,
        gamma: &LlrVector,
        opts: DecodeOptions,
    ) -> Result<Self, DecodeError> {
        if gamma.len() != code.n() {
            return Err(DecodeError::DimensionMismatch { n: code.n(), gamma: gamma.len() });
        }
        if opts.max_iterations == Some(0) {
            return Err(DecodeError::ZeroIterations);
        }
        let started = Instant::now();
        let mut engine = BoundedSimplex::new(gamma.as_slice(), opts.lp)?;
        let last = engine.solve();
        let mut s = CuttingPlaneLp {
            code,
            gamma: gamma.as_slice().to_vec(),
            opts,
            engine,
            constraints: Vec::new(),
            seen: HashSet::new(),
            extra_checks: Vec::new(),
            extra_seen: HashSet::new(),
            searcher: CutSearcher::new(opts.cut_epsilon),
            last,
            solve_pivots: Vec::new(),
            objective_trace: Vec::new(),
            cuts_per_iteration: Vec::new(),
            cuts_added: 0,
            repeated_cuts: 0,
            started,
        };
        s.record_solve();
        Ok(s)
    }

    fn record_solve(&mut self) {
        self.solve_pivots.push(self.last.pivots);
        self.objective_trace.push(self.last.objective_value);
    }

    pub(crate) fn x(&self) -> &[f64] {
        &self.last.x
    }

    pub(crate) fn lp_solves(&self) -> usize {
        self.solve_pivots.len()
    }

    pub(crate) fn parity_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub(crate) fn started(&self) -> Instant {
        self.started
    }

    /// Cuts at the current point over the code's rows and any redundant
    /// checks added so far.
    fn find_cuts(&mut self) -> Vec<Cut> {
        let x = self.last.x.clone();
        let mut cuts = self.searcher.find_all(self.code, &x);
        for row in &self.extra_checks {
            if let Some(c) = self.searcher.find_cut(&x, row.support(), CheckId::Redundant(row.clone())) {
                cuts.push(c);
            }
        }
        cuts
    }

    /// Adds the constraints of `cuts` that are new and re-solves. Returns
    /// the number actually added.
    pub(crate) fn add_cuts_and_resolve(&mut self, cuts: &[Cut]) -> Result<usize, DecodeError> {
        let mut fresh = Vec::new();
        for cut in cuts {
            let c = cut.to_constraint();
            let key = c.provenance.clone().expect("cut constraints carry provenance");
            if self.seen.insert(key) {
                fresh.push(c);
            } else {
                self.repeated_cuts += 1;
            }
        }
        if fresh.is_empty() {
            return Ok(0);
        }
        let added = fresh.len();
        self.cuts_added += added;
        self.constraints.extend(fresh.iter().cloned());
        if self.opts.warm_start {
            self.engine.add_constraints(&fresh)?;
        } else {
            self.engine = BoundedSimplex::new(&self.gamma, self.opts.lp)?;
            self.engine.add_constraints(&self.constraints)?;
        }
        self.last = self.engine.solve();
        self.record_solve();
        Ok(added)
    }

    /// Registers a redundant check so later rounds also separate its
    /// constraints.
    pub(crate) fn add_redundant_check(&mut self, row: CheckRow) {
        if self.extra_seen.insert(row.clone()) {
            self.extra_checks.push(row);
        }
    }

    /// Cutting-plane loop: alternate cut search and re-solve until no cut is
    /// left, `solve_cap` LP solves have been spent, or the LP fails.
    pub(crate) fn run_rounds(&mut self, solve_cap: usize) -> Result<Round, DecodeError> {
        loop {
            if self.last.status != LpStatus::Optimal {
                return Ok(Round::Limit);
            }
            let mut cuts = self.find_cuts();
            if let Some(cap) = self.opts.max_cuts_per_iteration {
                // keep the deepest cuts
                cuts.sort_by(|a, b| b.violation.total_cmp(&a.violation));
                cuts.truncate(cap.max(1));
            }
            if cuts.is_empty() {
                self.cuts_per_iteration.push(0);
                return Ok(Round::Converged);
            }
            if self.lp_solves() >= solve_cap {
                return Ok(Round::Limit);
            }
            let added = self.add_cuts_and_resolve(&cuts)?;
            if added == 0 {
                // every cut was already present: the LP point only violates
                // them by round-off
                self.cuts_per_iteration.push(0);
                return Ok(Round::Converged);
            }
            self.cuts_per_iteration.push(added);
        }
    }

    pub(crate) fn classify(&self) -> (bool, DecodeStatus) {
        let x = self.x();
        if x.iter().all(|&v| is_integral(v, self.opts.epsilon_int)) {
            let bits: Vec<u8> = x.iter().map(|&v| u8::from(v >= 0.5)).collect();
            if self.code.is_codeword(&bits) {
                return (true, DecodeStatus::MlCodeword);
            }
        }
        (false, DecodeStatus::Pseudocodeword)
    }

    pub(crate) fn outcome(&self, status: DecodeStatus, iterations: usize) -> DecodeOutcome {
        let (integral, _) = self.classify();
        DecodeOutcome {
            x: self.last.x.clone(),
            objective_value: self.gamma.iter().zip(&self.last.x).map(|(g, v)| g * v).sum(),
            integral,
            status,
            iterations,
            cuts_added_total: self.cuts_added,
            final_parity_constraints: self.constraints.len(),
            adaptive_parity_constraints: self.constraints.len(),
            lp_pivots_total: self.solve_pivots.iter().sum(),
            solve_pivots: self.solve_pivots.clone(),
            objective_trace: self.objective_trace.clone(),
            cuts_per_iteration: self.cuts_per_iteration.clone(),
            repeated_cuts: self.repeated_cuts,
            rpc_cuts_added: 0,
            rpc_cycle_trials: 0,
            rpc_repeated_collections: 0,
            lp_solves: self.lp_solves(),
            elapsed: self.started.elapsed(),
        }
    }
}

/// Adaptive LP decoding of `gamma` on `code`.
pub fn decode_adaptive(
    code: &ParityCheckCode,
    gamma: &LlrVector,
    opts: &DecodeOptions,
) -> Result<DecodeOutcome, DecodeError> {
    let mut lp = CuttingPlaneLp::new(code, gamma, *opts)?;
    let cap = opts.max_iterations.unwrap_or(code.n()).max(1);
    let status = match lp.run_rounds(cap)? {
        Round::Converged => lp.classify().1,
        Round::Limit => DecodeStatus::LimitExceeded,
    };
    let iterations = lp.lp_solves();
    Ok(lp.outcome(status, iterations))
}

/// Every parity constraint of one check: one per odd subset of its
/// neighborhood, `2^(d-1)` in all.
pub fn all_check_constraints(neighborhood: &[usize], check: CheckId) -> Vec<LinearConstraint> {
    let d = neighborhood.len();
    let mut out = Vec::with_capacity(1 << d.saturating_sub(1));
    for mask in 0u32..(1u32 << d) {
        if mask.count_ones() % 2 == 0 {
            continue;
        }
        let subset: Vec<usize> =
            (0..d).filter(|b| mask >> b & 1 == 1).map(|b| neighborhood[b]).collect();
        let terms = neighborhood
            .iter()
            .enumerate()
            .map(|(b, &i)| (i, if mask >> b & 1 == 1 { 1.0 } else { -1.0 }))
            .collect();
        let mut c = LinearConstraint::new(terms, subset.len() as f64 - 1.0);
        c.provenance = Some(Provenance { check: check.clone(), subset });
        out.push(c);
    }
    out
}

/// Standard LP decoding: every parity constraint of every check, solved once.
pub fn decode_standard(
    code: &ParityCheckCode,
    gamma: &LlrVector,
    opts: &DecodeOptions,
) -> Result<DecodeOutcome, DecodeError> {
    if gamma.len() != code.n() {
        return Err(DecodeError::DimensionMismatch { n: code.n(), gamma: gamma.len() });
    }
    let degree = code.max_check_degree();
    if degree > MAX_STANDARD_DEGREE {
        return Err(DecodeError::DegreeTooLarge { degree, limit: MAX_STANDARD_DEGREE });
    }
    let started = Instant::now();
    let constraints: Vec<LinearConstraint> = (0..code.m())
        .flat_map(|j| all_check_constraints(code.row(j), CheckId::Row(j)))
        .collect();
    let mut engine = BoundedSimplex::new(gamma.as_slice(), opts.lp)?;
    engine.add_constraints(&constraints)?;
    let sol = engine.solve();

    let integral = sol.x.iter().all(|&v| is_integral(v, opts.epsilon_int));
    let status = match sol.status {
        LpStatus::Optimal if integral => DecodeStatus::MlCodeword,
        LpStatus::Optimal => DecodeStatus::Pseudocodeword,
        _ => DecodeStatus::LimitExceeded,
    };
    Ok(DecodeOutcome {
        objective_value: gamma.cost(&sol.x),
        x: sol.x,
        integral,
        status,
        iterations: 1,
        cuts_added_total: 0,
        final_parity_constraints: constraints.len(),
        adaptive_parity_constraints: constraints.len(),
        lp_pivots_total: sol.pivots,
        solve_pivots: vec![sol.pivots],
        objective_trace: vec![sol.objective_value],
        cuts_per_iteration: vec![0],
        repeated_cuts: 0,
        rpc_cuts_added: 0,
        rpc_cycle_trials: 0,
        rpc_repeated_collections: 0,
        lp_solves: 1,
        elapsed: started.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::llr_awgn;

    fn llr(v: Vec<f64>) -> LlrVector {
        LlrVector::new(v).unwrap()
    }

    #[test]
    fn initial_bounds() {
        let c = initial_constraints(&llr(vec![0.3, -1.2]));
        assert_eq!(c[0].terms, vec![(0, -1.0)]);
        assert_eq!(c[0].rhs, 0.0);
        assert_eq!(c[1].terms, vec![(1, 1.0)]);
        assert_eq!(c[1].rhs, 1.0);

        let code = ParityCheckCode::from_rows(3, vec![vec![0, 1, 2]]).unwrap();
        // first LP vertex is the hard decision
        let lp = CuttingPlaneLp::new(&code, &llr(vec![0.0, 0.0, 0.0]), DecodeOptions::default())
            .unwrap();
        assert_eq!(lp.x(), &[0.0, 0.0, 0.0]);
        let lp = CuttingPlaneLp::new(&code, &llr(vec![-1.0, -2.0, -0.5]), DecodeOptions::default())
            .unwrap();
        assert_eq!(lp.x(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn noiseless_decode_is_immediate() {
        let code = crate::code::random_regular_ldpc(24, 3, 6, 2).unwrap();
        let gamma = llr_awgn(&vec![1.0; 24], 0.5);
        let out = decode_adaptive(&code, &gamma, &DecodeOptions::default()).unwrap();
        assert_eq!(out.status, DecodeStatus::MlCodeword);
        assert_eq!(out.iterations, 1);
        assert_eq!(out.final_parity_constraints, 0);
        assert!(out.x.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn standard_constraint_counts() {
        assert_eq!(all_check_constraints(&[0, 1, 2], CheckId::Row(0)).len(), 4);
        assert_eq!(all_check_constraints(&[0, 1, 2, 3, 4, 5], CheckId::Row(0)).len(), 32);
        let code = ParityCheckCode::from_rows(3, vec![vec![0, 1, 2]]).unwrap();
        let out = decode_standard(&code, &llr(vec![1.0, 1.0, 1.0]), &DecodeOptions::default())
            .unwrap();
        assert_eq!(out.final_parity_constraints, 4);
    }

    #[test]
    fn standard_rejects_dense_checks() {
        let code = ParityCheckCode::from_rows(15, vec![(0..15).collect()]).unwrap();
        let r = decode_standard(&code, &llr(vec![1.0; 15]), &DecodeOptions::default());
        assert!(matches!(r, Err(DecodeError::DegreeTooLarge { degree: 15, .. })));
    }

    #[test]
    fn repetition_code_decodes_to_all_ones() {
        let code = ParityCheckCode::from_rows(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let out = decode_adaptive(&code, &llr(vec![-1.0, -1.0, 0.5]), &DecodeOptions::default())
            .unwrap();
        assert_eq!(out.status, DecodeStatus::MlCodeword);
        assert_eq!(out.hard_bits(), vec![1, 1, 1]);
        assert!((out.objective_value + 1.5).abs() < 1e-12);
    }

    #[test]
    fn integrality_count_boundaries() {
        let out = DecodeOutcome {
            x: vec![0.0, 1.0, 0.5],
            objective_value: 0.0,
            integral: false,
            status: DecodeStatus::Pseudocodeword,
            iterations: 1,
            cuts_added_total: 0,
            final_parity_constraints: 0,
            adaptive_parity_constraints: 0,
            lp_pivots_total: 0,
            solve_pivots: vec![],
            objective_trace: vec![],
            cuts_per_iteration: vec![],
            repeated_cuts: 0,
            rpc_cuts_added: 0,
            rpc_cycle_trials: 0,
            rpc_repeated_collections: 0,
            lp_solves: 1,
            elapsed: Duration::ZERO,
        };
        assert!(!verify_pseudocodeword_integrality(&out, 0, 1e-6));
        assert!(verify_pseudocodeword_integrality(&out, 1, 1e-6));
        let integral = DecodeOutcome { x: vec![0.0, 1.0, 1.0], ..out };
        assert!(verify_pseudocodeword_integrality(&integral, 0, 1e-6));
    }

    #[test]
    fn dimension_mismatch() {
        let code = ParityCheckCode::from_rows(3, vec![vec![0, 1, 2]]).unwrap();
        assert!(matches!(
            decode_adaptive(&code, &llr(vec![1.0]), &DecodeOptions::default()),
            Err(DecodeError::DimensionMismatch { .. })
        ));
    }
}
