//! Redundant-parity-check cuts.
//!
//! When adaptive decoding ends on a fractional point, the sum of the rows
//! on a cycle of the fractional subgraph may give a parity check whose
//! constraints cut that point. Such a row is added as a new check and the
//! adaptive loop resumes over the enlarged set of checks.

use std::collections::HashSet;
use std::time::Duration;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::adaptive::{is_integral, CuttingPlaneLp, DecodeOptions, DecodeOutcome, DecodeStatus, Round};
use crate::channel::LlrVector;
use crate::code::ParityCheckCode;
use crate::cuts::{Cut, CutSearcher};
use crate::error::DecodeError;
use crate::lp::CheckId;

/// One connected component of a fractional subgraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cluster {
    pub variables: Vec<usize>,
    pub checks: Vec<usize>,
    pub edges: usize,
}

impl Cluster {
    /// A connected graph has a cycle iff it has at least as many edges as
    /// nodes.
    pub fn has_cycle(&self) -> bool {
        self.edges >= self.variables.len() + self.checks.len()
    }
}

/// Tanner subgraph on the fractional variables and the checks touching them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalSubgraph {
    /// Sorted fractional variables.
    pub phi: Vec<usize>,
    /// Sorted checks with at least one fractional neighbor.
    pub checks: Vec<usize>,
    /// Fractional neighbors of each check (empty outside `checks`).
    pub check_adj: Vec<Vec<usize>>,
    /// Checks of each variable (empty outside `phi`).
    pub var_adj: Vec<Vec<usize>>,
    pub clusters: Vec<Cluster>,
}

impl FractionalSubgraph {
    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.checks.iter().map(|&j| self.check_adj[j].len()).sum()
    }

    /// True when every cluster contains a cycle.
    pub fn every_cluster_has_cycle(&self) -> bool {
        self.clusters.iter().all(Cluster::has_cycle)
    }

    /// Builds a subgraph from explicit edges; meant for tests on shapes an
    /// LP would not produce.
    pub fn from_edges(n: usize, m: usize, edges: &[(usize, usize)]) -> Self {
        let mut check_adj = vec![Vec::new(); m];
        let mut var_adj = vec![Vec::new(); n];
        for &(j, i) in edges {
            check_adj[j].push(i);
            var_adj[i].push(j);
        }
        for l in check_adj.iter_mut().chain(var_adj.iter_mut()) {
            l.sort_unstable();
            l.dedup();
        }
        Self::assemble(check_adj, var_adj)
    }

    fn assemble(check_adj: Vec<Vec<usize>>, var_adj: Vec<Vec<usize>>) -> Self {
        let phi: Vec<usize> = (0..var_adj.len()).filter(|&i| !var_adj[i].is_empty()).collect();
        let checks: Vec<usize> = (0..check_adj.len()).filter(|&j| !check_adj[j].is_empty()).collect();
        let mut f = FractionalSubgraph { phi, checks, check_adj, var_adj, clusters: Vec::new() };
        f.clusters = f.components();
        f
    }

    fn components(&self) -> Vec<Cluster> {
        let mut seen_var = vec![false; self.var_adj.len()];
        let mut seen_check = vec![false; self.check_adj.len()];
        let mut out = Vec::new();
        for &start in &self.checks {
            if seen_check[start] {
                continue;
            }
            let mut cluster = Cluster { variables: Vec::new(), checks: Vec::new(), edges: 0 };
            let mut stack = vec![start];
            seen_check[start] = true;
            while let Some(j) = stack.pop() {
                cluster.checks.push(j);
                cluster.edges += self.check_adj[j].len();
                for &i in &self.check_adj[j] {
                    if seen_var[i] {
                        continue;
                    }
                    seen_var[i] = true;
                    cluster.variables.push(i);
                    for &k in &self.var_adj[i] {
                        if !seen_check[k] {
                            seen_check[k] = true;
                            stack.push(k);
                        }
                    }
                }
            }
            cluster.variables.sort_unstable();
            cluster.checks.sort_unstable();
            out.push(cluster);
        }
        out
    }
}

/// Fractional subgraph of `code` at `x`.
pub fn fractional_subgraph(code: &ParityCheckCode, x: &[f64], epsilon_int: f64) -> FractionalSubgraph {
    let mut check_adj = vec![Vec::new(); code.m()];
    let mut var_adj = vec![Vec::new(); code.n()];
    for (i, &v) in x.iter().enumerate().take(code.n()) {
        if is_integral(v, epsilon_int) {
            continue;
        }
        for &j in code.col(i) {
            check_adj[j].push(i);
            var_adj[i].push(j);
        }
    }
    // columns are visited in order, so check lists come out sorted
    FractionalSubgraph::assemble(check_adj, var_adj)
}

/// A closed walk `checks[0] - variables[0] - checks[1] - ... - variables[L-1] - checks[0]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalCycle {
    pub checks: Vec<usize>,
    pub variables: Vec<usize>,
}

impl FractionalCycle {
    /// Check set, sorted.
    pub fn check_set(&self) -> Vec<usize> {
        let mut c = self.checks.clone();
        c.sort_unstable();
        c
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Node {
    Check(usize),
    Var(usize),
}

/// Random walk on `f` until a node repeats, then returns the loop it closed.
///
/// The walk starts at a uniformly chosen check and never steps straight
/// back. At a dead end it restarts from a fresh random check. After
/// `4 * |edges|` steps it gives up.
pub fn random_cycle_search<R: Rng + ?Sized>(f: &FractionalSubgraph, rng: &mut R) -> Option<FractionalCycle> {
    let &start = f.checks.choose(rng)?;
    let cap = 4 * f.edge_count();
    let mut path = vec![Node::Check(start)];
    let mut position = std::collections::HashMap::from([(Node::Check(start), 0usize)]);
    let mut options: Vec<Node> = Vec::new();
    for _ in 0..cap {
        let cur = *path.last().expect("path is never empty");
        let prev = path.len().checked_sub(2).map(|p| path[p]);
        options.clear();
        match cur {
            Node::Check(j) => options.extend(f.check_adj[j].iter().map(|&i| Node::Var(i))),
            Node::Var(i) => options.extend(f.var_adj[i].iter().map(|&j| Node::Check(j))),
        }
        options.retain(|&o| Some(o) != prev);
        let Some(&next) = options.choose(rng) else {
            let &restart = f.checks.choose(rng)?;
            path.clear();
            position.clear();
            path.push(Node::Check(restart));
            position.insert(Node::Check(restart), 0);
            continue;
        };
        if let Some(&p) = position.get(&next) {
            let mut lp: Vec<Node> = path[p..].to_vec();
            if matches!(lp[0], Node::Var(_)) {
                lp.rotate_left(1);
            }
            let mut cycle = FractionalCycle { checks: Vec::new(), variables: Vec::new() };
            for node in lp {
                match node {
                    Node::Check(j) => cycle.checks.push(j),
                    Node::Var(i) => cycle.variables.push(i),
                }
            }
            return Some(cycle);
        }
        position.insert(next, path.len());
        path.push(next);
    }
    None
}

/// Checks that `cycle` is a closed walk through distinct nodes of `f`.
pub fn verify_cycle(f: &FractionalSubgraph, cycle: &FractionalCycle) -> bool {
    let l = cycle.checks.len();
    if l < 2 || cycle.variables.len() != l {
        return false;
    }
    let distinct_c: HashSet<_> = cycle.checks.iter().collect();
    let distinct_v: HashSet<_> = cycle.variables.iter().collect();
    if distinct_c.len() != l || distinct_v.len() != l {
        return false;
    }
    (0..l).all(|k| {
        let v = cycle.variables[k];
        f.check_adj[cycle.checks[k]].binary_search(&v).is_ok()
            && f.check_adj[cycle.checks[(k + 1) % l]].binary_search(&v).is_ok()
    })
}

/// The cut of the redundant check formed by summing `checks`, if any.
pub fn try_rpc_cut(code: &ParityCheckCode, x: &[f64], checks: &[usize]) -> Option<Cut> {
    try_rpc_cut_with(&mut CutSearcher::default(), code, x, checks)
}

fn try_rpc_cut_with(
    searcher: &mut CutSearcher,
    code: &ParityCheckCode,
    x: &[f64],
    checks: &[usize],
) -> Option<Cut> {
    let row = code.combine_rows(checks).ok()?;
    if row.is_empty() {
        return None;
    }
    let support = row.support().to_vec();
    searcher.find_cut(x, &support, CheckId::Redundant(row))
}

/// Number of variables that are fractional at `x` and adjacent to both checks.
pub fn shared_fractional_neighbors(
    code: &ParityCheckCode,
    x: &[f64],
    c1: usize,
    c2: usize,
    epsilon_int: f64,
) -> usize {
    let b = code.row(c2);
    code.row(c1)
        .iter()
        .filter(|i| b.binary_search(i).is_ok() && !is_integral(x[**i], epsilon_int))
        .count()
}

/// True when the checks of `collection` and their fractional neighbors
/// contain a cycle.
pub fn collection_has_fractional_cycle(
    code: &ParityCheckCode,
    x: &[f64],
    collection: &[usize],
    epsilon_int: f64,
) -> bool {
    // union-find over checks then variables; an edge joining two nodes
    // already connected closes a cycle
    let n = code.n();
    let mut parent: Vec<usize> = (0..n + code.m()).collect();
    fn find(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    let mut checks = collection.to_vec();
    checks.sort_unstable();
    checks.dedup();
    for &j in &checks {
        for &i in code.row(j) {
            if is_integral(x[i], epsilon_int) {
                continue;
            }
            let (a, b) = (find(&mut parent, n + j), find(&mut parent, i));
            if a == b {
                return true;
            }
            parent[a] = b;
        }
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RpcBudget {
    /// Cycle trials per cut attempt.
    pub c_max: usize,
    /// Cap on LP solves spent after the adaptive phase.
    pub lp_resolve_cap: usize,
    /// Optional wall-clock cap on the whole decode.
    pub t_max: Option<Duration>,
    /// Keep searching after the first cut of an attempt and add all of them.
    pub batch: bool,
}

impl Default for RpcBudget {
    fn default() -> Self {
        RpcBudget { c_max: 100, lp_resolve_cap: 500, t_max: None, batch: false }
    }
}

/// Adaptive decoding followed by RPC cut rounds while the point stays
/// fractional.
///
/// `iterations` in the outcome counts the solves of the adaptive phase
/// only; `lp_solves` counts all of them.
pub fn decode_with_rpc<R: Rng + ?Sized>(
    code: &ParityCheckCode,
    gamma: &LlrVector,
    opts: &DecodeOptions,
    budget: &RpcBudget,
    rng: &mut R,
) -> Result<DecodeOutcome, DecodeError> {
    let mut lp = CuttingPlaneLp::new(code, gamma, *opts)?;
    let cap = opts.max_iterations.unwrap_or(code.n()).max(1);
    let first = lp.run_rounds(cap)?;
    let iterations = lp.lp_solves();
    let adaptive_constraints = lp.parity_constraints();
    let mut status = match first {
        Round::Converged => lp.classify().1,
        Round::Limit => DecodeStatus::LimitExceeded,
    };

    let c_max = budget.c_max.max(1);
    let mut searcher = CutSearcher::new(opts.cut_epsilon);
    let mut tried: HashSet<Vec<usize>> = HashSet::new();
    let (mut rpc_cuts, mut trials, mut repeats) = (0, 0, 0);
    let phase_start = lp.lp_solves();

    while status == DecodeStatus::Pseudocodeword {
        if budget.t_max.is_some_and(|t| lp.started().elapsed() >= t) {
            status = DecodeStatus::LimitExceeded;
            break;
        }
        let x = lp.x().to_vec();
        let f = fractional_subgraph(code, &x, opts.epsilon_int);
        let mut found: Vec<Cut> = Vec::new();
        for _ in 0..c_max {
            trials += 1;
            let Some(cycle) = random_cycle_search(&f, rng) else { continue };
            if !tried.insert(cycle.check_set()) {
                repeats += 1;
                continue;
            }
            if let Some(cut) = try_rpc_cut_with(&mut searcher, code, &x, &cycle.check_set()) {
                found.push(cut);
                if !budget.batch {
                    break;
                }
            }
        }
        if found.is_empty() {
            break;
        }
        let remaining = budget.lp_resolve_cap.saturating_sub(lp.lp_solves() - phase_start);
        if remaining == 0 {
            status = DecodeStatus::LimitExceeded;
            break;
        }
        for cut in &found {
            if let CheckId::Redundant(row) = &cut.check {
                lp.add_redundant_check(row.clone());
            }
        }
        rpc_cuts += lp.add_cuts_and_resolve(&found)?;
        let cap = phase_start + budget.lp_resolve_cap;
        status = match lp.run_rounds(cap)? {
            Round::Converged => lp.classify().1,
            Round::Limit => DecodeStatus::LimitExceeded,
        };
    }

    let mut out = lp.outcome(status, iterations);
    out.adaptive_parity_constraints = adaptive_constraints;
    out.rpc_cuts_added = rpc_cuts;
    out.rpc_cycle_trials = trials;
    out.rpc_repeated_collections = repeats;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::random_regular_ldpc;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn integral_point_gives_empty_subgraph() {
        let code = random_regular_ldpc(12, 3, 6, 1).unwrap();
        let f = fractional_subgraph(&code, &[0.0; 12], 1e-6);
        assert!(f.is_empty());
        assert!(f.checks.is_empty());
        assert!(f.clusters.is_empty());
    }

    #[test]
    fn single_fractional_variable() {
        let code = random_regular_ldpc(12, 3, 6, 1).unwrap();
        let mut x = vec![0.0; 12];
        x[3] = 0.5;
        let f = fractional_subgraph(&code, &x, 1e-6);
        assert_eq!(f.phi, vec![3]);
        assert_eq!(f.checks, code.col(3).to_vec());
        assert_eq!(f.clusters.len(), 1);
        assert!(!f.clusters[0].has_cycle());
    }

    #[test]
    fn four_cycle_is_found() {
        let f = FractionalSubgraph::from_edges(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..20 {
            let c = random_cycle_search(&f, &mut rng).unwrap();
            assert_eq!(c.check_set(), vec![0, 1]);
            assert!(verify_cycle(&f, &c));
        }
    }

    #[test]
    fn tree_has_no_cycle() {
        // path c0 - v0 - c1 - v1 - c2 plus a leaf v2 on c0
        let f = FractionalSubgraph::from_edges(3, 3, &[(0, 0), (1, 0), (1, 1), (2, 1), (0, 2)]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            assert!(random_cycle_search(&f, &mut rng).is_none());
        }
        assert!(!f.every_cluster_has_cycle());
    }

    #[test]
    fn cycles_on_a_dense_subgraph_verify() {
        let code = random_regular_ldpc(24, 3, 6, 4).unwrap();
        let x = vec![0.5; 24];
        let f = fractional_subgraph(&code, &x, 1e-6);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let c = random_cycle_search(&f, &mut rng).unwrap();
            assert!(verify_cycle(&f, &c), "{c:?}");
        }
    }

    #[test]
    fn rpc_equal_to_satisfied_row_gives_nothing() {
        // rows 0 and 1 sum to row 2
        let code = ParityCheckCode::from_rows(4, vec![vec![0, 1], vec![1, 2], vec![0, 2], vec![2, 3]]).unwrap();
        let x = [0.5, 0.5, 0.5, 0.5];
        assert!(try_rpc_cut(&code, &x, &[0, 1]).is_none());
        // identical rows cancel
        let dup = ParityCheckCode::from_rows(3, vec![vec![0, 1, 2], vec![0, 1, 2]]).unwrap();
        assert!(try_rpc_cut(&dup, &[1.0, 0.0, 0.0], &[0, 1]).is_none());
    }

    #[test]
    fn rpc_cut_on_half_point() {
        // both rows hold at x, their sum {0,3} does not
        let code = ParityCheckCode::from_rows(4, vec![vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
        let x = [1.0, 0.5, 0.5, 0.0];
        assert!(CutSearcher::default().find_all(&code, &x).is_empty());
        let cut = try_rpc_cut(&code, &x, &[0, 1]).unwrap();
        assert_eq!(cut.subset_v, vec![0]);
        assert!((cut.violation - 1.0).abs() < 1e-12);
        assert_eq!(shared_fractional_neighbors(&code, &x, 0, 1, 1e-6), 2);
        assert!(collection_has_fractional_cycle(&code, &x, &[0, 1], 1e-6));
        assert!(!collection_has_fractional_cycle(&code, &x, &[0], 1e-6));
    }
}
