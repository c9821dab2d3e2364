//! Binary linear codes described by a sparse parity-check matrix.
//!
//! Rows are checks and columns are variables. Indices are 0-based in memory;
//! the alist reader and writer in [`crate::alist`] translate to and from the
//! 1-based convention of that format.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CodeError;

/// A parity-check code with row (check) and column (variable) adjacency.
///
/// The column lists are always the exact transpose of the row lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityCheckCode {
    n: usize,
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
}

/// A single parity check, possibly a GF(2) combination of several rows.
///
/// The support may be empty, in which case it generates no constraints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CheckRow {
    support: Vec<usize>,
}

impl CheckRow {
    /// Builds a row from an arbitrary index list; the list is sorted and
    /// duplicate pairs cancel, as they would under GF(2) addition.
    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        let mut support = Vec::with_capacity(v.len());
        let mut i = 0;
        while i < v.len() {
            let mut j = i;
            while j < v.len() && v[j] == v[i] {
                j += 1;
            }
            if (j - i) % 2 == 1 {
                support.push(v[i]);
            }
            i = j;
        }
        CheckRow { support }
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }
}

impl ParityCheckCode {
    /// Builds a code from per-check supports, validating every invariant.
    ///
    /// Each row is sorted; a repeated index, an index `>= n`, an empty row or
    /// a degree-1 row is rejected.
    pub fn from_rows(n: usize, rows: Vec<Vec<usize>>) -> Result<Self, CodeError> {
        if n == 0 {
            return Err(CodeError::EmptyCode);
        }
        let mut sorted_rows = Vec::with_capacity(rows.len());
        for (j, mut row) in rows.into_iter().enumerate() {
            row.sort_unstable();
            if let Some(&bad) = row.iter().find(|&&i| i >= n) {
                return Err(CodeError::IndexOutOfRange { check: j, index: bad, n });
            }
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(CodeError::DuplicateIndex { check: j });
            }
            match row.len() {
                0 => return Err(CodeError::EmptyCheck { check: j }),
                1 => return Err(CodeError::DegreeOneCheck { check: j }),
                _ => {}
            }
            sorted_rows.push(row);
        }
        let mut cols = vec![Vec::new(); n];
        for (j, row) in sorted_rows.iter().enumerate() {
            for &i in row {
                cols[i].push(j);
            }
        }
        Ok(ParityCheckCode { n, rows: sorted_rows, cols })
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of checks.
    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Neighborhood of check `j`.
    pub fn row(&self, j: usize) -> &[usize] {
        &self.rows[j]
    }

    pub fn cols(&self) -> &[Vec<usize>] {
        &self.cols
    }

    /// Checks incident to variable `i`.
    pub fn col(&self, i: usize) -> &[usize] {
        &self.cols[i]
    }

    pub fn max_check_degree(&self) -> usize {
        self.rows.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_variable_degree(&self) -> usize {
        self.cols.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Total number of edges in the Tanner graph.
    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// True when every check is satisfied by the binary word `bits`.
    pub fn is_codeword(&self, bits: &[u8]) -> bool {
        bits.len() == self.n
            && self
                .rows
                .iter()
                .all(|row| row.iter().fold(0u8, |acc, &i| acc ^ (bits[i] & 1)) == 0)
    }

    /// Support of the GF(2) sum of the selected rows.
    pub fn combine_rows(&self, checks: &[usize]) -> Result<CheckRow, CodeError> {
        if checks.is_empty() {
            return Err(CodeError::EmptyCheckSet);
        }
        if let Some(&bad) = checks.iter().find(|&&j| j >= self.m()) {
            return Err(CodeError::CheckOutOfRange { check: bad, m: self.m() });
        }
        Ok(CheckRow::from_indices(
            checks.iter().flat_map(|&j| self.rows[j].iter().copied()),
        ))
    }
}

/// Generates a `(dv, dc)`-regular code of length `n` with the configuration
/// model: variable sockets are shuffled against check sockets, then parallel
/// edges are removed by swapping endpoints with random other edges.
///
/// The generator is ChaCha8 seeded from `seed`, so the output is stable for
/// a given `(n, dv, dc, seed)`.
pub fn random_regular_ldpc(
    n: usize,
    dv: usize,
    dc: usize,
    seed: u64,
) -> Result<ParityCheckCode, CodeError> {
    if dv < 2 || dc < 2 {
        return Err(CodeError::DegreeTooSmall { dv, dc });
    }
    if n == 0 || (n * dv) % dc != 0 {
        return Err(CodeError::NotDivisible { n, dv, dc });
    }
    let m = n * dv / dc;
    if dc > n || dv > m {
        return Err(CodeError::DegreeExceedsSize { n, m, dv, dc });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // edges[s] is the variable on check socket s; socket s belongs to check s / dc
    let mut edges: Vec<usize> = (0..n).flat_map(|i| std::iter::repeat_n(i, dv)).collect();
    edges.shuffle(&mut rng);
    let check_of = |s: usize| s / dc;

    let mut multiplicity: HashMap<(usize, usize), usize> = HashMap::with_capacity(edges.len());
    for (s, &v) in edges.iter().enumerate() {
        *multiplicity.entry((v, check_of(s))).or_insert(0) += 1;
    }

    let budget = 1000 * edges.len().max(1);
    let mut attempts = 0;
    for s in 0..edges.len() {
        while multiplicity[&(edges[s], check_of(s))] > 1 {
            attempts += 1;
            if attempts > budget {
                return Err(CodeError::ParallelEdges { attempts: budget });
            }
            let (c, v) = (check_of(s), edges[s]);
            let t = rng.random_range(0..edges.len());
            let (c2, v2) = (check_of(t), edges[t]);
            if c2 == c || v2 == v {
                continue;
            }
            // both replacement edges must be fresh
            let fresh = |e: &(usize, usize)| multiplicity.get(e).copied().unwrap_or(0) == 0;
            if !fresh(&(v2, c)) || !fresh(&(v, c2)) {
                continue;
            }
            for old in [(v, c), (v2, c2)] {
                *multiplicity.get_mut(&old).expect("edge present") -= 1;
            }
            for new in [(v2, c), (v, c2)] {
                *multiplicity.entry(new).or_insert(0) += 1;
            }
            edges.swap(s, t);
        }
    }

    let mut rows = vec![Vec::with_capacity(dc); m];
    for (s, &v) in edges.iter().enumerate() {
        rows[check_of(s)].push(v);
    }
    ParityCheckCode::from_rows(n, rows)
}
