//! Separation of parity-check constraints.
//!
//! A check with neighborhood `N` contributes, for every odd `V ⊆ N`,
//!
//! ```text
//! sum_{i in V} x_i - sum_{i in N \ V} x_i <= |V| - 1
//! ```
//!
//! At any `x` in the unit box at most one of these is violated, and if one
//! is, `V` is made of the largest entries of `x` on `N`. The search below
//! sorts the neighborhood once and grows `V` two entries at a time, stopping
//! as soon as `sum_V x <= |V| - 1`, after which no larger prefix can cut.

use crate::code::ParityCheckCode;
use crate::error::CutError;
use crate::lp::{CheckId, LinearConstraint, Provenance};

/// Violation margin below which a constraint counts as satisfied.
pub const DEFAULT_CUT_EPSILON: f64 = 1e-9;

/// A violated parity constraint.
#[derive(Clone, Debug, PartialEq)]
pub struct Cut {
    pub check: CheckId,
    /// Sorted odd subset of the neighborhood.
    pub subset_v: Vec<usize>,
    /// `lhs - rhs` at the point the cut was found for.
    pub violation: f64,
    neighborhood: Vec<usize>,
}

impl Cut {
    pub fn neighborhood(&self) -> &[usize] {
        &self.neighborhood
    }

    pub fn to_constraint(&self) -> LinearConstraint {
        let mut c = build_constraint(&self.neighborhood, &self.subset_v);
        c.provenance = Some(Provenance { check: self.check.clone(), subset: self.subset_v.clone() });
        c
    }
}

fn build_constraint(neighborhood: &[usize], subset: &[usize]) -> LinearConstraint {
    let terms = neighborhood
        .iter()
        .map(|&i| (i, if subset.binary_search(&i).is_ok() { 1.0 } else { -1.0 }))
        .collect();
    LinearConstraint::new(terms, subset.len() as f64 - 1.0)
}

/// The parity constraint of `neighborhood` for the odd subset `subset_v`:
/// `+1` on `V`, `-1` on `N \ V`, right-hand side `|V| - 1`.
pub fn constraint_from_subset(
    neighborhood: &[usize],
    subset_v: &[usize],
) -> Result<LinearConstraint, CutError> {
    if subset_v.len() % 2 == 0 {
        return Err(CutError::EvenSubset(subset_v.len()));
    }
    if let Some(&i) = subset_v.iter().find(|i| !neighborhood.contains(i)) {
        return Err(CutError::NotInNeighborhood(i));
    }
    let mut v = subset_v.to_vec();
    v.sort_unstable();
    Ok(build_constraint(neighborhood, &v))
}

/// Reusable sort buffer plus a count of coordinates that had to be clamped
/// into `[0, 1]`.
#[derive(Debug, Clone)]
pub struct CutSearcher {
    epsilon: f64,
    order: Vec<(usize, f64)>,
    clamped: usize,
}

impl Default for CutSearcher {
    fn default() -> Self {
        Self::new(DEFAULT_CUT_EPSILON)
    }
}

impl CutSearcher {
    pub fn new(epsilon: f64) -> Self {
        CutSearcher { epsilon, order: Vec::new(), clamped: 0 }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Coordinates seen outside `[0, 1]` so far.
    pub fn clamped(&self) -> usize {
        self.clamped
    }

    /// The unique cut of the check with this neighborhood at `x`, if any.
    pub fn find_cut(&mut self, x: &[f64], neighborhood: &[usize], check: CheckId) -> Option<Cut> {
        let d = neighborhood.len();
        if d == 0 {
            return None;
        }
        self.order.clear();
        for &i in neighborhood {
            let v = x[i];
            if !(0.0..=1.0).contains(&v) {
                self.clamped += 1;
            }
            self.order.push((i, v.clamp(0.0, 1.0)));
        }
        // descending value, ascending index on ties
        self.order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));

        let total: f64 = self.order.iter().map(|e| e.1).sum();
        let mut in_v = self.order[0].1;
        let mut size = 1;
        loop {
            let lhs = in_v - (total - in_v);
            let violation = lhs - (size as f64 - 1.0);
            if violation > self.epsilon {
                let mut subset: Vec<usize> = self.order[..size].iter().map(|e| e.0).collect();
                subset.sort_unstable();
                let mut nb = neighborhood.to_vec();
                nb.sort_unstable();
                return Some(Cut { check, subset_v: subset, violation, neighborhood: nb });
            }
            if size + 2 > d {
                return None;
            }
            in_v += self.order[size].1 + self.order[size + 1].1;
            size += 2;
            // a cut needs sum_V x > |V| - 1
            if in_v <= size as f64 - 1.0 {
                return None;
            }
        }
    }

    /// Every cut of `code` at `x`, in ascending check order.
    pub fn find_all(&mut self, code: &ParityCheckCode, x: &[f64]) -> Vec<Cut> {
        (0..code.m())
            .filter_map(|j| self.find_cut(x, code.row(j), CheckId::Row(j)))
            .collect()
    }
}

/// Free-function form of [`CutSearcher::find_cut`] with the default epsilon.
pub fn find_cut_for_check(x: &[f64], neighborhood: &[usize]) -> Option<Cut> {
    CutSearcher::default().find_cut(x, neighborhood, CheckId::Row(usize::MAX))
}

/// Free-function form of [`CutSearcher::find_all`] with the default epsilon.
pub fn find_all_cuts(code: &ParityCheckCode, x: &[f64]) -> Vec<Cut> {
    CutSearcher::default().find_all(code, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Every violated odd subset, by enumeration of all `2^(d-1)` of them.
    fn brute_force(x: &[f64], nb: &[usize], eps: f64) -> Vec<(Vec<usize>, f64)> {
        let d = nb.len();
        let mut out = Vec::new();
        for mask in 0u32..(1 << d) {
            if mask.count_ones() % 2 == 0 {
                continue;
            }
            let mut lhs = 0.0;
            let mut v = Vec::new();
            for (b, &i) in nb.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    lhs += x[i];
                    v.push(i);
                } else {
                    lhs -= x[i];
                }
            }
            let viol = lhs - (mask.count_ones() as f64 - 1.0);
            if viol > eps {
                v.sort_unstable();
                out.push((v, viol));
            }
        }
        out
    }

    #[test]
    fn constraint_construction() {
        let c = constraint_from_subset(&[0, 1, 2], &[0]).unwrap();
        assert_eq!(c.terms, vec![(0, 1.0), (1, -1.0), (2, -1.0)]);
        assert_eq!(c.rhs, 0.0);
        let c = constraint_from_subset(&[0, 1, 2], &[0, 1, 2]).unwrap();
        assert_eq!(c.terms, vec![(0, 1.0), (1, 1.0), (2, 1.0)]);
        assert_eq!(c.rhs, 2.0);
        assert_eq!(constraint_from_subset(&[0, 1, 2, 3], &[0, 1]), Err(CutError::EvenSubset(2)));
        assert_eq!(constraint_from_subset(&[0, 1, 2], &[5]), Err(CutError::NotInNeighborhood(5)));
    }

    #[test]
    fn hard_decision_cut() {
        let cut = find_cut_for_check(&[1.0, 0.0, 0.0], &[0, 1, 2]).unwrap();
        assert_eq!(cut.subset_v, vec![0]);
        assert!((cut.violation - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fractional_examples_agree_with_enumeration() {
        let x = [0.9, 0.8, 0.6, 0.1];
        let nb = [0, 1, 2, 3];
        let cut = find_cut_for_check(&x, &nb).unwrap();
        assert_eq!(cut.subset_v, vec![0, 1, 2]);
        assert!((cut.violation - 0.2).abs() < 1e-12);
        let brute = brute_force(&x, &nb, 1e-9);
        assert_eq!(brute.len(), 1);
        assert_eq!(brute[0].0, vec![0, 1, 2]);

        let x = [0.5, 0.5, 0.5];
        assert!(find_cut_for_check(&x, &[0, 1, 2]).is_none());
        assert!(brute_force(&x, &[0, 1, 2], 1e-9).is_empty());
    }

    #[test]
    fn codeword_has_no_cuts() {
        let code = ParityCheckCode::from_rows(6, vec![vec![0, 1, 2], vec![2, 3, 4, 5]]).unwrap();
        let x = [1.0, 1.0, 0.0, 1.0, 0.0, 1.0];
        assert!(find_all_cuts(&code, &x).is_empty());
        let single = ParityCheckCode::from_rows(3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(find_all_cuts(&single, &[1.0, 0.0, 0.0]).len(), 1);
    }

    #[test]
    fn out_of_box_entries_are_clamped_and_counted() {
        let mut s = CutSearcher::default();
        let cut = s.find_cut(&[1.0 + 1e-12, -1e-12, 0.0], &[0, 1, 2], CheckId::Row(0)).unwrap();
        assert_eq!(cut.subset_v, vec![0]);
        assert_eq!(s.clamped(), 2);
    }

    #[test]
    fn cut_matches_brute_force_on_random_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..2000 {
            let d = rng.random_range(2..=10);
            let nb: Vec<usize> = (0..d).collect();
            let x: Vec<f64> = (0..d)
                .map(|_| match rng.random_range(0..4) {
                    0 => 0.0,
                    1 => 1.0,
                    _ => rng.random::<f64>(),
                })
                .collect();
            let brute = brute_force(&x, &nb, 1e-9);
            assert!(brute.len() <= 1);
            let found = find_cut_for_check(&x, &nb);
            assert_eq!(found.map(|c| c.subset_v), brute.first().map(|b| b.0.clone()));
        }
    }
}
