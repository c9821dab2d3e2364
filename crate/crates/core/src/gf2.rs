//! GF(2) elimination and codeword enumeration for short codes.

use crate::code::ParityCheckCode;
use crate::error::CodeError;

/// Longest code whose codewords may be enumerated.
pub const MAX_ENUMERATION_LENGTH: usize = 28;

/// Bit `i` of each mask is variable `i`.
fn row_masks(code: &ParityCheckCode) -> Vec<u64> {
    code.rows()
        .iter()
        .map(|row| row.iter().fold(0u64, |acc, &i| acc | (1 << i)))
        .collect()
}

/// Basis of the nullspace of `H` over GF(2), as bit masks, plus the rank of `H`.
pub fn nullspace_basis(code: &ParityCheckCode) -> Result<(Vec<u64>, usize), CodeError> {
    let n = code.n();
    if n > MAX_ENUMERATION_LENGTH {
        return Err(CodeError::TooLarge { n, limit: MAX_ENUMERATION_LENGTH });
    }
    let mut rows = row_masks(code);
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let bit = 1u64 << col;
        let Some(p) = (rank..rows.len()).find(|&r| rows[r] & bit != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && *row & bit != 0 {
                *row ^= pivot_row;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);

    // reduced row echelon form: each free column gives one basis vector whose
    // pivot coordinates are read off the rows
    let mut basis = Vec::with_capacity(n - rank);
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = 1u64 << free;
        for (row, &pc) in rows.iter().zip(&pivots) {
            if row & (1 << free) != 0 {
                v |= 1 << pc;
            }
        }
        basis.push(v);
    }
    Ok((basis, rank))
}

/// Every codeword as a bit mask, in Gray-code order starting from zero.
pub fn codeword_masks(code: &ParityCheckCode) -> Result<Vec<u64>, CodeError> {
    let (basis, _) = nullspace_basis(code)?;
    let count = 1usize << basis.len();
    let mut out = Vec::with_capacity(count);
    let mut word = 0u64;
    out.push(word);
    for k in 1..count {
        word ^= basis[k.trailing_zeros() as usize];
        out.push(word);
    }
    Ok(out)
}

pub fn mask_to_bits(mask: u64, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((mask >> i) & 1) as u8).collect()
}

/// All `2^(n - rank)` codewords of a code with `n <= 28`.
pub fn enumerate_codewords(code: &ParityCheckCode) -> Result<Vec<Vec<u8>>, CodeError> {
    Ok(codeword_masks(code)?
        .into_iter()
        .map(|m| mask_to_bits(m, code.n()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn hamming() -> ParityCheckCode {
        ParityCheckCode::from_rows(7, vec![vec![0, 1, 2, 4], vec![0, 1, 3, 5], vec![0, 2, 3, 6]])
            .unwrap()
    }

    #[test]
    fn repetition_codes() {
        let c2 = ParityCheckCode::from_rows(2, vec![vec![0, 1]]).unwrap();
        let words: HashSet<_> = enumerate_codewords(&c2).unwrap().into_iter().collect();
        assert_eq!(words, HashSet::from([vec![0, 0], vec![1, 1]]));

        let c3 = ParityCheckCode::from_rows(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let words: HashSet<_> = enumerate_codewords(&c3).unwrap().into_iter().collect();
        assert_eq!(words, HashSet::from([vec![0, 0, 0], vec![1, 1, 1]]));
    }

    #[test]
    fn hamming_has_sixteen_codewords() {
        let code = hamming();
        let words = enumerate_codewords(&code).unwrap();
        assert_eq!(words.len(), 16);
        let distinct: HashSet<_> = words.iter().cloned().collect();
        assert_eq!(distinct.len(), 16);
        // dense H * x over GF(2)
        for w in &words {
            for row in code.rows() {
                let s: u8 = row.iter().map(|&i| w[i]).sum();
                assert_eq!(s % 2, 0);
            }
        }
    }

    #[test]
    fn closed_under_addition() {
        let code = crate::code::random_regular_ldpc(16, 3, 4, 3).unwrap();
        let masks = codeword_masks(&code).unwrap();
        assert!(masks.contains(&0));
        let set: HashSet<u64> = masks.iter().copied().collect();
        for &a in masks.iter().take(20) {
            for &b in &masks {
                assert!(set.contains(&(a ^ b)));
            }
        }
    }

    #[test]
    fn rank_accounts_for_dependent_rows() {
        let code = crate::code::random_regular_ldpc(20, 3, 4, 5).unwrap();
        let (basis, rank) = nullspace_basis(&code).unwrap();
        assert_eq!(basis.len() + rank, 20);
        assert!(rank <= code.m());
    }

    #[test]
    fn too_long() {
        let code = crate::code::random_regular_ldpc(32, 3, 4, 0).unwrap();
        assert!(matches!(enumerate_codewords(&code), Err(CodeError::TooLarge { .. })));
    }
}
