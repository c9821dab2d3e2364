//! Brute-force maximum-likelihood decoding for short codes.

use crate::channel::LlrVector;
use crate::code::ParityCheckCode;
use crate::error::CodeError;
use crate::gf2::{codeword_masks, mask_to_bits};

/// Two costs closer than this are a tie.
pub const ML_TIE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct MlResult {
    pub codeword: Vec<u8>,
    pub cost: f64,
    /// False when another codeword ties the minimum.
    pub unique: bool,
}

/// Minimizes `gamma . c` over all codewords. Among tied minima the
/// lexicographically smallest codeword wins.
pub fn ml_decode_bruteforce(code: &ParityCheckCode, gamma: &LlrVector) -> Result<MlResult, CodeError> {
    let masks = codeword_masks(code)?;
    let g = gamma.as_slice();
    let cost_of = |mask: u64| -> f64 {
        (0..code.n()).filter(|&i| mask >> i & 1 == 1).map(|i| g[i]).sum()
    };
    // bit 0 is the first coordinate, so lexicographic order on bit vectors
    // is the order on bit-reversed masks
    let lex_key = |mask: u64| mask.reverse_bits();
    let mut best = masks[0];
    let mut best_cost = cost_of(best);
    let mut unique = true;
    for &mask in &masks[1..] {
        let c = cost_of(mask);
        if c < best_cost - ML_TIE_TOLERANCE {
            best = mask;
            best_cost = c;
            unique = true;
        } else if (c - best_cost).abs() <= ML_TIE_TOLERANCE {
            unique = false;
            if lex_key(mask) < lex_key(best) {
                best = mask;
                best_cost = c;
            }
        }
    }
    Ok(MlResult { codeword: mask_to_bits(best, code.n()), cost: best_cost, unique })
}

/// Fraction of blocks on which a decoder with the ML certificate returned a
/// codeword other than the one sent. Each such block is an ML error too, so
/// this bounds the ML word error rate from below.
pub fn ml_lower_bound(wrong_codeword_count: usize, blocks: usize) -> f64 {
    assert!(blocks > 0 && wrong_codeword_count <= blocks);
    wrong_codeword_count as f64 / blocks as f64
}
