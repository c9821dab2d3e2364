//! Sum-product decoding in the LLR domain, flooding schedule.

use crate::channel::LlrVector;
use crate::code::ParityCheckCode;

/// Magnitude clip applied to every message.
pub const LLR_CLIP: f64 = 30.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BpConfig {
    pub max_iterations: usize,
}

impl Default for BpConfig {
    fn default() -> Self {
        BpConfig { max_iterations: 100 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BpResult {
    pub bits: Vec<u8>,
    pub converged: bool,
    pub iterations: usize,
}

/// One iteration is a check update, a posterior hard decision and, unless
/// that decision is a codeword, a variable update.
pub fn sum_product_decode(code: &ParityCheckCode, gamma: &LlrVector, cfg: &BpConfig) -> BpResult {
    let n = code.n();
    assert_eq!(gamma.len(), n, "gamma length must equal n");
    let g = gamma.as_slice();
    let clip = |v: f64| v.clamp(-LLR_CLIP, LLR_CLIP);

    // edge e of check j sits at offsets[j] + position in row j
    let mut offsets = Vec::with_capacity(code.m() + 1);
    offsets.push(0);
    for row in code.rows() {
        offsets.push(offsets.last().unwrap() + row.len());
    }
    let mut v2c: Vec<f64> = code.rows().iter().flatten().map(|&i| clip(g[i])).collect();
    let mut c2v = vec![0.0; v2c.len()];
    let mut tanhs = Vec::new();
    let mut suffix = Vec::new();
    let mut bits = gamma.hard_decision();
    let max_iterations = cfg.max_iterations.max(1);

    for it in 1..=max_iterations {
        for (j, _) in code.rows().iter().enumerate() {
            let edges = offsets[j]..offsets[j + 1];
            tanhs.clear();
            tanhs.extend(v2c[edges.clone()].iter().map(|&m| (m / 2.0).tanh()));
            // product over the other edges from prefix and suffix products
            suffix.clear();
            suffix.resize(tanhs.len() + 1, 1.0);
            for k in (0..tanhs.len()).rev() {
                suffix[k] = suffix[k + 1] * tanhs[k];
            }
            let mut prefix = 1.0;
            for (k, e) in edges.enumerate() {
                let p: f64 = prefix * suffix[k + 1];
                c2v[e] = clip(2.0 * p.atanh());
                prefix *= tanhs[k];
            }
        }
        let mut posterior = g.to_vec();
        for (j, row) in code.rows().iter().enumerate() {
            for (k, &i) in row.iter().enumerate() {
                posterior[i] += c2v[offsets[j] + k];
            }
        }
        for (b, &p) in bits.iter_mut().zip(&posterior) {
            *b = u8::from(p < 0.0);
        }
        if code.is_codeword(&bits) {
            return BpResult { bits, converged: true, iterations: it };
        }
        for (j, row) in code.rows().iter().enumerate() {
            for (k, &i) in row.iter().enumerate() {
                let e = offsets[j] + k;
                v2c[e] = clip(posterior[i] - c2v[e]);
            }
        }
    }
    BpResult { bits, converged: false, iterations: max_iterations }
}
