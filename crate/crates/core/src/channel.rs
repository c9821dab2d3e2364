//! BPSK over the AWGN channel and the matching LLR cost vector.
//!
//! Bit 0 maps to `+1` and bit 1 to `-1`, so a positive LLR favors 0. The SNR
//! is the ratio of signal variance (1 for BPSK) to noise variance.
//!
//! Noise comes from a seeded [`ChaCha8Rng`] through `rand_distr`'s ziggurat
//! `StandardNormal`; other generator types work as long as they are seeded.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Generator used for every simulated block.
pub type BlockRng = ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelKind {
    Awgn,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelConfig {
    pub kind: ChannelKind,
    pub snr_db: f64,
    pub sigma: f64,
}

impl ChannelConfig {
    pub fn awgn(snr_db: f64) -> Self {
        ChannelConfig { kind: ChannelKind::Awgn, snr_db, sigma: snr_to_sigma(snr_db) }
    }
}

/// Per-bit log-likelihood ratios.
#[derive(Clone, Debug, PartialEq)]
pub struct LlrVector(Vec<f64>);

impl LlrVector {
    /// Wraps a cost vector; returns `None` if some entry is not finite.
    pub fn new(gamma: Vec<f64>) -> Option<Self> {
        gamma.iter().all(|g| g.is_finite()).then_some(LlrVector(gamma))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Linear cost `gamma . x`.
    pub fn cost(&self, x: &[f64]) -> f64 {
        self.0.iter().zip(x).map(|(g, v)| g * v).sum()
    }

    /// Bit-wise hard decision: 1 where the LLR is negative.
    pub fn hard_decision(&self) -> Vec<u8> {
        self.0.iter().map(|&g| u8::from(g < 0.0)).collect()
    }
}

impl std::ops::Index<usize> for LlrVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Noise standard deviation for unit-energy BPSK, `sqrt(10^(-snr_db / 10))`.
pub fn snr_to_sigma(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 10.0).sqrt()
}

#[inline]
pub fn bpsk(bit: u8) -> f64 {
    if bit & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Received samples `bpsk(y_i) + sigma * z_i`.
pub fn transmit_awgn<R: Rng + ?Sized>(codeword: &[u8], sigma: f64, rng: &mut R) -> Vec<f64> {
    assert!(sigma > 0.0, "sigma must be positive");
    codeword
        .iter()
        .map(|&b| {
            let z: f64 = rng.sample(StandardNormal);
            bpsk(b) + sigma * z
        })
        .collect()
}

/// `gamma_i = 2 r_i / sigma^2`.
pub fn llr_awgn(received: &[f64], sigma: f64) -> LlrVector {
    assert!(sigma > 0.0, "sigma must be positive");
    let scale = 2.0 / (sigma * sigma);
    LlrVector(received.iter().map(|&r| scale * r).collect())
}
