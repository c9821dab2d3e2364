//! Monte-Carlo simulation driver behind the `lpdec` binary.
//!
//! Every block transmits the all-zero codeword. Its noise comes from a
//! generator seeded with `derive_seed(master_seed, block_index)`, so the
//! same block index sees the same normal draws under every decoder and at
//! every SNR. Blocks run in parallel and are reported in index order.

use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;

use crate::adaptive::{decode_adaptive, decode_standard, DecodeOptions, DecodeOutcome, DecodeStatus};
use crate::alist::parse_alist;
use crate::bp::{sum_product_decode, BpConfig};
use crate::channel::{llr_awgn, snr_to_sigma, transmit_awgn, BlockRng, LlrVector};
use crate::code::{random_regular_ldpc, ParityCheckCode};
use crate::error::{AlistError, CodeError, DecodeError};
use crate::ml::ml_lower_bound;
use crate::rpc::{decode_with_rpc, RpcBudget};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid {field}: {reason}")]
    InvalidSpec { field: &'static str, reason: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("{path}: {source}")]
    Alist { path: String, source: AlistError },
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("block {block}: {source}")]
    Decode { block: usize, source: DecodeError },
}

impl HarnessError {
    /// Errors caused by the request rather than by the run; a generator
    /// that runs out of re-pairing attempts is a run failure.
    pub fn is_invalid_spec(&self) -> bool {
        match self {
            HarnessError::InvalidSpec { .. } => true,
            HarnessError::Code(e) => !matches!(e, CodeError::ParallelEdges { .. }),
            _ => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecoderKind {
    Adaptive,
    Standard,
    Rpc,
    Bp,
}

impl DecoderKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DecoderKind::Adaptive => "adaptive",
            DecoderKind::Standard => "standard",
            DecoderKind::Rpc => "rpc",
            DecoderKind::Bp => "bp",
        }
    }
}

impl std::str::FromStr for DecoderKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "adaptive" => Ok(DecoderKind::Adaptive),
            "standard" => Ok(DecoderKind::Standard),
            "rpc" => Ok(DecoderKind::Rpc),
            "bp" => Ok(DecoderKind::Bp),
            _ => Err(format!("unknown decoder `{s}` (expected adaptive, standard, rpc or bp)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    DecodeOne,
    SweepDc,
    SweepN,
    SweepM,
    Wer,
    Timing,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CodeSource {
    Alist(PathBuf),
    Generated { n: usize, dv: usize, dc: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub code: CodeSource,
    pub snr_db: Vec<f64>,
    pub blocks: usize,
    pub decoders: Vec<DecoderKind>,
    pub budget: RpcBudget,
    pub master_seed: u64,
    pub warm_start: bool,
    /// Sweep points: check degrees, lengths or check counts by `kind`.
    pub sweep: Vec<usize>,
    /// Decode the noise-free channel output instead of a noisy one.
    pub noiseless: bool,
    pub output: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn new(kind: ExperimentKind, code: CodeSource) -> Self {
        ExperimentSpec {
            kind,
            code,
            snr_db: vec![-1.0],
            blocks: 100,
            decoders: vec![DecoderKind::Adaptive],
            budget: RpcBudget::default(),
            master_seed: 1,
            warm_start: true,
            sweep: Vec::new(),
            noiseless: false,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |field, reason: &str| Err(HarnessError::InvalidSpec { field, reason: reason.into() });
        if self.blocks == 0 {
            return bad("blocks", "must be at least 1");
        }
        if self.snr_db.is_empty() {
            return bad("snr", "list is empty");
        }
        if self.snr_db.iter().any(|s| !s.is_finite()) {
            return bad("snr", "values must be finite");
        }
        if self.decoders.is_empty() {
            return bad("decoder", "list is empty");
        }
        if self.budget.c_max == 0 {
            return bad("cmax", "must be at least 1");
        }
        let sweeping = matches!(self.kind, ExperimentKind::SweepDc | ExperimentKind::SweepN | ExperimentKind::SweepM);
        if sweeping {
            if self.sweep.is_empty() {
                return bad("sweep", "list is empty");
            }
            if !matches!(self.code, CodeSource::Generated { .. }) {
                return bad("code", "sweeps need a generated code (--gen)");
            }
        }
        if let CodeSource::Generated { n, dv, dc } = self.code {
            if n == 0 || dv < 2 || dc < 2 {
                return bad("gen", "needs n >= 1, dv >= 2, dc >= 2");
            }
        }
        Ok(())
    }
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockRecord {
    pub block: usize,
    pub seed: u64,
    pub decoder: &'static str,
    pub snr_db: f64,
    pub status: &'static str,
    pub iterations: usize,
    pub cuts_added: usize,
    pub final_parity_constraints: usize,
    pub rpc_cuts_added: usize,
    pub lp_pivots: usize,
    pub elapsed_ns: u128,
    pub wrong_codeword: bool,
}

impl BlockRecord {
    /// Block error: no certified codeword, or the wrong one. A converged BP
    /// decision counts as a codeword.
    pub fn failed(&self) -> bool {
        self.wrong_codeword || !(self.status == "MlCodeword" || self.status == "Converged")
    }
}

/// A decoded block with everything the audits need.
#[derive(Clone, Debug)]
pub struct BlockResult {
    pub record: BlockRecord,
    pub gamma: LlrVector,
    /// Absent for BP.
    pub outcome: Option<DecodeOutcome>,
}

/// Seed of block `index`: a splitmix64 finalizer over the master seed and
/// the index.
pub fn derive_seed(master_seed: u64, index: u64) -> u64 {
    let mut z = master_seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for generating a code from the master seed and its parameters.
pub fn code_seed(master_seed: u64, n: usize, dv: usize, dc: usize) -> u64 {
    let params = (n as u64) << 32 | (dv as u64) << 16 | dc as u64;
    derive_seed(derive_seed(master_seed, u64::MAX), params)
}

/// Channel output LLRs for one block.
pub fn block_llr(n: usize, snr_db: f64, seed: u64, noiseless: bool) -> LlrVector {
    let sigma = snr_to_sigma(snr_db);
    let received = if noiseless {
        vec![1.0; n]
    } else {
        transmit_awgn(&vec![0u8; n], sigma, &mut BlockRng::seed_from_u64(seed))
    };
    llr_awgn(&received, sigma)
}

/// Generator for the RPC cycle search, a separate stream of the block seed.
pub fn rpc_rng(seed: u64) -> BlockRng {
    let mut rng = BlockRng::seed_from_u64(seed);
    rng.set_stream(1);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockSettings {
    pub decoder: DecoderKind,
    pub snr_db: f64,
    pub options: DecodeOptions,
    pub budget: RpcBudget,
    pub noiseless: bool,
}

impl BlockSettings {
    pub fn new(decoder: DecoderKind, snr_db: f64) -> Self {
        BlockSettings {
            decoder,
            snr_db,
            options: DecodeOptions::default(),
            budget: RpcBudget::default(),
            noiseless: false,
        }
    }
}

pub fn decode_block(
    code: &ParityCheckCode,
    settings: &BlockSettings,
    block: usize,
    seed: u64,
) -> Result<BlockResult, DecodeError> {
    let gamma = block_llr(code.n(), settings.snr_db, seed, settings.noiseless);
    let started = Instant::now();
    let mut record = BlockRecord {
        block,
        seed,
        decoder: settings.decoder.as_str(),
        snr_db: settings.snr_db,
        status: "",
        iterations: 0,
        cuts_added: 0,
        final_parity_constraints: 0,
        rpc_cuts_added: 0,
        lp_pivots: 0,
        elapsed_ns: 0,
        wrong_codeword: false,
    };
    let outcome = match settings.decoder {
        DecoderKind::Bp => {
            let r = sum_product_decode(code, &gamma, &BpConfig::default());
            record.status = if r.converged { "Converged" } else { "NotConverged" };
            record.iterations = r.iterations;
            record.wrong_codeword = r.converged && r.bits.iter().any(|&b| b != 0);
            None
        }
        kind => {
            let out = match kind {
                DecoderKind::Adaptive => decode_adaptive(code, &gamma, &settings.options)?,
                DecoderKind::Standard => decode_standard(code, &gamma, &settings.options)?,
                _ => decode_with_rpc(code, &gamma, &settings.options, &settings.budget, &mut rpc_rng(seed))?,
            };
            record.status = out.status.as_str();
            record.iterations = out.iterations;
            record.cuts_added = out.cuts_added_total;
            record.final_parity_constraints = out.final_parity_constraints;
            record.rpc_cuts_added = out.rpc_cuts_added;
            record.lp_pivots = out.lp_pivots_total;
            record.wrong_codeword =
                out.status == DecodeStatus::MlCodeword && out.hard_bits().iter().any(|&b| b != 0);
            Some(out)
        }
    };
    record.elapsed_ns = started.elapsed().as_nanos();
    Ok(BlockResult { record, gamma, outcome })
}

/// Decodes blocks `0..blocks` in parallel; results come back in block order.
pub fn run_blocks(
    code: &ParityCheckCode,
    settings: &BlockSettings,
    blocks: usize,
    master_seed: u64,
) -> Result<Vec<BlockResult>, HarnessError> {
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            decode_block(code, settings, b, derive_seed(master_seed, b as u64))
                .map_err(|source| HarnessError::Decode { block: b, source })
        })
        .collect()
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(failures: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = failures as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    let low = if failures == 0 { 0.0 } else { (centre - half).max(0.0) };
    let high = if failures == trials { 1.0 } else { (centre + half).min(1.0) };
    (low, high)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub decoder: String,
    pub snr_db: f64,
    pub code: String,
    pub blocks: usize,
    pub failures: usize,
    pub wer: f64,
    pub wer_low: f64,
    pub wer_high: f64,
    pub iterations_mean: f64,
    pub iterations_max: usize,
    pub constraints_mean: f64,
    pub constraints_max: usize,
    pub elapsed_mean_ns: f64,
    /// Set for the RPC decoder.
    pub ml_lower_bound: Option<f64>,
}

impl Summary {
    /// `key=value` pairs on one line, without the leading `#`.
    pub fn to_line(&self) -> String {
        let mut s = format!(
            "decoder={} snr_db={} code={} blocks={} failures={} wer={} wer_low={} wer_high={} \
             iterations_mean={} iterations_max={} constraints_mean={} constraints_max={} elapsed_mean_ns={:.0}",
            self.decoder,
            self.snr_db,
            self.code,
            self.blocks,
            self.failures,
            self.wer,
            self.wer_low,
            self.wer_high,
            self.iterations_mean,
            self.iterations_max,
            self.constraints_mean,
            self.constraints_max,
            self.elapsed_mean_ns,
        );
        if let Some(lb) = self.ml_lower_bound {
            s.push_str(&format!(" ml_lower_bound={lb}"));
        }
        s
    }
}

/// Summary rows grouped by decoder and SNR, in order of first appearance.
pub fn summarize(records: &[BlockRecord], code: &str) -> Vec<Summary> {
    let mut keys: Vec<(&'static str, f64)> = Vec::new();
    for r in records {
        if !keys.iter().any(|k| k.0 == r.decoder && k.1 == r.snr_db) {
            keys.push((r.decoder, r.snr_db));
        }
    }
    keys.into_iter()
        .map(|(decoder, snr)| {
            let group: Vec<&BlockRecord> =
                records.iter().filter(|r| r.decoder == decoder && r.snr_db == snr).collect();
            let blocks = group.len();
            let failures = group.iter().filter(|r| r.failed()).count();
            let (lo, hi) = wilson_interval(failures, blocks);
            let mean = |f: &dyn Fn(&BlockRecord) -> f64| group.iter().map(|r| f(r)).sum::<f64>() / blocks as f64;
            let wrong = group.iter().filter(|r| r.wrong_codeword).count();
            Summary {
                decoder: decoder.to_string(),
                snr_db: snr,
                code: code.to_string(),
                blocks,
                failures,
                wer: failures as f64 / blocks as f64,
                wer_low: lo,
                wer_high: hi,
                iterations_mean: mean(&|r| r.iterations as f64),
                iterations_max: group.iter().map(|r| r.iterations).max().unwrap_or(0),
                constraints_mean: mean(&|r| r.final_parity_constraints as f64),
                constraints_max: group.iter().map(|r| r.final_parity_constraints).max().unwrap_or(0),
                elapsed_mean_ns: mean(&|r| r.elapsed_ns as f64),
                ml_lower_bound: (decoder == DecoderKind::Rpc.as_str()).then(|| ml_lower_bound(wrong, blocks)),
            }
        })
        .collect()
}

/// A code under test plus the label used in summary rows.
struct CodeCase {
    code: ParityCheckCode,
    label: String,
}

fn generated(master_seed: u64, n: usize, dv: usize, dc: usize) -> Result<CodeCase, HarnessError> {
    let code = random_regular_ldpc(n, dv, dc, code_seed(master_seed, n, dv, dc))?;
    Ok(CodeCase { code, label: format!("gen({n},{dv},{dc})") })
}

fn code_cases(spec: &ExperimentSpec) -> Result<Vec<CodeCase>, HarnessError> {
    let invalid = |reason: String| HarnessError::InvalidSpec { field: "sweep", reason };
    match (&spec.code, spec.kind) {
        (CodeSource::Alist(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|source| HarnessError::Io { path: path.display().to_string(), source })?;
            let code = parse_alist(&text)
                .map_err(|source| HarnessError::Alist { path: path.display().to_string(), source })?;
            Ok(vec![CodeCase { code, label: path.display().to_string() }])
        }
        (&CodeSource::Generated { n, .. }, ExperimentKind::SweepDc) => spec
            .sweep
            .iter()
            .map(|&d| {
                // rate 1/2: variable degree is half the check degree
                if d % 2 != 0 {
                    return Err(invalid(format!("check degree {d} is odd, rate 1/2 needs it even")));
                }
                generated(spec.master_seed, n, d / 2, d)
            })
            .collect(),
        (&CodeSource::Generated { dv, dc, .. }, ExperimentKind::SweepN) => {
            spec.sweep.iter().map(|&len| generated(spec.master_seed, len, dv, dc)).collect()
        }
        (&CodeSource::Generated { n, dv, .. }, ExperimentKind::SweepM) => spec
            .sweep
            .iter()
            .map(|&m| {
                if m == 0 || (n * dv) % m != 0 {
                    return Err(invalid(format!("{m} checks do not divide n*dv = {}", n * dv)));
                }
                generated(spec.master_seed, n, dv, n * dv / m)
            })
            .collect(),
        (&CodeSource::Generated { n, dv, dc }, _) => Ok(vec![generated(spec.master_seed, n, dv, dc)?]),
    }
}

/// Runs `spec`, writing block records and `#`-prefixed summary rows to
/// `out`. Returns the summaries.
pub fn run_experiment<W: Write>(spec: &ExperimentSpec, out: W) -> Result<Vec<Summary>, HarnessError> {
    spec.validate()?;
    let cases = code_cases(spec)?;
    let blocks = if spec.kind == ExperimentKind::DecodeOne { 1 } else { spec.blocks };
    let mut out = out;
    let mut summaries = Vec::new();
    let mut header = true;
    let io_err = |source| HarnessError::Io { path: "output".into(), source };
    for case in &cases {
        for &decoder in &spec.decoders {
            for &snr in &spec.snr_db {
                let settings = BlockSettings {
                    decoder,
                    snr_db: snr,
                    options: DecodeOptions { warm_start: spec.warm_start, ..DecodeOptions::default() },
                    budget: spec.budget,
                    noiseless: spec.noiseless,
                };
                let results = run_blocks(&case.code, &settings, blocks, spec.master_seed)?;
                let records: Vec<BlockRecord> = results.into_iter().map(|r| r.record).collect();
                let mut writer = csv::WriterBuilder::new().has_headers(header).from_writer(Vec::new());
                for r in &records {
                    writer.serialize(r)?;
                }
                header = false;
                let bytes = writer.into_inner().map_err(|e| io_err(e.into_error()))?;
                out.write_all(&bytes).map_err(io_err)?;
                let group = summarize(&records, &case.label);
                for s in &group {
                    writeln!(out, "# {}", s.to_line()).map_err(io_err)?;
                }
                summaries.extend(group);
            }
        }
    }
    out.flush().map_err(io_err)?;
    Ok(summaries)
}

/// Mean wall-clock time per block, for quick timing comparisons.
pub fn mean_elapsed(records: &[BlockRecord]) -> Duration {
    if records.is_empty() {
        return Duration::ZERO;
    }
    let total: u128 = records.iter().map(|r| r.elapsed_ns).sum();
    Duration::from_nanos((total / records.len() as u128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_values() {
        // reference values from statsmodels' proportion_confint(method="wilson")
        let (lo, hi) = wilson_interval(10, 100);
        assert!((lo - 0.055_229_137_060_675_09).abs() < 1e-12, "{lo}");
        assert!((hi - 0.174_365_661_504_913_48).abs() < 1e-12, "{hi}");
        let (lo, hi) = wilson_interval(0, 1000);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.003_826_758_485_555_125).abs() < 1e-12, "{hi}");
    }

    #[test]
    fn seeds_are_distinct_and_stable() {
        let a: Vec<u64> = (0..1000).map(|b| derive_seed(7, b)).collect();
        let set: std::collections::HashSet<_> = a.iter().collect();
        assert_eq!(set.len(), 1000);
        assert_eq!(derive_seed(7, 3), a[3]);
        assert_ne!(derive_seed(8, 3), a[3]);
    }

    #[test]
    fn summary_arithmetic() {
        let rec = |failed: bool| BlockRecord {
            block: 0,
            seed: 0,
            decoder: "adaptive",
            snr_db: 1.0,
            status: if failed { "Pseudocodeword" } else { "MlCodeword" },
            iterations: 3,
            cuts_added: 0,
            final_parity_constraints: 10,
            rpc_cuts_added: 0,
            lp_pivots: 0,
            elapsed_ns: 0,
            wrong_codeword: false,
        };
        let all_ok: Vec<_> = (0..5).map(|_| rec(false)).collect();
        assert_eq!(summarize(&all_ok, "c")[0].wer, 0.0);
        let mixed: Vec<_> = (0..100).map(|i| rec(i < 10)).collect();
        let s = &summarize(&mixed, "c")[0];
        assert_eq!(s.wer, 0.1);
        assert_eq!(s.failures, 10);
        assert!(s.wer_low < 0.1 && s.wer_high > 0.1);
        assert!(s.ml_lower_bound.is_none());
    }

    #[test]
    fn noiseless_block() {
        let code = random_regular_ldpc(24, 3, 6, 1).unwrap();
        let mut settings = BlockSettings::new(DecoderKind::Adaptive, 2.0);
        settings.noiseless = true;
        let r = decode_block(&code, &settings, 0, 5).unwrap();
        assert_eq!(r.record.status, "MlCodeword");
        assert_eq!(r.record.cuts_added, 0);
        assert!(!r.record.failed());
    }
}
