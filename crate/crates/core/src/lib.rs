//! Linear-programming decoders for binary linear codes.
//!
//! [`decode_adaptive`] solves the LP relaxation of maximum-likelihood
//! decoding by adding only the parity constraints the current optimum
//! violates. [`decode_with_rpc`] continues from a fractional optimum with
//! constraints of redundant parity checks found on cycles of the fractional
//! subgraph. The full relaxation ([`decode_standard`]), sum-product decoding
//! and brute-force ML decoding are included as baselines.

pub mod adaptive;
pub mod alist;
pub mod bp;
pub mod channel;
pub mod code;
pub mod cuts;
pub mod error;
pub mod gf2;
pub mod harness;
pub mod lp;
pub mod ml;
pub mod rpc;

pub use adaptive::{
    decode_adaptive, decode_standard, initial_constraints, verify_pseudocodeword_integrality,
    DecodeOptions, DecodeOutcome, DecodeStatus,
};
pub use alist::{emit_alist, parse_alist};
pub use bp::{sum_product_decode, BpConfig, BpResult};
pub use channel::{llr_awgn, snr_to_sigma, transmit_awgn, ChannelConfig, LlrVector};
pub use code::{random_regular_ldpc, CheckRow, ParityCheckCode};
pub use cuts::{constraint_from_subset, find_all_cuts, find_cut_for_check, Cut, CutSearcher};
pub use error::{AlistError, CodeError, CutError, DecodeError, LpError};
pub use gf2::enumerate_codewords;
pub use lp::{LinearConstraint, LpOptions, LpProblem, LpSolution, LpStatus};
pub use ml::{ml_decode_bruteforce, ml_lower_bound, MlResult};
pub use rpc::{decode_with_rpc, fractional_subgraph, random_cycle_search, try_rpc_cut, FractionalSubgraph, RpcBudget};
