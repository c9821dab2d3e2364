//! C interface to `lpdec`.
//!
//! Codes live behind an opaque [`LpdCode`] handle. Every fallible call
//! returns an [`LpdStatus`]; on failure a message is kept per thread and can
//! be read with [`lpd_last_error_message`]. Output buffers are owned by the
//! caller and must hold `n` elements.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use lpdec::adaptive::{DecodeOptions, DecodeOutcome, DecodeStatus};
use lpdec::bp::BpConfig;
use lpdec::channel::LlrVector;
use lpdec::code::ParityCheckCode;
use lpdec::rpc::RpcBudget;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    CodeError = 4,
    DecodeError = 5,
    Panic = 6,
}

/// Opaque parity-check code.
pub struct LpdCode {
    inner: ParityCheckCode,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpdDecodeStatus {
    MlCodeword = 0,
    Pseudocodeword = 1,
    LimitExceeded = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpdDecodeOptions {
    /// Cap on LP solves of the adaptive loop; 0 means `n`.
    pub max_iterations: usize,
    pub warm_start: bool,
    pub epsilon_int: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpdRpcBudget {
    pub c_max: usize,
    pub lp_resolve_cap: usize,
    /// Wall-clock cap in milliseconds; 0 means none.
    pub t_max_ms: u64,
    pub batch_cuts: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpdDecodeStats {
    pub status: LpdDecodeStatus,
    pub integral: bool,
    pub iterations: usize,
    pub cuts_added: usize,
    pub final_parity_constraints: usize,
    pub rpc_cuts_added: usize,
    pub lp_pivots: usize,
    pub objective: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: LpdStatus, msg: impl Into<String>) -> LpdStatus {
    set_error(msg);
    status
}

fn guarded(f: impl FnOnce() -> LpdStatus) -> LpdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(LpdStatus::Panic, "internal panic"),
    }
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn lpd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[no_mangle]
pub extern "C" fn lpd_decode_options_default() -> LpdDecodeOptions {
    let d = DecodeOptions::default();
    LpdDecodeOptions { max_iterations: 0, warm_start: d.warm_start, epsilon_int: d.epsilon_int }
}

#[no_mangle]
pub extern "C" fn lpd_rpc_budget_default() -> LpdRpcBudget {
    let d = RpcBudget::default();
    LpdRpcBudget { c_max: d.c_max, lp_resolve_cap: d.lp_resolve_cap, t_max_ms: 0, batch_cuts: d.batch }
}

/// Parses alist text (NUL-terminated) into a new code.
///
/// # Safety
/// `text` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lpd_code_from_alist(text: *const c_char, out: *mut *mut LpdCode) -> LpdStatus {
    guarded(|| {
        if text.is_null() || out.is_null() {
            return fail(LpdStatus::NullPointer, "null argument");
        }
        let Ok(text) = CStr::from_ptr(text).to_str() else {
            return fail(LpdStatus::InvalidArgument, "alist text is not UTF-8");
        };
        match lpdec::alist::parse_alist(text) {
            Ok(code) => {
                *out = Box::into_raw(Box::new(LpdCode { inner: code }));
                LpdStatus::Ok
            }
            Err(e) => fail(LpdStatus::ParseError, e.to_string()),
        }
    })
}

/// Random `(dv, dc)`-regular code of length `n`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lpd_code_random_regular(
    n: usize,
    dv: usize,
    dc: usize,
    seed: u64,
    out: *mut *mut LpdCode,
) -> LpdStatus {
    guarded(|| {
        if out.is_null() {
            return fail(LpdStatus::NullPointer, "null argument");
        }
        match lpdec::code::random_regular_ldpc(n, dv, dc, seed) {
            Ok(code) => {
                *out = Box::into_raw(Box::new(LpdCode { inner: code }));
                LpdStatus::Ok
            }
            Err(e) => fail(LpdStatus::CodeError, e.to_string()),
        }
    })
}

/// Releases a code. Null is ignored.
///
/// # Safety
/// `code` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lpd_code_free(code: *mut LpdCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Code length, or 0 for null.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lpd_code_n(code: *const LpdCode) -> usize {
    code.as_ref().map_or(0, |c| c.inner.n())
}

/// Number of checks, or 0 for null.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lpd_code_m(code: *const LpdCode) -> usize {
    code.as_ref().map_or(0, |c| c.inner.m())
}

unsafe fn inputs<'a>(
    code: *const LpdCode,
    gamma: *const f64,
    len: usize,
) -> Result<(&'a ParityCheckCode, LlrVector), LpdStatus> {
    let Some(code) = code.as_ref() else {
        return Err(fail(LpdStatus::NullPointer, "null code"));
    };
    if gamma.is_null() {
        return Err(fail(LpdStatus::NullPointer, "null gamma"));
    }
    if len != code.inner.n() {
        return Err(fail(
            LpdStatus::InvalidArgument,
            format!("gamma has {len} entries, code length is {}", code.inner.n()),
        ));
    }
    let g = std::slice::from_raw_parts(gamma, len).to_vec();
    match LlrVector::new(g) {
        Some(v) => Ok((&code.inner, v)),
        None => Err(fail(LpdStatus::InvalidArgument, "gamma has a non-finite entry")),
    }
}

fn options(opts: *const LpdDecodeOptions) -> DecodeOptions {
    let mut d = DecodeOptions::default();
    if let Some(o) = unsafe { opts.as_ref() } {
        d.max_iterations = (o.max_iterations > 0).then_some(o.max_iterations);
        d.warm_start = o.warm_start;
        d.epsilon_int = o.epsilon_int;
    }
    d
}

unsafe fn write_outcome(out: &DecodeOutcome, x_out: *mut f64, stats_out: *mut LpdDecodeStats) {
    if !x_out.is_null() {
        std::slice::from_raw_parts_mut(x_out, out.x.len()).copy_from_slice(&out.x);
    }
    if let Some(s) = stats_out.as_mut() {
        *s = LpdDecodeStats {
            status: match out.status {
                DecodeStatus::MlCodeword => LpdDecodeStatus::MlCodeword,
                DecodeStatus::Pseudocodeword => LpdDecodeStatus::Pseudocodeword,
                DecodeStatus::LimitExceeded => LpdDecodeStatus::LimitExceeded,
            },
            integral: out.integral,
            iterations: out.iterations,
            cuts_added: out.cuts_added_total,
            final_parity_constraints: out.final_parity_constraints,
            rpc_cuts_added: out.rpc_cuts_added,
            lp_pivots: out.lp_pivots_total,
            objective: out.objective_value,
        };
    }
}

/// Adaptive LP decoding. `opts` may be null for defaults; `x_out` and
/// `stats_out` may be null when not wanted.
///
/// # Safety
/// Pointers must be valid; `gamma` and `x_out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn lpd_decode_adaptive(
    code: *const LpdCode,
    gamma: *const f64,
    len: usize,
    opts: *const LpdDecodeOptions,
    x_out: *mut f64,
    stats_out: *mut LpdDecodeStats,
) -> LpdStatus {
    guarded(|| {
        let (code, gamma) = match inputs(code, gamma, len) {
            Ok(v) => v,
            Err(s) => return s,
        };
        match lpdec::adaptive::decode_adaptive(code, &gamma, &options(opts)) {
            Ok(out) => {
                write_outcome(&out, x_out, stats_out);
                LpdStatus::Ok
            }
            Err(e) => fail(LpdStatus::DecodeError, e.to_string()),
        }
    })
}

/// LP decoding with every parity constraint present from the start.
///
/// # Safety
/// As [`lpd_decode_adaptive`].
#[no_mangle]
pub unsafe extern "C" fn lpd_decode_standard(
    code: *const LpdCode,
    gamma: *const f64,
    len: usize,
    opts: *const LpdDecodeOptions,
    x_out: *mut f64,
    stats_out: *mut LpdDecodeStats,
) -> LpdStatus {
    guarded(|| {
        let (code, gamma) = match inputs(code, gamma, len) {
            Ok(v) => v,
            Err(s) => return s,
        };
        match lpdec::adaptive::decode_standard(code, &gamma, &options(opts)) {
            Ok(out) => {
                write_outcome(&out, x_out, stats_out);
                LpdStatus::Ok
            }
            Err(e) => fail(LpdStatus::DecodeError, e.to_string()),
        }
    })
}

/// Adaptive decoding followed by redundant-parity-check cuts. The cycle
/// search is seeded with `seed`; `budget` may be null for defaults.
///
/// # Safety
/// As [`lpd_decode_adaptive`].
#[no_mangle]
pub unsafe extern "C" fn lpd_decode_rpc(
    code: *const LpdCode,
    gamma: *const f64,
    len: usize,
    opts: *const LpdDecodeOptions,
    budget: *const LpdRpcBudget,
    seed: u64,
    x_out: *mut f64,
    stats_out: *mut LpdDecodeStats,
) -> LpdStatus {
    guarded(|| {
        let (code, gamma) = match inputs(code, gamma, len) {
            Ok(v) => v,
            Err(s) => return s,
        };
        let mut b = RpcBudget::default();
        if let Some(c) = budget.as_ref() {
            if c.c_max == 0 {
                return fail(LpdStatus::InvalidArgument, "c_max must be at least 1");
            }
            b = RpcBudget {
                c_max: c.c_max,
                lp_resolve_cap: c.lp_resolve_cap,
                t_max: (c.t_max_ms > 0).then(|| Duration::from_millis(c.t_max_ms)),
                batch: c.batch_cuts,
            };
        }
        let mut rng = lpdec::harness::rpc_rng(seed);
        match lpdec::rpc::decode_with_rpc(code, &gamma, &options(opts), &b, &mut rng) {
            Ok(out) => {
                write_outcome(&out, x_out, stats_out);
                LpdStatus::Ok
            }
            Err(e) => fail(LpdStatus::DecodeError, e.to_string()),
        }
    })
}

/// Brute-force ML decoding for codes of length at most 28.
///
/// # Safety
/// Pointers must be valid; `codeword_out` must hold `len` bytes. `cost_out`
/// and `unique_out` may be null.
#[no_mangle]
pub unsafe extern "C" fn lpd_ml_decode(
    code: *const LpdCode,
    gamma: *const f64,
    len: usize,
    codeword_out: *mut u8,
    cost_out: *mut f64,
    unique_out: *mut bool,
) -> LpdStatus {
    guarded(|| {
        let (code, gamma) = match inputs(code, gamma, len) {
            Ok(v) => v,
            Err(s) => return s,
        };
        if codeword_out.is_null() {
            return fail(LpdStatus::NullPointer, "null codeword buffer");
        }
        match lpdec::ml::ml_decode_bruteforce(code, &gamma) {
            Ok(r) => {
                std::slice::from_raw_parts_mut(codeword_out, len).copy_from_slice(&r.codeword);
                if let Some(c) = cost_out.as_mut() {
                    *c = r.cost;
                }
                if let Some(u) = unique_out.as_mut() {
                    *u = r.unique;
                }
                LpdStatus::Ok
            }
            Err(e) => fail(LpdStatus::CodeError, e.to_string()),
        }
    })
}

/// Sum-product decoding with at most `max_iterations` iterations (0 means
/// 100).
///
/// # Safety
/// Pointers must be valid; `bits_out` must hold `len` bytes.
/// `converged_out` and `iterations_out` may be null.
#[no_mangle]
pub unsafe extern "C" fn lpd_bp_decode(
    code: *const LpdCode,
    gamma: *const f64,
    len: usize,
    max_iterations: usize,
    bits_out: *mut u8,
    converged_out: *mut bool,
    iterations_out: *mut usize,
) -> LpdStatus {
    guarded(|| {
        let (code, gamma) = match inputs(code, gamma, len) {
            Ok(v) => v,
            Err(s) => return s,
        };
        if bits_out.is_null() {
            return fail(LpdStatus::NullPointer, "null bits buffer");
        }
        let mut cfg = BpConfig::default();
        if max_iterations > 0 {
            cfg.max_iterations = max_iterations;
        }
        let r = lpdec::bp::sum_product_decode(code, &gamma, &cfg);
        std::slice::from_raw_parts_mut(bits_out, len).copy_from_slice(&r.bits);
        if let Some(c) = converged_out.as_mut() {
            *c = r.converged;
        }
        if let Some(i) = iterations_out.as_mut() {
            *i = r.iterations;
        }
        LpdStatus::Ok
    })
}
