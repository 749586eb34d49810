//! C ABI over `frac-total`.
//!
//! Objects cross the boundary as opaque handles created by `ft_*_new` or
//! `ft_*_parse` and released by the matching `ft_*_free`. Every fallible
//! call returns an [`FtStatus`]; the message of the last failure on the
//! calling thread is available from [`ft_last_error`]. Strings returned to
//! the caller are released with [`ft_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use frac_total::assembler;
use frac_total::factor::complement_two_factor;
use frac_total::matching::maximum_matching;
use frac_total::recurrence::{pq_table, to_f64, RecurrenceTable};
use frac_total::sampler::Sampler;
use frac_total::sparse::spaced_boundary;
use frac_total::{Error, Graph};
use num_bigint::BigInt;
use num_rational::BigRational;

/// Status codes of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidGraph = 4,
    Precondition = 5,
    Budget = 6,
    Internal = 7,
    Io = 8,
    OutOfRange = 9,
}

/// Opaque graph handle.
pub struct FtGraph(Graph);

/// Opaque level-table handle.
pub struct FtTable(RecurrenceTable);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: FtStatus, msg: impl Into<String>) -> FtStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> FtStatus {
    let status = match &e {
        Error::Parse { .. } => FtStatus::Parse,
        Error::InvalidGraph(_) => FtStatus::InvalidGraph,
        Error::Precondition(_) => FtStatus::Precondition,
        Error::Budget(_) => FtStatus::Budget,
        Error::Invariant(_) => FtStatus::Internal,
        Error::Io(_) => FtStatus::Io,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> FtStatus) -> FtStatus {
    std::panic::catch_unwind(std::panic::AssertUnwindSafe(f))
        .unwrap_or_else(|_| fail(FtStatus::Internal, "panic inside frac-total"))
}

fn rational(num: i64, den: i64) -> Result<BigRational, FtStatus> {
    if den == 0 {
        return Err(fail(FtStatus::Precondition, "zero denominator"));
    }
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ft_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn ft_status_name(status: FtStatus) -> *const c_char {
    let name: &'static CStr = match status {
        FtStatus::Ok => c"ok",
        FtStatus::NullPointer => c"null pointer",
        FtStatus::InvalidUtf8 => c"invalid utf-8",
        FtStatus::Parse => c"parse error",
        FtStatus::InvalidGraph => c"invalid graph",
        FtStatus::Precondition => c"precondition failed",
        FtStatus::Budget => c"budget exhausted",
        FtStatus::Internal => c"internal error",
        FtStatus::Io => c"i/o error",
        FtStatus::OutOfRange => c"index out of range",
    };
    name.as_ptr()
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn ft_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a graph in the 1-indexed `p`/`e` text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ft_graph_parse(text: *const c_char, out: *mut *mut FtGraph) -> FtStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return fail(FtStatus::NullPointer, "null argument");
        }
        let Ok(text) = CStr::from_ptr(text).to_str() else {
            return fail(FtStatus::InvalidUtf8, "graph text is not utf-8");
        };
        match Graph::parse(text) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(FtGraph(g)));
                FtStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// The Petersen graph.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ft_graph_petersen(out: *mut *mut FtGraph) -> FtStatus {
    if out.is_null() {
        return fail(FtStatus::NullPointer, "null argument");
    }
    *out = Box::into_raw(Box::new(FtGraph(frac_total::generate::petersen())));
    FtStatus::Ok
}

/// # Safety
/// `g` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ft_graph_free(g: *mut FtGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn ft_graph_vertex_count(g: *const FtGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n())
}

/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn ft_graph_edge_count(g: *const FtGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.m())
}

/// Girth, or 0 for a forest.
///
/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn ft_graph_girth(g: *const FtGraph) -> usize {
    g.as_ref().and_then(|g| g.0.girth()).unwrap_or(0)
}

/// Level table for `k` levels, damping `xi_num / xi_den` and maximum degree
/// `delta`.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ft_table_new(
    k: usize,
    xi_num: i64,
    xi_den: i64,
    delta: usize,
    out: *mut *mut FtTable,
) -> FtStatus {
    guard(|| {
        if out.is_null() {
            return fail(FtStatus::NullPointer, "null argument");
        }
        let xi = match rational(xi_num, xi_den) {
            Ok(x) => x,
            Err(s) => return s,
        };
        match pq_table(k, &xi, delta) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(FtTable(t)));
                FtStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `t` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ft_table_free(t: *mut FtTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Number of levels.
///
/// # Safety
/// `t` must be a live table handle.
#[no_mangle]
pub unsafe extern "C" fn ft_table_levels(t: *const FtTable) -> usize {
    t.as_ref().map_or(0, |t| t.0.k)
}

/// `p(level)` and `q(level)` for `level` in `1..=k`, as doubles.
///
/// # Safety
/// `t` must be a live table handle, `p` and `q` writable pointers.
#[no_mangle]
pub unsafe extern "C" fn ft_table_get(t: *const FtTable, level: usize, p: *mut f64, q: *mut f64) -> FtStatus {
    let (Some(t), false, false) = (t.as_ref(), p.is_null(), q.is_null()) else {
        return fail(FtStatus::NullPointer, "null argument");
    };
    if level == 0 || level > t.0.k {
        return fail(FtStatus::OutOfRange, format!("level {level} outside 1..={}", t.0.k));
    }
    *p = to_f64(&t.0.p[level - 1]);
    *q = to_f64(&t.0.q[level - 1]);
    FtStatus::Ok
}

/// Exact `p(level)` and `q(level)` as `"num/den"` strings, freed with
/// [`ft_string_free`].
///
/// # Safety
/// `t` must be a live table handle, `p` and `q` writable pointers.
#[no_mangle]
pub unsafe extern "C" fn ft_table_get_exact(
    t: *const FtTable,
    level: usize,
    p: *mut *mut c_char,
    q: *mut *mut c_char,
) -> FtStatus {
    let (Some(t), false, false) = (t.as_ref(), p.is_null(), q.is_null()) else {
        return fail(FtStatus::NullPointer, "null argument");
    };
    if level == 0 || level > t.0.k {
        return fail(FtStatus::OutOfRange, format!("level {level} outside 1..={}", t.0.k));
    }
    let show = |x: &BigRational| format!("{}/{}", x.numer(), x.denom());
    *p = into_c_string(show(&t.0.p[level - 1]));
    *q = into_c_string(show(&t.0.q[level - 1]));
    FtStatus::Ok
}

/// `p*` and `q*` as doubles.
///
/// # Safety
/// `t` must be a live table handle, `p_star` and `q_star` writable pointers.
#[no_mangle]
pub unsafe extern "C" fn ft_table_means(t: *const FtTable, p_star: *mut f64, q_star: *mut f64) -> FtStatus {
    let (Some(t), false, false) = (t.as_ref(), p_star.is_null(), q_star.is_null()) else {
        return fail(FtStatus::NullPointer, "null argument");
    };
    *p_star = to_f64(&t.0.p_star());
    *q_star = to_f64(&t.0.q_star());
    FtStatus::Ok
}

/// Exact fractional total chromatic number as a `"num/den"` string.
///
/// # Safety
/// `g` must be a live graph handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ft_fractional_total_chromatic(g: *const FtGraph, out: *mut *mut c_char) -> FtStatus {
    guard(|| {
        let (Some(g), false) = (g.as_ref(), out.is_null()) else {
            return fail(FtStatus::NullPointer, "null argument");
        };
        match assembler::fractional_total_chromatic(&g.0) {
            Ok(sol) => {
                *out = into_c_string(format!("{}/{}", sol.value.numer(), sol.value.denom()));
                FtStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Run `trials` samples on a cubic graph, with the 2-factor complementary to
/// a maximum matching and boundary edges spaced `gap` apart, and write the
/// number of structural violations found.
///
/// # Safety
/// `g` must be a live graph handle and `violations` a writable pointer.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn ft_sample_check(
    g: *const FtGraph,
    k: usize,
    xi_num: i64,
    xi_den: i64,
    gap: usize,
    trials: u64,
    seed: u64,
    violations: *mut u64,
) -> FtStatus {
    guard(|| {
        let (Some(g), false) = (g.as_ref(), violations.is_null()) else {
            return fail(FtStatus::NullPointer, "null argument");
        };
        let xi = match rational(xi_num, xi_den) {
            Ok(x) => x,
            Err(s) => return s,
        };
        let run = || -> frac_total::Result<u64> {
            let m = maximum_matching(&g.0);
            let f = complement_two_factor(&g.0, &m)?;
            let b = spaced_boundary(&f, gap, 0);
            let sampler = Sampler::new(&g.0, &f, &b, k, &xi)?;
            if trials == 0 {
                return Err(Error::Precondition("trials must be positive".into()));
            }
            Ok(sampler.run_trials(trials, seed)?.violations.total() as u64)
        };
        match run() {
            Ok(v) => {
                *violations = v;
                FtStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}
