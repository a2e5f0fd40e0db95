//! C ABI for the distinct-evaluation toolkit.
//!
//! Conventions:
//!
//! - Sequences are opaque handles created by `symdist_sequence_parse` or the
//!   construction entry points and released with `symdist_sequence_free`.
//! - Every fallible call returns a `SymdistStatus`; on any non-`Ok` status
//!   the thread-local message from `symdist_last_error_message` describes
//!   the failure until the next failing call on the same thread.
//! - Strings returned through out-parameters are NUL-terminated, UTF-8, and
//!   owned by the caller; release them with `symdist_string_free`.
//! - Panics never unwind across the boundary; they surface as
//!   `SymdistStatus::Panic`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use symdist::esp::eval_subset;
use symdist::params::parse_ratio;
use symdist::report::{bound_rows, Csv, BOUNDS_HEADER};
use symdist::scalar::Scalar;
use symdist::search::{min_m_search, Budget, Strategy};
use symdist::seqfile::{any_from_json, sequence_to_json, AnySequence};
use symdist::verify::{verify_distinct, VerifyMode, VerifyOptions};
use symdist::{Error, Int, ProblemParams, Sequence, SubsetRef};

/// Status codes for every FFI call. `Ok` is zero; everything else is an
/// error whose text is available from `symdist_last_error_message`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymdistStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Io = 4,
    IndexOutOfRange = 5,
    DimensionMismatch = 6,
    DomainError = 7,
    HypothesisViolated = 8,
    DegenerateFamily = 9,
    MemoryBudgetExceeded = 10,
    BudgetExceeded = 11,
    RetriesExhausted = 12,
    IdentityViolated = 13,
    SchemaMismatch = 14,
    Panic = 15,
}

/// Opaque handle to a validated sequence (integer- or rational-valued).
pub struct SymdistSequence {
    inner: AnySequence,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(e: &Error) -> SymdistStatus {
    match e {
        Error::IndexOutOfRange { .. } => SymdistStatus::IndexOutOfRange,
        Error::DimensionMismatch { .. } => SymdistStatus::DimensionMismatch,
        Error::DomainError(_) => SymdistStatus::DomainError,
        Error::HypothesisViolated(_) => SymdistStatus::HypothesisViolated,
        Error::DegenerateFamily => SymdistStatus::DegenerateFamily,
        Error::MemoryBudgetExceeded { .. } => SymdistStatus::MemoryBudgetExceeded,
        Error::BudgetExceeded { .. } => SymdistStatus::BudgetExceeded,
        Error::RetriesExhausted { .. } => SymdistStatus::RetriesExhausted,
        Error::IdentityViolated { .. } => SymdistStatus::IdentityViolated,
        Error::SchemaMismatch(_) => SymdistStatus::SchemaMismatch,
        Error::Parse(_) => SymdistStatus::Parse,
        Error::Io(_) => SymdistStatus::Io,
    }
}

fn fail(e: &Error) -> SymdistStatus {
    set_error(&e.to_string());
    status_of(e)
}

/// Runs a closure with panic containment; the closure reports its own
/// errors through `SymdistStatus`.
fn guarded<F: FnOnce() -> SymdistStatus>(f: F) -> SymdistStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            SymdistStatus::Panic
        }
    }
}

/// # Safety
/// `s` must be a valid NUL-terminated string pointer.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, SymdistStatus> {
    if s.is_null() {
        set_error(&format!("{what} is NULL"));
        return Err(SymdistStatus::NullArgument);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error(&format!("{what} is not valid UTF-8"));
        SymdistStatus::InvalidUtf8
    })
}

fn write_string(out: *mut *mut c_char, text: String) -> SymdistStatus {
    let sanitized: String = text.chars().filter(|&c| c != '\0').collect();
    match CString::new(sanitized) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            SymdistStatus::Ok
        }
        Err(_) => {
            set_error("output contained an interior NUL");
            SymdistStatus::Io
        }
    }
}

/// Most recent error message on this thread; valid until the next failing
/// call on the same thread. Never NULL.
#[no_mangle]
pub extern "C" fn symdist_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parses a sequence file document (JSON text) into a handle.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symdist_sequence_parse(
    json: *const c_char,
    out: *mut *mut SymdistSequence,
) -> SymdistStatus {
    guarded(|| {
        if out.is_null() {
            set_error("out is NULL");
            return SymdistStatus::NullArgument;
        }
        let text = match read_str(json, "json") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match any_from_json(text) {
            Ok(seq) => {
                *out = Box::into_raw(Box::new(SymdistSequence { inner: seq }));
                SymdistStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a sequence handle. NULL is ignored.
///
/// # Safety
/// `seq` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn symdist_sequence_free(seq: *mut SymdistSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn symdist_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn seq_ref<'a>(seq: *const SymdistSequence) -> Result<&'a AnySequence, SymdistStatus> {
    if seq.is_null() {
        set_error("sequence handle is NULL");
        return Err(SymdistStatus::NullArgument);
    }
    Ok(&(*seq).inner)
}

unsafe fn seq_params(seq: *const SymdistSequence) -> Option<ProblemParams> {
    match seq_ref(seq) {
        Ok(AnySequence::Int(s)) => Some(s.params().clone()),
        Ok(AnySequence::Rat(s)) => Some(s.params().clone()),
        Err(_) => None,
    }
}

/// Number of elements; 0 when the handle is NULL.
///
/// # Safety
/// `seq` must be a live handle from this library or NULL.
#[no_mangle]
pub unsafe extern "C" fn symdist_sequence_n(seq: *const SymdistSequence) -> u32 {
    seq_params(seq).map_or(0, |p| p.n())
}

/// Coordinates per element; 0 when the handle is NULL.
///
/// # Safety
/// `seq` must be a live handle from this library or NULL.
#[no_mangle]
pub unsafe extern "C" fn symdist_sequence_k(seq: *const SymdistSequence) -> u32 {
    seq_params(seq).map_or(0, |p| p.k())
}

/// Polynomial degree; 0 when the handle is NULL.
///
/// # Safety
/// `seq` must be a live handle from this library or NULL.
#[no_mangle]
pub unsafe extern "C" fn symdist_sequence_m(seq: *const SymdistSequence) -> u32 {
    seq_params(seq).map_or(0, |p| p.m())
}

/// Serializes a handle back to the sequence file format.
///
/// # Safety
/// `seq` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symdist_sequence_to_json(
    seq: *const SymdistSequence,
    out: *mut *mut c_char,
) -> SymdistStatus {
    guarded(|| {
        if out.is_null() {
            set_error("out is NULL");
            return SymdistStatus::NullArgument;
        }
        let any = match seq_ref(seq) {
            Ok(a) => a,
            Err(s) => return s,
        };
        let text = match any {
            AnySequence::Int(s) => sequence_to_json(s),
            AnySequence::Rat(s) => sequence_to_json(s),
        };
        write_string(out, text)
    })
}

fn witness_json<T: Scalar>(w: &symdist::verify::Witness<T>) -> String {
    let idx = |s: &SubsetRef| {
        let v: Vec<serde_json::Value> = s
            .to_indices()
            .iter()
            .map(|&i| serde_json::Value::from(i))
            .collect();
        serde_json::Value::Array(v)
    };
    let vals = |v: &[T]| {
        let v: Vec<serde_json::Value> = v
            .iter()
            .map(|c| serde_json::Value::String(c.format_scalar()))
            .collect();
        serde_json::Value::Array(v)
    };
    let mut obj = serde_json::Map::new();
    obj.insert("a".into(), idx(&w.a));
    obj.insert("b".into(), idx(&w.b));
    obj.insert("valueA".into(), vals(&w.value_a));
    obj.insert("valueB".into(), vals(&w.value_b));
    serde_json::Value::Object(obj).to_string()
}

fn run_verify<T: Scalar>(
    seq: &Sequence<T>,
    real_spacing: i32,
    min_size: i64,
    out_distinct: *mut i32,
    out_witness_json: *mut *mut c_char,
) -> SymdistStatus {
    let opts = VerifyOptions {
        mode: if real_spacing != 0 {
            VerifyMode::RealSpacing
        } else {
            VerifyMode::Exact
        },
        min_size: if min_size < 0 {
            None
        } else {
            Some(min_size as u32)
        },
        memory_budget: None,
        chunked: false,
        early_exit: false,
    };
    match verify_distinct(seq, &opts) {
        Ok(r) => {
            unsafe { *out_distinct = i32::from(r.distinct) };
            if !out_witness_json.is_null() {
                match &r.witness {
                    Some(w) => {
                        let s = write_string(out_witness_json, witness_json(w));
                        if s != SymdistStatus::Ok {
                            return s;
                        }
                    }
                    None => unsafe { *out_witness_json = ptr::null_mut() },
                }
            }
            SymdistStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Checks evaluation distinctness. `real_spacing` 0 demands exact
/// distinctness, nonzero demands unit spacing. `min_size` below 0 selects
/// the default (the polynomial degree). On success `*out_distinct` is 1 for
/// pass and 0 for fail; `out_witness_json` (optional) receives the
/// colliding pair as a JSON object, or NULL on pass.
///
/// # Safety
/// `seq` must be a live handle; `out_distinct` must be valid;
/// `out_witness_json` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn symdist_verify(
    seq: *const SymdistSequence,
    real_spacing: i32,
    min_size: i64,
    out_distinct: *mut i32,
    out_witness_json: *mut *mut c_char,
) -> SymdistStatus {
    guarded(|| {
        if out_distinct.is_null() {
            set_error("out_distinct is NULL");
            return SymdistStatus::NullArgument;
        }
        match seq_ref(seq) {
            Ok(AnySequence::Int(s)) => {
                run_verify(s, real_spacing, min_size, out_distinct, out_witness_json)
            }
            Ok(AnySequence::Rat(s)) => {
                run_verify(s, real_spacing, min_size, out_distinct, out_witness_json)
            }
            Err(s) => s,
        }
    })
}

/// Evaluates the degree-m elementary symmetric polynomial on the subset
/// given by 1-based, strictly increasing `indices`. The value is written as
/// decimal coordinate strings joined by ';'.
///
/// # Safety
/// `seq` must be a live handle; `indices` must point to `len` entries;
/// `out_value` must be valid.
#[no_mangle]
pub unsafe extern "C" fn symdist_eval(
    seq: *const SymdistSequence,
    indices: *const u32,
    len: usize,
    out_value: *mut *mut c_char,
) -> SymdistStatus {
    guarded(|| {
        if out_value.is_null() || (indices.is_null() && len > 0) {
            set_error("indices/out_value is NULL");
            return SymdistStatus::NullArgument;
        }
        let idx: Vec<u32> = std::slice::from_raw_parts(indices, len).to_vec();
        if idx.windows(2).any(|w| w[0] >= w[1]) {
            set_error("subset indices must be strictly increasing");
            return SymdistStatus::Parse;
        }
        let subset = SubsetRef::from_sorted(&idx);
        fn value_cell<T: Scalar>(seq: &Sequence<T>, subset: &SubsetRef) -> Result<String, Error> {
            let v = eval_subset(seq, subset)?;
            let parts: Vec<String> = v.iter().map(|c| c.format_scalar()).collect();
            Ok(parts.join(";"))
        }
        let text = match seq_ref(seq) {
            Ok(AnySequence::Int(s)) => value_cell(s, &subset),
            Ok(AnySequence::Rat(s)) => value_cell(s, &subset),
            Err(s) => return s,
        };
        match text {
            Ok(t) => write_string(out_value, t),
            Err(e) => fail(&e),
        }
    })
}

/// Emits the closed-form bound table for the parameters as CSV text
/// (the same schema as the command-line `bounds` subcommand).
///
/// # Safety
/// `lambda` must be NUL-terminated; `out_csv` must be valid.
#[no_mangle]
pub unsafe extern "C" fn symdist_bounds_csv(
    n: u32,
    k: u32,
    m: u32,
    lambda: *const c_char,
    out_csv: *mut *mut c_char,
) -> SymdistStatus {
    guarded(|| {
        if out_csv.is_null() {
            set_error("out_csv is NULL");
            return SymdistStatus::NullArgument;
        }
        let lam = match read_str(lambda, "lambda") {
            Ok(t) => t,
            Err(s) => return s,
        };
        let table = (|| -> Result<Csv, Error> {
            let p = ProblemParams::new(n, k, m, parse_ratio(lam)?)?;
            let mut reports = vec![symdist::bounds::pigeonhole_lower(&p)?];
            if k == 1 {
                reports.push(symdist::bounds::variance_lower_small(n, m)?);
            }
            reports.push(symdist::bounds::variance_lower_general(&p, false)?);
            reports.push(symdist::bounds::allones_variance_bound(n, m, p.lambda())?);
            match symdist::bounds::prob_upper(&p) {
                Ok(r) => reports.push(r),
                Err(Error::HypothesisViolated(_)) => {}
                Err(e) => return Err(e),
            }
            reports.push(symdist::bounds::prob_upper_full(n, m, k)?);
            let mut csv = Csv::new(&BOUNDS_HEADER);
            for r in &reports {
                for row in bound_rows(r) {
                    csv.push(row);
                }
            }
            Ok(csv)
        })();
        match table {
            Ok(csv) => write_string(out_csv, csv.render()),
            Err(e) => fail(&e),
        }
    })
}

/// Searches for the least entry bound `M <= m_max` (decimal string) with
/// all qualifying evaluations distinct. `max_nodes` 0 means unlimited. The
/// outcome is a JSON object with fields `status`, `mMin`, and `witness`.
///
/// # Safety
/// `lambda` and `m_max` must be NUL-terminated; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn symdist_min_m_search(
    n: u32,
    k: u32,
    m: u32,
    lambda: *const c_char,
    m_max: *const c_char,
    max_nodes: u64,
    out_json: *mut *mut c_char,
) -> SymdistStatus {
    guarded(|| {
        if out_json.is_null() {
            set_error("out_json is NULL");
            return SymdistStatus::NullArgument;
        }
        let lam = match read_str(lambda, "lambda") {
            Ok(t) => t,
            Err(s) => return s,
        };
        let mx = match read_str(m_max, "m_max") {
            Ok(t) => t,
            Err(s) => return s,
        };
        let outcome = (|| -> Result<String, Error> {
            let p = ProblemParams::new(n, k, m, parse_ratio(lam)?)?;
            let bound: Int = mx
                .parse()
                .map_err(|_| Error::Parse(format!("not an integer: {mx:?}")))?;
            let budget = Budget {
                max_nodes: if max_nodes == 0 {
                    None
                } else {
                    Some(max_nodes)
                },
                max_wall: None,
            };
            let out = min_m_search(&p, &bound, &budget, Strategy::Linear)?;
            let mut obj = serde_json::Map::new();
            obj.insert("status".into(), out.status.as_str().into());
            obj.insert(
                "mMin".into(),
                match &out.m_min {
                    Some(v) => v.to_string().into(),
                    None => serde_json::Value::Null,
                },
            );
            obj.insert(
                "witness".into(),
                match &out.witness {
                    Some(w) => serde_json::Value::Array(
                        w.elements()
                            .iter()
                            .map(|e| {
                                serde_json::Value::Array(
                                    e.0.iter()
                                        .map(|c| serde_json::Value::String(c.format_scalar()))
                                        .collect(),
                                )
                            })
                            .collect(),
                    ),
                    None => serde_json::Value::Null,
                },
            );
            Ok(serde_json::Value::Object(obj).to_string())
        })();
        match outcome {
            Ok(text) => write_string(out_json, text),
            Err(e) => fail(&e),
        }
    })
}

/// Builds the explicit integer doubling construction for degree `m >= 2`
/// and rational excess `epsilon > 0`; the result always passes
/// verification.
///
/// # Safety
/// `epsilon` must be NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symdist_construct_integer(
    n: u32,
    m: u32,
    epsilon: *const c_char,
    out: *mut *mut SymdistSequence,
) -> SymdistStatus {
    guarded(|| {
        if out.is_null() {
            set_error("out is NULL");
            return SymdistStatus::NullArgument;
        }
        let eps = match read_str(epsilon, "epsilon") {
            Ok(t) => t,
            Err(s) => return s,
        };
        let seq = (|| -> Result<_, Error> {
            symdist::construct::construct_integer(n, m, &parse_ratio(eps)?)
        })();
        match seq {
            Ok(s) => {
                *out = Box::into_raw(Box::new(SymdistSequence {
                    inner: AnySequence::Int(s),
                }));
                SymdistStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Samples and repairs a sequence with entries in [1, bound] (decimal
/// string). On success `out` receives the sequence and `out_log_json`
/// (optional) the attempt log.
///
/// # Safety
/// `lambda` and `bound` must be NUL-terminated; `out` must be valid;
/// `out_log_json` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn symdist_construct_probabilistic(
    n: u32,
    k: u32,
    m: u32,
    lambda: *const c_char,
    bound: *const c_char,
    retries: u32,
    seed: u64,
    out: *mut *mut SymdistSequence,
    out_log_json: *mut *mut c_char,
) -> SymdistStatus {
    guarded(|| {
        if out.is_null() {
            set_error("out is NULL");
            return SymdistStatus::NullArgument;
        }
        let lam = match read_str(lambda, "lambda") {
            Ok(t) => t,
            Err(s) => return s,
        };
        let b = match read_str(bound, "bound") {
            Ok(t) => t,
            Err(s) => return s,
        };
        let built = (|| -> Result<_, Error> {
            let p = ProblemParams::new(n, k, m, parse_ratio(lam)?)?;
            let m_bound: Int = b
                .parse()
                .map_err(|_| Error::Parse(format!("not an integer: {b:?}")))?;
            let recipe = symdist::construct::ProbRecipe {
                m_bound,
                overshoot: None,
                max_retries: retries,
                seed,
            };
            symdist::construct::construct_probabilistic(&p, &recipe)
        })();
        match built {
            Ok((seq, log)) => {
                if !out_log_json.is_null() {
                    let text = serde_json::to_string(&log).unwrap_or_default();
                    let s = write_string(out_log_json, text);
                    if s != SymdistStatus::Ok {
                        return s;
                    }
                }
                *out = Box::into_raw(Box::new(SymdistSequence {
                    inner: AnySequence::Int(seq),
                }));
                SymdistStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn take_string(p: *mut c_char) -> String {
        assert!(!p.is_null());
        let s = CStr::from_ptr(p).to_str().unwrap().to_string();
        symdist_string_free(p);
        s
    }

    fn parse_handle(doc: &str) -> *mut SymdistSequence {
        let json = cstr(doc);
        let mut handle: *mut SymdistSequence = ptr::null_mut();
        let status = unsafe { symdist_sequence_parse(json.as_ptr(), &mut handle) };
        assert_eq!(status, SymdistStatus::Ok);
        assert!(!handle.is_null());
        handle
    }

    const DOC: &str = r#"{"n":3,"k":1,"m":1,"lambda":"1/1","elements":[["1"],["2"],["3"]]}"#;

    #[test]
    fn parse_inspect_serialize_free() {
        let h = parse_handle(DOC);
        unsafe {
            assert_eq!(symdist_sequence_n(h), 3);
            assert_eq!(symdist_sequence_k(h), 1);
            assert_eq!(symdist_sequence_m(h), 1);
            let mut text: *mut c_char = ptr::null_mut();
            assert_eq!(symdist_sequence_to_json(h, &mut text), SymdistStatus::Ok);
            let round = take_string(text);
            // the emitted document re-parses to the same handle contents
            let h2 = parse_handle(&round);
            let mut text2: *mut c_char = ptr::null_mut();
            assert_eq!(symdist_sequence_to_json(h2, &mut text2), SymdistStatus::Ok);
            assert_eq!(round, take_string(text2));
            symdist_sequence_free(h2);
            symdist_sequence_free(h);
        }
    }

    #[test]
    fn verify_reports_collision_with_witness() {
        let h = parse_handle(DOC);
        let mut distinct = -1;
        let mut witness: *mut c_char = ptr::null_mut();
        let status = unsafe { symdist_verify(h, 0, -1, &mut distinct, &mut witness) };
        assert_eq!(status, SymdistStatus::Ok);
        assert_eq!(distinct, 0);
        let w = unsafe { take_string(witness) };
        let v: serde_json::Value = serde_json::from_str(&w).unwrap();
        assert_eq!(v["a"], serde_json::json!([3]));
        assert_eq!(v["b"], serde_json::json!([1, 2]));
        assert_eq!(v["valueA"], serde_json::json!(["3"]));
        unsafe { symdist_sequence_free(h) };
    }

    #[test]
    fn verify_passes_without_witness() {
        let h =
            parse_handle(r#"{"n":3,"k":1,"m":1,"lambda":"1/1","elements":[["1"],["2"],["4"]]}"#);
        let mut distinct = -1;
        let mut witness: *mut c_char = ptr::null_mut();
        let status = unsafe { symdist_verify(h, 0, -1, &mut distinct, &mut witness) };
        assert_eq!(status, SymdistStatus::Ok);
        assert_eq!(distinct, 1);
        assert!(witness.is_null());
        unsafe { symdist_sequence_free(h) };
    }

    #[test]
    fn eval_degree_two() {
        let h =
            parse_handle(r#"{"n":3,"k":1,"m":2,"lambda":"1/1","elements":[["1"],["2"],["3"]]}"#);
        let idx = [1u32, 2, 3];
        let mut value: *mut c_char = ptr::null_mut();
        let status = unsafe { symdist_eval(h, idx.as_ptr(), idx.len(), &mut value) };
        assert_eq!(status, SymdistStatus::Ok);
        assert_eq!(unsafe { take_string(value) }, "11");
        unsafe { symdist_sequence_free(h) };
    }

    #[test]
    fn bounds_table_has_schema_and_rows() {
        let lam = cstr("1");
        let mut csv: *mut c_char = ptr::null_mut();
        let status = unsafe { symdist_bounds_csv(10, 1, 1, lam.as_ptr(), &mut csv) };
        assert_eq!(status, SymdistStatus::Ok);
        let text = unsafe { take_string(csv) };
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "name,n,k,m,lambda,side,asymptotic,value,value_log2"
        );
        assert!(text.contains("pigeonhole_lower"));
        assert!(text.contains("prob_upper_full"));
    }

    #[test]
    fn search_finds_classical_minimum() {
        let lam = cstr("1");
        let mx = cstr("20");
        let mut out: *mut c_char = ptr::null_mut();
        let status =
            unsafe { symdist_min_m_search(3, 1, 1, lam.as_ptr(), mx.as_ptr(), 0, &mut out) };
        assert_eq!(status, SymdistStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&unsafe { take_string(out) }).unwrap();
        assert_eq!(v["status"], "found");
        assert_eq!(v["mMin"], "4");
        assert_eq!(v["witness"], serde_json::json!([["1"], ["2"], ["4"]]));
    }

    #[test]
    fn constructions_verify() {
        let eps = cstr("2/3");
        let mut h: *mut SymdistSequence = ptr::null_mut();
        let status = unsafe { symdist_construct_integer(7, 2, eps.as_ptr(), &mut h) };
        assert_eq!(status, SymdistStatus::Ok);
        let mut distinct = 0;
        unsafe {
            assert_eq!(
                symdist_verify(h, 0, -1, &mut distinct, ptr::null_mut()),
                SymdistStatus::Ok
            );
            assert_eq!(distinct, 1);
            symdist_sequence_free(h);
        }

        let lam = cstr("1/2");
        let bound = cstr("500");
        let mut p: *mut SymdistSequence = ptr::null_mut();
        let mut log: *mut c_char = ptr::null_mut();
        let status = unsafe {
            symdist_construct_probabilistic(
                8,
                1,
                1,
                lam.as_ptr(),
                bound.as_ptr(),
                20,
                42,
                &mut p,
                &mut log,
            )
        };
        assert_eq!(status, SymdistStatus::Ok);
        let log_text = unsafe { take_string(log) };
        let v: serde_json::Value = serde_json::from_str(&log_text).unwrap();
        assert_eq!(v["root_seed"], 42);
        unsafe {
            assert_eq!(symdist_sequence_n(p), 8);
            symdist_sequence_free(p);
        }
    }

    #[test]
    fn error_paths_set_status_and_message() {
        unsafe {
            let mut h: *mut SymdistSequence = ptr::null_mut();
            assert_eq!(
                symdist_sequence_parse(ptr::null(), &mut h),
                SymdistStatus::NullArgument
            );
            let bad = cstr("{not json");
            assert_eq!(
                symdist_sequence_parse(bad.as_ptr(), &mut h),
                SymdistStatus::Parse
            );
            let msg = CStr::from_ptr(symdist_last_error_message());
            assert!(!msg.to_bytes().is_empty());

            let lam = cstr("0");
            let mut csv: *mut c_char = ptr::null_mut();
            assert_eq!(
                symdist_bounds_csv(4, 1, 1, lam.as_ptr(), &mut csv),
                SymdistStatus::DomainError
            );
        }
    }

    #[test]
    fn generated_header_covers_the_surface() {
        let header = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/include/symdist.h"));
        for symbol in [
            "typedef struct SymdistSequence SymdistSequence;",
            "SymdistStatus",
            "symdist_sequence_parse",
            "symdist_sequence_free",
            "symdist_string_free",
            "symdist_verify",
            "symdist_eval",
            "symdist_bounds_csv",
            "symdist_min_m_search",
            "symdist_construct_integer",
            "symdist_construct_probabilistic",
            "symdist_last_error_message",
        ] {
            assert!(header.contains(symbol), "header is missing {symbol}");
        }
    }
}
