//! C ABI over the experiment harness: opaque handles, status codes, and a
//! thread-local last-error message.
//!
//! Lifecycle: parse a config document into a `GaodeExperiment`, run it into
//! a `GaodeResults`, query per-run and aggregate values, optionally persist
//! the standard output files, free both handles. Every function is safe to
//! call with null handles (it reports `GAODE_STATUS_NULL_POINTER`), and
//! panics are caught at the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use gaode::config::ConfigDocument;
use gaode::harness;
use gaode::metrics::{self, RunRecord};
use gaode::ResolvedConfig;

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaodeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidUtf8 = 3,
    /// The requested value does not exist, e.g. SP1 without successes or
    /// evaluations-to-target for a failed run.
    Undefined = 4,
    IndexOutOfRange = 5,
    IoError = 6,
    Panic = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(status: GaodeStatus, message: &str) -> GaodeStatus {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
    status
}

fn clear_error() -> GaodeStatus {
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::default();
    });
    GaodeStatus::Ok
}

/// A resolved experiment configuration.
pub struct GaodeExperiment {
    cfg: ResolvedConfig,
}

/// The ordered run records of one executed experiment.
pub struct GaodeResults {
    records: Vec<RunRecord>,
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gaode_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent non-OK status on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gaode_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parse a TOML config document (same format the CLI accepts) and resolve
/// it into an experiment handle. On success the handle is written to `out`
/// and must be released with `gaode_experiment_free`.
///
/// # Safety
/// `toml_text` must be a valid NUL-terminated string and `out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn gaode_experiment_from_toml(
    toml_text: *const c_char,
    out: *mut *mut GaodeExperiment,
) -> GaodeStatus {
    if toml_text.is_null() || out.is_null() {
        return set_error(GaodeStatus::NullPointer, "null argument");
    }
    let text = match CStr::from_ptr(toml_text).to_str() {
        Ok(t) => t,
        Err(e) => return set_error(GaodeStatus::InvalidUtf8, &e.to_string()),
    };
    let cfg = ConfigDocument::parse(text).and_then(|doc| doc.resolve_experiment());
    match cfg {
        Ok(cfg) => {
            *out = Box::into_raw(Box::new(GaodeExperiment { cfg }));
            clear_error()
        }
        Err(e) => set_error(GaodeStatus::InvalidArgument, &e.to_string()),
    }
}

/// Release an experiment handle. Null is a no-op.
///
/// # Safety
/// `exp` must be a pointer previously returned by this library.
#[no_mangle]
pub unsafe extern "C" fn gaode_experiment_free(exp: *mut GaodeExperiment) {
    if !exp.is_null() {
        drop(Box::from_raw(exp));
    }
}

/// Execute every run of the experiment. On success the results handle is
/// written to `out` and must be released with `gaode_results_free`.
///
/// # Safety
/// `exp` must be a live experiment handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gaode_experiment_run(
    exp: *const GaodeExperiment,
    out: *mut *mut GaodeResults,
) -> GaodeStatus {
    if exp.is_null() || out.is_null() {
        return set_error(GaodeStatus::NullPointer, "null argument");
    }
    let cfg = &(*exp).cfg;
    let outcome = catch_unwind(AssertUnwindSafe(|| harness::run_experiment(cfg)));
    match outcome {
        Ok(Ok(records)) => {
            *out = Box::into_raw(Box::new(GaodeResults { records }));
            clear_error()
        }
        Ok(Err(e)) => set_error(GaodeStatus::InvalidArgument, &e.to_string()),
        Err(_) => set_error(GaodeStatus::Panic, "panic during experiment execution"),
    }
}

/// Release a results handle. Null is a no-op.
///
/// # Safety
/// `results` must be a pointer previously returned by this library.
#[no_mangle]
pub unsafe extern "C" fn gaode_results_free(results: *mut GaodeResults) {
    if !results.is_null() {
        drop(Box::from_raw(results));
    }
}

unsafe fn results_ref<'a>(results: *const GaodeResults) -> Option<&'a GaodeResults> {
    results.as_ref()
}

/// Number of runs in the results.
///
/// # Safety
/// `results` must be a live results handle.
#[no_mangle]
pub unsafe extern "C" fn gaode_results_run_count(results: *const GaodeResults) -> usize {
    results_ref(results).map_or(0, |r| r.records.len())
}

/// Number of successful runs.
///
/// # Safety
/// `results` must be a live results handle.
#[no_mangle]
pub unsafe extern "C" fn gaode_results_success_count(results: *const GaodeResults) -> usize {
    results_ref(results).map_or(0, |r| r.records.iter().filter(|x| x.success).count())
}

/// SP1 over the runs; `GAODE_STATUS_UNDEFINED` when no run succeeded.
///
/// # Safety
/// `results` must be a live results handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gaode_results_sp1(
    results: *const GaodeResults,
    out: *mut f64,
) -> GaodeStatus {
    let Some(r) = results_ref(results) else {
        return set_error(GaodeStatus::NullPointer, "null results");
    };
    if out.is_null() {
        return set_error(GaodeStatus::NullPointer, "null out pointer");
    }
    match metrics::sp1(&r.records) {
        Some(v) => {
            *out = v;
            clear_error()
        }
        None => set_error(GaodeStatus::Undefined, "sp1 undefined: zero successes"),
    }
}

unsafe fn with_record<T>(
    results: *const GaodeResults,
    index: usize,
    out: *mut T,
    get: impl Fn(&RunRecord) -> Result<T, GaodeStatus>,
) -> GaodeStatus {
    let Some(r) = results_ref(results) else {
        return set_error(GaodeStatus::NullPointer, "null results");
    };
    if out.is_null() {
        return set_error(GaodeStatus::NullPointer, "null out pointer");
    }
    let Some(record) = r.records.get(index) else {
        return set_error(
            GaodeStatus::IndexOutOfRange,
            &format!("run index {index} out of range ({} runs)", r.records.len()),
        );
    };
    match get(record) {
        Ok(v) => {
            *out = v;
            clear_error()
        }
        Err(status) => set_error(status, "requested value undefined for this run"),
    }
}

/// Whether run `index` reached the target error.
///
/// # Safety
/// `results` must be a live results handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gaode_results_run_success(
    results: *const GaodeResults,
    index: usize,
    out: *mut bool,
) -> GaodeStatus {
    with_record(results, index, out, |r| Ok(r.success))
}

/// Counted evaluations at which run `index` reached the target;
/// `GAODE_STATUS_UNDEFINED` for failed runs.
///
/// # Safety
/// `results` must be a live results handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gaode_results_run_fevals_to_success(
    results: *const GaodeResults,
    index: usize,
    out: *mut u64,
) -> GaodeStatus {
    with_record(results, index, out, |r| {
        r.fevals_to_success.ok_or(GaodeStatus::Undefined)
    })
}

/// Total counted evaluations spent by run `index`.
///
/// # Safety
/// `results` must be a live results handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gaode_results_run_counted_fevals(
    results: *const GaodeResults,
    index: usize,
    out: *mut u64,
) -> GaodeStatus {
    with_record(results, index, out, |r| Ok(r.counted_fevals))
}

/// Uncounted oracle evaluations spent by run `index` (zero for adaptive
/// methods).
///
/// # Safety
/// `results` must be a live results handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gaode_results_run_oracle_evals(
    results: *const GaodeResults,
    index: usize,
    out: *mut u64,
) -> GaodeStatus {
    with_record(results, index, out, |r| Ok(r.oracle_evals))
}

/// Best error reached by run `index` by the end of its budget.
///
/// # Safety
/// `results` must be a live results handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gaode_results_run_final_error(
    results: *const GaodeResults,
    index: usize,
    out: *mut f64,
) -> GaodeStatus {
    with_record(results, index, out, |r| Ok(r.final_error()))
}

/// Write the standard artifact set (`runs.csv`, `summary.csv`, heatmap and
/// ECDF tables and plots, `meta.txt`) into `dir`.
///
/// # Safety
/// `exp` and `results` must be live handles; `dir` must be a valid
/// NUL-terminated path.
#[no_mangle]
pub unsafe extern "C" fn gaode_results_write_outputs(
    exp: *const GaodeExperiment,
    results: *const GaodeResults,
    dir: *const c_char,
) -> GaodeStatus {
    if exp.is_null() || results.is_null() || dir.is_null() {
        return set_error(GaodeStatus::NullPointer, "null argument");
    }
    let dir = match CStr::from_ptr(dir).to_str() {
        Ok(d) => PathBuf::from(d),
        Err(e) => return set_error(GaodeStatus::InvalidUtf8, &e.to_string()),
    };
    let mut cfg = (*exp).cfg.clone();
    cfg.output = dir;
    let records = &(*results).records;
    let outcome = catch_unwind(AssertUnwindSafe(|| {
        harness::write_experiment_outputs(&cfg, records)
    }));
    match outcome {
        Ok(Ok(())) => clear_error(),
        Ok(Err(e)) => set_error(GaodeStatus::IoError, &e.to_string()),
        Err(_) => set_error(GaodeStatus::Panic, "panic while writing outputs"),
    }
}
