//! C ABI over the onbase library.
//!
//! Conventions: every fallible call returns an `OnbaseStatus`; `0` is
//! success. On failure a message is stored in thread-local storage and can
//! be read with `onbase_last_error_message` until the next failing call
//! on the same thread. Handles created by `*_new`/`*_read` calls own their
//! data and must be released with the matching `*_free`.
//!
//! The generated header lives in `include/onbase.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use onbase::model::Allocation;
use onbase::offline::{brute_force_optimal, max_weight_matching, optimal_identical_offline};
use onbase::online::{allocation_algorithm, AlgParams};
use onbase::{run_online, ts_utility, Error, WeightMatrix};

/// Result of every fallible call in this interface.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OnbaseStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The request itself is invalid: unknown name, bad shape, bad index.
    InvalidArgument = 3,
    /// The request is well-formed but failed: overflow, I/O, too large.
    RuntimeError = 4,
    /// The library panicked; the call had no effect.
    Panic = 5,
}

/// Status plus message, carried through `?` inside the panic barrier.
struct Failure(OnbaseStatus, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        // Out-of-range assignments are caller mistakes, same as bad names.
        let status = if err.is_config_error() || matches!(err, Error::InvalidAllocation(_)) {
            OnbaseStatus::InvalidArgument
        } else {
            OnbaseStatus::RuntimeError
        };
        Failure(status, err.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(Failure(status, message): Failure) -> OnbaseStatus {
    let stored = CString::new(message.replace('\0', "?"))
        .unwrap_or_else(|_| CString::new("invalid error message").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = stored);
    status
}

/// Runs `f` behind a panic barrier and owns the status/message plumbing.
fn guarded(f: impl FnOnce() -> Result<(), Failure>) -> OnbaseStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OnbaseStatus::Ok,
        Ok(Err(failure)) => fail(failure),
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .copied()
                .or_else(|| payload.downcast_ref::<String>().map(String::as_str))
                .unwrap_or("unknown panic");
            fail(Failure(OnbaseStatus::Panic, msg.to_string()))
        }
    }
}

fn null_arg(name: &str) -> Failure {
    Failure(OnbaseStatus::NullPointer, format!("{name} must not be null"))
}

unsafe fn deref<'a, T>(ptr: *const T, name: &str) -> Result<&'a T, Failure> {
    ptr.as_ref().ok_or_else(|| null_arg(name))
}

unsafe fn out_slot<'a, T>(ptr: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    ptr.as_mut().ok_or_else(|| null_arg(name))
}

unsafe fn c_str<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(null_arg(name));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        Failure(
            OnbaseStatus::InvalidUtf8,
            format!("{name} is not valid UTF-8"),
        )
    })
}

/// Message describing the most recent failure on this thread. Empty when no
/// call has failed yet; the pointer stays valid until the next failing call
/// on the same thread.
#[no_mangle]
pub extern "C" fn onbase_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string; never freed by the caller.
#[no_mangle]
pub extern "C" fn onbase_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// A `users x basestations` weight matrix behind an opaque handle.
pub struct OnbaseMatrix {
    inner: WeightMatrix,
}

/// Builds a matrix from `n * m` row-major weights. On success writes a new
/// handle to `out`; release it with `onbase_matrix_free`.
///
/// # Safety
/// `data` must point to `n * m` readable doubles and `out` to a writable
/// pointer slot.
#[no_mangle]
pub unsafe extern "C" fn onbase_matrix_new(
    n: usize,
    m: usize,
    data: *const f64,
    out: *mut *mut OnbaseMatrix,
) -> OnbaseStatus {
    guarded(|| {
        if data.is_null() {
            return Err(null_arg("data"));
        }
        let out = out_slot(out, "out")?;
        let len = n
            .checked_mul(m)
            .ok_or_else(|| Error::TooLarge(format!("{n} x {m} overflows")))?;
        let values = std::slice::from_raw_parts(data, len).to_vec();
        let w = WeightMatrix::new(n, m, values)?;
        *out = Box::into_raw(Box::new(OnbaseMatrix { inner: w }));
        Ok(())
    })
}

/// Reads a matrix from a `.csv` or `.json` file written by this library or
/// the `onbase gen` command.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn onbase_matrix_read_file(
    path: *const c_char,
    out: *mut *mut OnbaseMatrix,
) -> OnbaseStatus {
    guarded(|| {
        let path = c_str(path, "path")?;
        let out = out_slot(out, "out")?;
        let w = onbase::io::read_matrix_path(Path::new(path))?;
        *out = Box::into_raw(Box::new(OnbaseMatrix { inner: w }));
        Ok(())
    })
}

/// Writes the matrix to `path`; a `.json` extension selects JSON, anything
/// else CSV. Values round-trip bit-exactly through either format.
///
/// # Safety
/// `w` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn onbase_matrix_write_file(
    w: *const OnbaseMatrix,
    path: *const c_char,
) -> OnbaseStatus {
    guarded(|| {
        let w = deref(w, "matrix")?;
        let path = c_str(path, "path")?;
        onbase::io::write_matrix_path(&w.inner, Path::new(path))?;
        Ok(())
    })
}

/// Releases a handle created by a `*_new`/`*_read` call. Null is a no-op.
///
/// # Safety
/// `w` must be null or a handle that has not been freed before.
#[no_mangle]
pub unsafe extern "C" fn onbase_matrix_free(w: *mut OnbaseMatrix) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Writes the number of users to `n_out` and of basestations to `m_out`;
/// either out parameter may be null to skip it.
///
/// # Safety
/// `w` must be a live handle; non-null out parameters must be writable.
#[no_mangle]
pub unsafe extern "C" fn onbase_matrix_shape(
    w: *const OnbaseMatrix,
    n_out: *mut usize,
    m_out: *mut usize,
) -> OnbaseStatus {
    guarded(|| {
        let w = deref(w, "matrix")?;
        if let Some(n_out) = n_out.as_mut() {
            *n_out = w.inner.n();
        }
        if let Some(m_out) = m_out.as_mut() {
            *m_out = w.inner.m();
        }
        Ok(())
    })
}

/// Reads one weight; requires `user < n` and `basestation < m`.
///
/// # Safety
/// `w` must be a live handle and `value_out` writable.
#[no_mangle]
pub unsafe extern "C" fn onbase_matrix_get(
    w: *const OnbaseMatrix,
    user: usize,
    basestation: usize,
    value_out: *mut f64,
) -> OnbaseStatus {
    guarded(|| {
        let w = deref(w, "matrix")?;
        let value_out = out_slot(value_out, "value_out")?;
        if user >= w.inner.n() || basestation >= w.inner.m() {
            return Err(Failure(
                OnbaseStatus::InvalidArgument,
                format!(
                    "index ({user}, {basestation}) outside {} x {}",
                    w.inner.n(),
                    w.inner.m()
                ),
            ));
        }
        *value_out = w.inner.get(user, basestation);
        Ok(())
    })
}

/// Runs an online algorithm by registry name (for example `"max-weight"`,
/// `"k-secretary"`, `"hide-and-seek"`) over the users in row order.
///
/// `sample_len < 0` and `sample_prob < 0` select the algorithm defaults.
/// `seed` feeds the algorithm's internal randomness; results are
/// deterministic in `(matrix, algorithm, parameters, seed)`. A non-null
/// `assignment_out` receives one basestation index per user; a non-null
/// `value_out` receives the time-shared utility of the final allocation.
///
/// # Safety
/// `assignment_out`, when non-null, must have room for one `size_t` per
/// user of `w`.
#[no_mangle]
pub unsafe extern "C" fn onbase_run_online(
    w: *const OnbaseMatrix,
    algorithm: *const c_char,
    seed: u64,
    sample_len: i64,
    sample_prob: f64,
    assignment_out: *mut usize,
    value_out: *mut f64,
) -> OnbaseStatus {
    guarded(|| {
        let w = deref(w, "matrix")?;
        let name = c_str(algorithm, "algorithm")?;
        let params = AlgParams {
            r: usize::try_from(sample_len).ok(),
            p: (sample_prob >= 0.0).then_some(sample_prob),
        };
        let mut alg = allocation_algorithm(name, &params)?;
        let (alloc, _) = run_online(alg.as_mut(), &w.inner, seed)?;
        if !assignment_out.is_null() {
            let out = std::slice::from_raw_parts_mut(assignment_out, w.inner.n());
            out.copy_from_slice(alloc.assignments());
        }
        if let Some(value_out) = value_out.as_mut() {
            *value_out = ts_utility(&alloc, &w.inner)?.value();
        }
        Ok(())
    })
}

/// Time-shared utility of a caller-provided allocation; `assignment` holds
/// one basestation index per user.
///
/// # Safety
/// `assignment` must point to one `size_t` per user of `w`.
#[no_mangle]
pub unsafe extern "C" fn onbase_ts_utility(
    w: *const OnbaseMatrix,
    assignment: *const usize,
    value_out: *mut f64,
) -> OnbaseStatus {
    guarded(|| {
        let w = deref(w, "matrix")?;
        if assignment.is_null() {
            return Err(null_arg("assignment"));
        }
        let value_out = out_slot(value_out, "value_out")?;
        let assign = std::slice::from_raw_parts(assignment, w.inner.n()).to_vec();
        let alloc = Allocation::from_assign(assign, w.inner.m())?;
        *value_out = ts_utility(&alloc, &w.inner)?.value();
        Ok(())
    })
}

/// Exact offline optimum by exhaustive search; only for small instances
/// (all `m^n` allocations are enumerated).
///
/// # Safety
/// `w` must be a live handle and `value_out` writable.
#[no_mangle]
pub unsafe extern "C" fn onbase_brute_force_value(
    w: *const OnbaseMatrix,
    value_out: *mut f64,
) -> OnbaseStatus {
    guarded(|| {
        let w = deref(w, "matrix")?;
        let value_out = out_slot(value_out, "value_out")?;
        *value_out = brute_force_optimal(&w.inner)?.0.value();
        Ok(())
    })
}

/// Exact offline optimum for matrices whose rows are constant (identical
/// basestations); fails with `INVALID_ARGUMENT` otherwise.
///
/// # Safety
/// `w` must be a live handle and `value_out` writable.
#[no_mangle]
pub unsafe extern "C" fn onbase_identical_optimal_value(
    w: *const OnbaseMatrix,
    value_out: *mut f64,
) -> OnbaseStatus {
    guarded(|| {
        let w = deref(w, "matrix")?;
        let value_out = out_slot(value_out, "value_out")?;
        let rates = w
            .inner
            .identical_rates()
            .ok_or_else(|| Error::InvalidParam("matrix rows are not constant per user".into()))?;
        *value_out = optimal_identical_offline(&rates, w.inner.m())?.0.value();
        Ok(())
    })
}

/// Weight of a maximum bipartite matching of users to basestations — an
/// upper bound on the time-shared optimum, tight when every basestation
/// may hold at most one user.
///
/// # Safety
/// `w` must be a live handle and `value_out` writable.
#[no_mangle]
pub unsafe extern "C" fn onbase_matching_upper_bound(
    w: *const OnbaseMatrix,
    value_out: *mut f64,
) -> OnbaseStatus {
    guarded(|| {
        let w = deref(w, "matrix")?;
        let value_out = out_slot(value_out, "value_out")?;
        *value_out = max_weight_matching(&w.inner).weight;
        Ok(())
    })
}

/// Probability that the single-pick threshold rule with sample length `r`
/// isolates the best of `n` users under a uniformly random arrival order.
///
/// # Safety
/// `value_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn onbase_secretary_success(
    n: usize,
    r: usize,
    value_out: *mut f64,
) -> OnbaseStatus {
    guarded(|| {
        let value_out = out_slot(value_out, "value_out")?;
        *value_out = onbase::analytics::secretary_success(n, r)?;
        Ok(())
    })
}

/// Lower bound on the expected utility fraction kept by the multi-slot
/// threshold rule: sampled fraction `alpha`, `m` basestations, per-slot
/// load capped at `dmax` when truncating the series.
///
/// # Safety
/// `value_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn onbase_threshold_bound(
    alpha: f64,
    dmax: usize,
    m: usize,
    value_out: *mut f64,
) -> OnbaseStatus {
    guarded(|| {
        let value_out = out_slot(value_out, "value_out")?;
        *value_out = onbase::analytics::bound_m_bs(alpha, dmax, m)?;
        Ok(())
    })
}
