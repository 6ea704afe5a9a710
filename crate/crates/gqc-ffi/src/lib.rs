//! C ABI for the gqc toolkit.
//!
//! Probe states and generators are opaque handles created and destroyed
//! through this interface; every fallible call returns a [`GqcStatus`] and
//! leaves a thread-local message retrievable with
//! [`gqc_last_error_message`]. The generated header lives at
//! `include/gqc.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use gqc::error::Error;
use gqc::metrology::{
    gqc_mixed, l1_coherence, l1_coherence_in_eigenbasis, qfi_mixed, sld_qfi, verify_identity,
    Hamiltonian, VerifyMode,
};
use gqc::states::{DensityMatrix, PureState, RngSeed};
use gqc::{ComplexMatrix, HermitianOperator};
use num_complex::Complex64;

/// Result of a C-ABI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GqcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Input text or numeric data failed to parse or validate.
    ParseError = 3,
    /// Inputs are individually valid but their shapes do not match.
    ShapeMismatch = 4,
    InvalidArgument = 5,
}

/// Probe selection for [`gqc_verify_identity`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GqcVerifyMode {
    Pure = 0,
    Mixed = 1,
}

/// Opaque probe state (density matrix).
pub struct GqcState {
    inner: DensityMatrix,
}

/// Opaque parametrization generator.
pub struct GqcHamiltonian {
    inner: Hamiltonian,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let owned = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(owned));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(err: &Error) -> GqcStatus {
    match err {
        Error::DimensionMismatch { .. }
        | Error::NotSquare { .. }
        | Error::BadEntryCount { .. }
        | Error::UnsupportedDimension { .. } => GqcStatus::ShapeMismatch,
        Error::InvalidArgument(_)
        | Error::DimensionTooSmall { .. }
        | Error::RankOutOfRange { .. }
        | Error::NonIdentifiable { .. } => GqcStatus::InvalidArgument,
        _ => GqcStatus::ParseError,
    }
}

fn fail(err: &Error) -> GqcStatus {
    set_error(&err.to_string());
    status_of(err)
}

fn fail_null(what: &str) -> GqcStatus {
    set_error(&format!("{what} must not be null"));
    GqcStatus::NullPointer
}

/// Message describing the most recent failure on this thread, or null.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gqc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |s| s.as_ptr())
    })
}

unsafe fn text_from(ptr: *const c_char) -> Result<String, GqcStatus> {
    if ptr.is_null() {
        return Err(fail_null("text pointer"));
    }
    unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map(|s| s.to_owned())
        .map_err(|_| {
            set_error("input text is not valid UTF-8");
            GqcStatus::InvalidUtf8
        })
}

unsafe fn complex_entries(
    count: usize,
    re: *const f64,
    im: *const f64,
) -> Result<Vec<Complex64>, GqcStatus> {
    if re.is_null() || im.is_null() {
        return Err(fail_null("entry pointer"));
    }
    let res = unsafe { std::slice::from_raw_parts(re, count) };
    let ims = unsafe { std::slice::from_raw_parts(im, count) };
    Ok(res
        .iter()
        .zip(ims)
        .map(|(&r, &i)| Complex64::new(r, i))
        .collect())
}

fn deliver<T>(out: *mut *mut T, value: T) -> GqcStatus {
    if out.is_null() {
        return fail_null("output pointer");
    }
    clear_error();
    unsafe { *out = Box::into_raw(Box::new(value)) };
    GqcStatus::Ok
}

fn deliver_f64(out: *mut f64, value: f64) -> GqcStatus {
    if out.is_null() {
        return fail_null("output pointer");
    }
    clear_error();
    unsafe { *out = value };
    GqcStatus::Ok
}

/// Parse a probe state from its JSON form (state vector or density matrix).
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gqc_state_from_json(
    json: *const c_char,
    out: *mut *mut GqcState,
) -> GqcStatus {
    let text = match unsafe { text_from(json) } {
        Ok(t) => t,
        Err(status) => return status,
    };
    match gqc::io::state_from_json(&text) {
        Ok(state) => deliver(
            out,
            GqcState {
                inner: state.to_density(),
            },
        ),
        Err(e) => fail(&e),
    }
}

/// Build a probe from `dim` state-vector amplitudes split into real and
/// imaginary parts.
///
/// # Safety
/// `re` and `im` must point to `dim` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn gqc_state_pure_new(
    dim: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut GqcState,
) -> GqcStatus {
    let amplitudes = match unsafe { complex_entries(dim, re, im) } {
        Ok(v) => v,
        Err(status) => return status,
    };
    match PureState::new(amplitudes) {
        Ok(psi) => deliver(
            out,
            GqcState {
                inner: gqc::states::pure_to_density(&psi),
            },
        ),
        Err(e) => fail(&e),
    }
}

/// Build a probe from a row-major `dim x dim` density matrix split into
/// real and imaginary parts.
///
/// # Safety
/// `re` and `im` must point to `dim * dim` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn gqc_state_density_new(
    dim: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut GqcState,
) -> GqcStatus {
    let entries = match unsafe { complex_entries(dim * dim, re, im) } {
        Ok(v) => v,
        Err(status) => return status,
    };
    let build =
        || -> Result<DensityMatrix, Error> { DensityMatrix::new(ComplexMatrix::new(dim, dim, entries)?) };
    match build() {
        Ok(rho) => deliver(out, GqcState { inner: rho }),
        Err(e) => fail(&e),
    }
}

/// Hilbert-space dimension of a probe.
///
/// # Safety
/// `state` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn gqc_state_dim(state: *const GqcState, out: *mut usize) -> GqcStatus {
    let Some(state) = (unsafe { state.as_ref() }) else {
        return fail_null("state");
    };
    if out.is_null() {
        return fail_null("output pointer");
    }
    clear_error();
    unsafe { *out = state.inner.dim() };
    GqcStatus::Ok
}

/// # Safety
/// `state` must be a handle from this library, not yet freed; null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn gqc_state_free(state: *mut GqcState) {
    if !state.is_null() {
        drop(unsafe { Box::from_raw(state) });
    }
}

/// Parse a generator from JSON (`{"diag": [...]}` or a matrix literal).
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gqc_hamiltonian_from_json(
    json: *const c_char,
    out: *mut *mut GqcHamiltonian,
) -> GqcStatus {
    let text = match unsafe { text_from(json) } {
        Ok(t) => t,
        Err(status) => return status,
    };
    match gqc::io::hamiltonian_from_json(&text) {
        Ok(h) => deliver(out, GqcHamiltonian { inner: h }),
        Err(e) => fail(&e),
    }
}

/// Diagonal generator from `dim` levels.
///
/// # Safety
/// `levels` must point to `dim` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn gqc_hamiltonian_diagonal_new(
    dim: usize,
    levels: *const f64,
    out: *mut *mut GqcHamiltonian,
) -> GqcStatus {
    if levels.is_null() {
        return fail_null("levels");
    }
    let diag = unsafe { std::slice::from_raw_parts(levels, dim) };
    if diag.iter().any(|d| !d.is_finite()) {
        return fail(&Error::NonFinite);
    }
    deliver(
        out,
        GqcHamiltonian {
            inner: Hamiltonian::from_diagonal(diag),
        },
    )
}

/// Hermitian generator from a row-major `dim x dim` matrix split into real
/// and imaginary parts.
///
/// # Safety
/// `re` and `im` must point to `dim * dim` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn gqc_hamiltonian_matrix_new(
    dim: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut GqcHamiltonian,
) -> GqcStatus {
    let entries = match unsafe { complex_entries(dim * dim, re, im) } {
        Ok(v) => v,
        Err(status) => return status,
    };
    let build = || -> Result<Hamiltonian, Error> {
        Ok(Hamiltonian::new(HermitianOperator::new(
            ComplexMatrix::new(dim, dim, entries)?,
        )?))
    };
    match build() {
        Ok(h) => deliver(out, GqcHamiltonian { inner: h }),
        Err(e) => fail(&e),
    }
}

/// # Safety
/// `h` must be a handle from this library, not yet freed; null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn gqc_hamiltonian_free(h: *mut GqcHamiltonian) {
    if !h.is_null() {
        drop(unsafe { Box::from_raw(h) });
    }
}

unsafe fn pair<'a>(
    state: *const GqcState,
    h: *const GqcHamiltonian,
) -> Result<(&'a GqcState, &'a GqcHamiltonian), GqcStatus> {
    let Some(state) = (unsafe { state.as_ref() }) else {
        return Err(fail_null("state"));
    };
    let Some(h) = (unsafe { h.as_ref() }) else {
        return Err(fail_null("hamiltonian"));
    };
    Ok((state, h))
}

/// Quantum Fisher information through the closed eigendecomposition form.
///
/// # Safety
/// `state` and `h` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gqc_qfi(
    state: *const GqcState,
    h: *const GqcHamiltonian,
    out: *mut f64,
) -> GqcStatus {
    let (state, h) = match unsafe { pair(state, h) } {
        Ok(p) => p,
        Err(s) => return s,
    };
    match qfi_mixed(&state.inner, &h.inner) {
        Ok(f) => deliver_f64(out, f),
        Err(e) => fail(&e),
    }
}

/// Quantum Fisher information through the symmetric logarithmic derivative.
///
/// # Safety
/// `state` and `h` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gqc_qfi_sld(
    state: *const GqcState,
    h: *const GqcHamiltonian,
    out: *mut f64,
) -> GqcStatus {
    let (state, h) = match unsafe { pair(state, h) } {
        Ok(p) => p,
        Err(s) => return s,
    };
    match sld_qfi(&state.inner, &h.inner) {
        Ok((f, _)) => deliver_f64(out, f),
        Err(e) => fail(&e),
    }
}

/// l1-norm coherence, in the generator's eigenbasis when `h` is non-null.
///
/// # Safety
/// `state` must be a live handle; `h` may be null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gqc_coherence_l1(
    state: *const GqcState,
    h: *const GqcHamiltonian,
    out: *mut f64,
) -> GqcStatus {
    let Some(state) = (unsafe { state.as_ref() }) else {
        return fail_null("state");
    };
    let value = match unsafe { h.as_ref() } {
        None => l1_coherence(&state.inner),
        Some(h) => match l1_coherence_in_eigenbasis(&state.inner, &h.inner) {
            Ok(v) => v,
            Err(e) => return fail(&e),
        },
    };
    deliver_f64(out, value)
}

/// Generalized coherence `M`; its square equals the Fisher information.
///
/// # Safety
/// `state` and `h` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gqc_general_coherence(
    state: *const GqcState,
    h: *const GqcHamiltonian,
    out: *mut f64,
) -> GqcStatus {
    let (state, h) = match unsafe { pair(state, h) } {
        Ok(p) => p,
        Err(s) => return s,
    };
    match gqc_mixed(&state.inner, &h.inner) {
        Ok(report) => deliver_f64(out, report.gqc),
        Err(e) => fail(&e),
    }
}

/// Full generalized-coherence report rendered as JSON. Free the returned
/// string with [`gqc_string_free`].
///
/// # Safety
/// `state` and `h` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gqc_report_json(
    state: *const GqcState,
    h: *const GqcHamiltonian,
    out: *mut *mut c_char,
) -> GqcStatus {
    let (state, h) = match unsafe { pair(state, h) } {
        Ok(p) => p,
        Err(s) => return s,
    };
    if out.is_null() {
        return fail_null("output pointer");
    }
    match gqc_mixed(&state.inner, &h.inner) {
        Ok(report) => {
            let json = serde_json::to_string(&report).expect("report serialization cannot fail");
            let c = CString::new(json).unwrap_or_default();
            clear_error();
            unsafe { *out = c.into_raw() };
            GqcStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// # Safety
/// `s` must have been returned by this library and not yet freed; null is a
/// no-op.
#[no_mangle]
pub unsafe extern "C" fn gqc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Sample `trials` random probes of dimension `dim` (with uniform diagonal
/// generators) and report the worst relative deviation between the Fisher
/// information and the squared generalized coherence.
///
/// # Safety
/// `out_max_rel_dev` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gqc_verify_identity(
    mode: GqcVerifyMode,
    dim: usize,
    trials: u64,
    seed: u64,
    out_max_rel_dev: *mut f64,
) -> GqcStatus {
    let mode = match mode {
        GqcVerifyMode::Pure => VerifyMode::Pure,
        GqcVerifyMode::Mixed => VerifyMode::Mixed,
    };
    match verify_identity(dim, trials, RngSeed::new(seed), mode) {
        Ok(summary) => deliver_f64(out_max_rel_dev, summary.max_rel_dev),
        Err(e) => fail(&e),
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn gqc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
