//! C ABI for the sptri library.
//!
//! Opaque handles wrap [`sptri::spectrum::Spectrum`] and
//! [`sptri::spectrum::BlockProfile`]; every function returns an
//! [`SptriStatus`] code and writes results through out-pointers. A
//! thread-local message describes the most recent error.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::ptr;

use sptri::calculus::{
    poisson_of_bracket_derivative_norm, poisson_radial_derivative_norm, poisson_transform,
    psi_derivative_profile, PoissonParams, PsiWeight,
};
use sptri::error::Error;
use sptri::spectrum::{
    block_count, enumerate_block, BlockProfile, MultiIndex, NormInterval, Spectrum, TailInfo,
};
use sptri::summation::{approximation_error, lambda_coeff, multipliers, SummationMethod};
use sptri::Complex64;

/// Status codes returned by every FFI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SptriStatus {
    Ok = 0,
    InvalidArgument = 1,
    Mismatch = 2,
    ResourceLimit = 3,
    Uncertified = 4,
    Internal = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> SptriStatus {
    match err {
        Error::InvalidParameter(_)
        | Error::Precondition(_)
        | Error::Config(_)
        | Error::Evaluation(_)
        | Error::UnknownSeries(_)
        | Error::UnknownFamily(_)
        | Error::PsiZeroDivision { .. } => SptriStatus::InvalidArgument,
        Error::TailMismatch(_) => SptriStatus::Mismatch,
        Error::ResourceLimit(_) => SptriStatus::ResourceLimit,
        Error::UncertifiedTail(_) => SptriStatus::Uncertified,
        Error::Io(_) => SptriStatus::Internal,
    }
}

fn fail(err: Error) -> SptriStatus {
    let code = status_of(&err);
    set_error(&err.to_string());
    code
}

/// Message of the most recent error on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sptri_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static C string.
#[no_mangle]
pub extern "C" fn sptri_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Opaque spectrum builder/handle.
pub struct SptriSpectrum {
    dimension: u32,
    coefficients: Vec<(MultiIndex, Complex64)>,
    built: Option<Spectrum>,
}

/// Opaque block-profile handle.
pub struct SptriProfile {
    inner: BlockProfile,
}

/// Summation method descriptor. `tag`: 0 partial sum, 1 Fejér,
/// 2 Abel–Poisson, 3 Taylor. Unused fields are ignored.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SptriMethod {
    pub tag: u32,
    pub n: u32,
    pub r: u32,
    pub rho: f64,
    pub s: f64,
}

impl SptriMethod {
    fn decode(&self) -> Result<SummationMethod, Error> {
        let method = match self.tag {
            0 => SummationMethod::TriangularPartial { n: self.n },
            1 => SummationMethod::Fejer { n: self.n },
            2 => SummationMethod::AbelPoisson {
                rho: self.rho,
                s: self.s,
            },
            3 => SummationMethod::Taylor {
                rho: self.rho,
                r: self.r,
            },
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown method tag {other}"
                )))
            }
        };
        method.validate()?;
        Ok(method)
    }
}

/// Interval result `[lower, upper]`; `upper` is +inf for uncertified tails.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SptriInterval {
    pub lower: f64,
    pub upper: f64,
}

impl From<NormInterval> for SptriInterval {
    fn from(v: NormInterval) -> Self {
        Self {
            lower: v.lower,
            upper: v.upper,
        }
    }
}

unsafe fn out_write<T>(out: *mut T, value: T) -> SptriStatus {
    if out.is_null() {
        set_error("null output pointer");
        return SptriStatus::InvalidArgument;
    }
    unsafe { ptr::write(out, value) };
    SptriStatus::Ok
}

// ─────────────────────────────────────────────────────────────────────────
// Spectrum handles
// ─────────────────────────────────────────────────────────────────────────

/// Creates an empty spectrum builder of dimension `d >= 1`.
///
/// # Safety
/// `out` must be a valid pointer; the result must be freed with
/// [`sptri_spectrum_free`].
#[no_mangle]
pub unsafe extern "C" fn sptri_spectrum_new(
    d: u32,
    out: *mut *mut SptriSpectrum,
) -> SptriStatus {
    if d == 0 {
        set_error("dimension must be >= 1");
        return SptriStatus::InvalidArgument;
    }
    let handle = Box::new(SptriSpectrum {
        dimension: d,
        coefficients: Vec::new(),
        built: None,
    });
    unsafe { out_write(out, Box::into_raw(handle)) }
}

/// Frees a spectrum handle (null is a no-op).
///
/// # Safety
/// `spectrum` must have come from [`sptri_spectrum_new`] and not be freed
/// twice.
#[no_mangle]
pub unsafe extern "C" fn sptri_spectrum_free(spectrum: *mut SptriSpectrum) {
    if !spectrum.is_null() {
        drop(unsafe { Box::from_raw(spectrum) });
    }
}

/// Sets the coefficient at the multi-index `indices[0..d]`.
///
/// # Safety
/// `spectrum` must be a live handle; `indices` must point to `d` readable
/// ints where `d` is the handle dimension.
#[no_mangle]
pub unsafe extern "C" fn sptri_spectrum_set_coefficient(
    spectrum: *mut SptriSpectrum,
    indices: *const i32,
    len: usize,
    re: f64,
    im: f64,
) -> SptriStatus {
    let Some(handle) = (unsafe { spectrum.as_mut() }) else {
        set_error("null spectrum handle");
        return SptriStatus::InvalidArgument;
    };
    if indices.is_null() || len != handle.dimension as usize {
        set_error("index length must equal the spectrum dimension");
        return SptriStatus::InvalidArgument;
    }
    let entries = unsafe { std::slice::from_raw_parts(indices, len) }.to_vec();
    match MultiIndex::new(entries) {
        Ok(k) => {
            handle.coefficients.push((k, Complex64::new(re, im)));
            handle.built = None;
            SptriStatus::Ok
        }
        Err(e) => fail(e),
    }
}

fn build_spectrum(handle: &mut SptriSpectrum) -> Result<&Spectrum, Error> {
    if handle.built.is_none() {
        let spec = Spectrum::exact(handle.dimension, handle.coefficients.iter().cloned())?;
        handle.built = Some(spec);
    }
    Ok(handle.built.as_ref().expect("just built"))
}

/// `‖f‖_{S^p}` of a finitely supported spectrum.
///
/// # Safety
/// `spectrum` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sptri_spectrum_sp_norm(
    spectrum: *mut SptriSpectrum,
    p: f64,
    out: *mut SptriInterval,
) -> SptriStatus {
    let Some(handle) = (unsafe { spectrum.as_mut() }) else {
        set_error("null spectrum handle");
        return SptriStatus::InvalidArgument;
    };
    let result = build_spectrum(handle).and_then(|s| s.sp_norm(p));
    match result {
        Ok(norm) => unsafe { out_write(out, norm.into()) },
        Err(e) => fail(e),
    }
}

/// Diagonal shift-difference norm `‖f - f_h‖_{S^p}`.
///
/// # Safety
/// As for [`sptri_spectrum_sp_norm`].
#[no_mangle]
pub unsafe extern "C" fn sptri_spectrum_shift_difference_norm(
    spectrum: *mut SptriSpectrum,
    h: f64,
    p: f64,
    out: *mut SptriInterval,
) -> SptriStatus {
    let Some(handle) = (unsafe { spectrum.as_mut() }) else {
        set_error("null spectrum handle");
        return SptriStatus::InvalidArgument;
    };
    let result = build_spectrum(handle).and_then(|s| s.shift_difference_norm(h, p));
    match result {
        Ok(norm) => unsafe { out_write(out, norm.into()) },
        Err(e) => fail(e),
    }
}

/// Writes 1 to `out` when every stored index lies in `Y = Z^d_+ ∪ Z^d_-`.
///
/// # Safety
/// As for [`sptri_spectrum_sp_norm`].
#[no_mangle]
pub unsafe extern "C" fn sptri_spectrum_is_y_supported(
    spectrum: *mut SptriSpectrum,
    out: *mut i32,
) -> SptriStatus {
    let Some(handle) = (unsafe { spectrum.as_mut() }) else {
        set_error("null spectrum handle");
        return SptriStatus::InvalidArgument;
    };
    match build_spectrum(handle) {
        Ok(s) => {
            let flag = i32::from(s.y_supported());
            unsafe { out_write(out, flag) }
        }
        Err(e) => fail(e),
    }
}

/// Replaces the handle content with its projection onto `Y` (coefficients
/// outside `Y` removed).
///
/// # Safety
/// `spectrum` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sptri_spectrum_project_y(spectrum: *mut SptriSpectrum) -> SptriStatus {
    let Some(handle) = (unsafe { spectrum.as_mut() }) else {
        set_error("null spectrum handle");
        return SptriStatus::InvalidArgument;
    };
    match build_spectrum(handle) {
        Ok(_) => {
            let projected = handle.built.as_ref().expect("built").project_y();
            handle.coefficients = projected
                .iter()
                .map(|(k, c)| (k.clone(), *c))
                .collect();
            handle.built = Some(projected);
            SptriStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Extracts the block profile `a_ν = ‖H_ν(f)‖_{S^p}` as a new handle.
///
/// # Safety
/// `spectrum` must be a live handle; the result must be freed with
/// [`sptri_profile_free`].
#[no_mangle]
pub unsafe extern "C" fn sptri_spectrum_profile(
    spectrum: *mut SptriSpectrum,
    p: f64,
    out: *mut *mut SptriProfile,
) -> SptriStatus {
    let Some(handle) = (unsafe { spectrum.as_mut() }) else {
        set_error("null spectrum handle");
        return SptriStatus::InvalidArgument;
    };
    let result = build_spectrum(handle).and_then(|s| s.profile(p));
    match result {
        Ok(profile) => {
            let boxed = Box::new(SptriProfile { inner: profile });
            unsafe { out_write(out, Box::into_raw(boxed)) }
        }
        Err(e) => fail(e),
    }
}

// ─────────────────────────────────────────────────────────────────────────
// Profile handles
// ─────────────────────────────────────────────────────────────────────────

/// Creates a finitely supported profile from `values[0..len]` (`a_0..a_N`).
///
/// # Safety
/// `values` must point to `len` readable doubles; the result must be freed
/// with [`sptri_profile_free`].
#[no_mangle]
pub unsafe extern "C" fn sptri_profile_new_exact(
    p: f64,
    d: u32,
    values: *const f64,
    len: usize,
    out: *mut *mut SptriProfile,
) -> SptriStatus {
    if values.is_null() || len == 0 {
        set_error("profile needs at least one value");
        return SptriStatus::InvalidArgument;
    }
    let values = unsafe { std::slice::from_raw_parts(values, len) }.to_vec();
    match BlockProfile::new(p, d, values, TailInfo::exact()) {
        Ok(profile) => {
            let boxed = Box::new(SptriProfile { inner: profile });
            unsafe { out_write(out, Box::into_raw(boxed)) }
        }
        Err(e) => fail(e),
    }
}

/// Frees a profile handle (null is a no-op).
///
/// # Safety
/// `profile` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sptri_profile_free(profile: *mut SptriProfile) {
    if !profile.is_null() {
        drop(unsafe { Box::from_raw(profile) });
    }
}

/// Number of stored values (cutoff + 1).
///
/// # Safety
/// `profile` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sptri_profile_len(
    profile: *const SptriProfile,
    out: *mut usize,
) -> SptriStatus {
    let Some(handle) = (unsafe { profile.as_ref() }) else {
        set_error("null profile handle");
        return SptriStatus::InvalidArgument;
    };
    unsafe { out_write(out, handle.inner.values().len()) }
}

/// Copies the profile values into `buffer[0..capacity]`; writes the number
/// of values copied.
///
/// # Safety
/// `buffer` must point to `capacity` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sptri_profile_values(
    profile: *const SptriProfile,
    buffer: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> SptriStatus {
    let Some(handle) = (unsafe { profile.as_ref() }) else {
        set_error("null profile handle");
        return SptriStatus::InvalidArgument;
    };
    let values = handle.inner.values();
    if buffer.is_null() || capacity < values.len() {
        set_error("buffer too small for profile values");
        return SptriStatus::ResourceLimit;
    }
    unsafe {
        ptr::copy_nonoverlapping(values.as_ptr(), buffer, values.len());
    }
    unsafe { out_write(written, values.len()) }
}

/// `‖f‖_{S^p}` of the profile.
///
/// # Safety
/// `profile` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sptri_profile_sp_norm(
    profile: *const SptriProfile,
    out: *mut SptriInterval,
) -> SptriStatus {
    let Some(handle) = (unsafe { profile.as_ref() }) else {
        set_error("null profile handle");
        return SptriStatus::InvalidArgument;
    };
    unsafe { out_write(out, handle.inner.sp_norm().into()) }
}

/// Falling-factorial derivative `f_{[r]}` as a new handle.
///
/// # Safety
/// As for [`sptri_profile_sp_norm`]; the result must be freed.
#[no_mangle]
pub unsafe extern "C" fn sptri_profile_bracket_derivative(
    profile: *const SptriProfile,
    r: u32,
    out: *mut *mut SptriProfile,
) -> SptriStatus {
    let Some(handle) = (unsafe { profile.as_ref() }) else {
        set_error("null profile handle");
        return SptriStatus::InvalidArgument;
    };
    match psi_derivative_profile(&handle.inner, &PsiWeight::falling_factorial(r)) {
        Ok(derived) => {
            let boxed = Box::new(SptriProfile { inner: derived });
            unsafe { out_write(out, Box::into_raw(boxed)) }
        }
        Err(e) => fail(e),
    }
}

/// Poisson transform `a_ν ↦ ρ^ν a_ν` as a new handle.
///
/// # Safety
/// As for [`sptri_profile_sp_norm`]; the result must be freed.
#[no_mangle]
pub unsafe extern "C" fn sptri_profile_poisson(
    profile: *const SptriProfile,
    rho: f64,
    out: *mut *mut SptriProfile,
) -> SptriStatus {
    let Some(handle) = (unsafe { profile.as_ref() }) else {
        set_error("null profile handle");
        return SptriStatus::InvalidArgument;
    };
    match poisson_transform(&handle.inner, rho) {
        Ok(transformed) => {
            let boxed = Box::new(SptriProfile { inner: transformed });
            unsafe { out_write(out, Box::into_raw(boxed)) }
        }
        Err(e) => fail(e),
    }
}

/// `‖∂^r_ρ P(f)(ρ,·)‖_{S^p}`.
///
/// # Safety
/// As for [`sptri_profile_sp_norm`].
#[no_mangle]
pub unsafe extern "C" fn sptri_profile_poisson_radial_derivative_norm(
    profile: *const SptriProfile,
    rho: f64,
    r: u32,
    out: *mut SptriInterval,
) -> SptriStatus {
    let Some(handle) = (unsafe { profile.as_ref() }) else {
        set_error("null profile handle");
        return SptriStatus::InvalidArgument;
    };
    match PoissonParams::new(rho, r) {
        Ok(params) => {
            let norm = poisson_radial_derivative_norm(&handle.inner, params);
            unsafe { out_write(out, norm.into()) }
        }
        Err(e) => fail(e),
    }
}

/// `‖P(f_{[r]})(ρ,·)‖_{S^p} = ρ^r ‖∂^r_ρ P(f)(ρ,·)‖_{S^p}`.
///
/// # Safety
/// As for [`sptri_profile_sp_norm`].
#[no_mangle]
pub unsafe extern "C" fn sptri_profile_poisson_bracket_norm(
    profile: *const SptriProfile,
    rho: f64,
    r: u32,
    out: *mut SptriInterval,
) -> SptriStatus {
    let Some(handle) = (unsafe { profile.as_ref() }) else {
        set_error("null profile handle");
        return SptriStatus::InvalidArgument;
    };
    match PoissonParams::new(rho, r) {
        Ok(params) => {
            let norm = poisson_of_bracket_derivative_norm(&handle.inner, params);
            unsafe { out_write(out, norm.into()) }
        }
        Err(e) => fail(e),
    }
}

/// `‖f - method(f)‖_{S^p}` from the closed error functionals.
///
/// # Safety
/// As for [`sptri_profile_sp_norm`].
#[no_mangle]
pub unsafe extern "C" fn sptri_profile_approximation_error(
    profile: *const SptriProfile,
    method: SptriMethod,
    out: *mut SptriInterval,
) -> SptriStatus {
    let Some(handle) = (unsafe { profile.as_ref() }) else {
        set_error("null profile handle");
        return SptriStatus::InvalidArgument;
    };
    let result = method
        .decode()
        .and_then(|m| approximation_error(m, &handle.inner));
    match result {
        Ok(norm) => unsafe { out_write(out, norm.into()) },
        Err(e) => fail(e),
    }
}

// ─────────────────────────────────────────────────────────────────────────
// Scalar functions
// ─────────────────────────────────────────────────────────────────────────

/// Number of lattice points with `|k|_1 = nu` in `Z^d` (closed form).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sptri_block_count(d: u32, nu: u32, out: *mut u64) -> SptriStatus {
    match block_count(d, nu) {
        Ok(count) => {
            if count > u128::from(u64::MAX) {
                set_error("block count exceeds u64");
                return SptriStatus::ResourceLimit;
            }
            unsafe { out_write(out, count as u64) }
        }
        Err(e) => fail(e),
    }
}

/// Enumerates the block `{|k|_1 = nu}` into `buffer` (row-major, `d` ints
/// per index, lexicographic order). Writes the number of indices.
///
/// # Safety
/// `buffer` must point to at least `capacity` writable ints.
#[no_mangle]
pub unsafe extern "C" fn sptri_enumerate_block(
    d: u32,
    nu: u32,
    buffer: *mut i32,
    capacity: usize,
    written: *mut usize,
) -> SptriStatus {
    let block = match enumerate_block(d, nu) {
        Ok(block) => block,
        Err(e) => return fail(e),
    };
    let needed = block.len() * d as usize;
    if buffer.is_null() || capacity < needed {
        set_error("buffer too small for block enumeration");
        return SptriStatus::ResourceLimit;
    }
    for (i, k) in block.iter().enumerate() {
        let entries = k.entries();
        unsafe {
            ptr::copy_nonoverlapping(entries.as_ptr(), buffer.add(i * d as usize), entries.len());
        }
    }
    unsafe { out_write(written, block.len()) }
}

/// `λ_{ν,r}(ρ)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sptri_lambda_coeff(
    nu: u32,
    r: u32,
    rho: f64,
    out: *mut f64,
) -> SptriStatus {
    match lambda_coeff(nu, r, rho) {
        Ok(v) => unsafe { out_write(out, v) },
        Err(e) => fail(e),
    }
}

/// Multiplier row `m_0..m_{up_to}` of a method.
///
/// # Safety
/// `buffer` must point to at least `up_to + 1` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sptri_multipliers(
    method: SptriMethod,
    up_to: u32,
    buffer: *mut f64,
    capacity: usize,
) -> SptriStatus {
    if buffer.is_null() || capacity < up_to as usize + 1 {
        set_error("buffer too small for multiplier row");
        return SptriStatus::ResourceLimit;
    }
    let row = match method.decode().and_then(|m| multipliers(m, up_to)) {
        Ok(row) => row,
        Err(e) => return fail(e),
    };
    unsafe {
        ptr::copy_nonoverlapping(row.values.as_ptr(), buffer, row.values.len());
    }
    SptriStatus::Ok
}
