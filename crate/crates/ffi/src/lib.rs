//! C interface to `decayclock`.
//!
//! Objects are opaque handles created by `dc_*_new` and released with the
//! matching `dc_*_free`. Every fallible call returns a [`DcStatus`] and
//! writes its result through an out-pointer; on failure a message is
//! available from [`dc_last_error`] on the same thread. Panics are caught
//! at the boundary and reported as `DC_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use decayclock::clock::{binomial_probability, gaussian_probability, ClockParams};
use decayclock::composite::{clocked_spectrum, reading_distribution, reading_probability_closed_form};
use decayclock::markovian::{lorentzian_spectrum, transient_spectrum, MarkovianAtom};
use decayclock::nonmarkovian::{clocked_decay_rate, rate_ratio_curve, zeno_and_jump_time, BandProfile};
use decayclock::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DcStatus {
    Ok = 0,
    NullPointer = 1,
    /// Argument outside the model's domain.
    Domain = 2,
    /// Quadrature or discretisation did not reach its tolerance.
    Convergence = 3,
    Unsupported = 4,
    /// The caller's buffer is too short; the required length was written.
    BufferTooSmall = 5,
    Panic = 6,
}

/// Two-level atom with a flat continuum.
pub struct DcAtom(MarkovianAtom);

/// Bosonic hopping clock.
pub struct DcClock(ClockParams);

/// Finite photon band with a flat coupling.
pub struct DcBand(BandProfile);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: DcStatus, msg: &str) -> DcStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> DcStatus {
    let status = match e {
        Error::Domain(_) => DcStatus::Domain,
        Error::Convergence { .. } | Error::Resolution(_) => DcStatus::Convergence,
        Error::UnsupportedProfile(_) => DcStatus::Unsupported,
    };
    fail(status, &e.to_string())
}

fn guard<F: FnOnce() -> Result<(), DcStatus>>(f: F) -> DcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DcStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(DcStatus::Panic, "panic inside decayclock"),
    }
}

unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, DcStatus> {
    p.as_ref().ok_or_else(|| fail(DcStatus::NullPointer, "null handle"))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), DcStatus> {
    if out.is_null() {
        return Err(fail(DcStatus::NullPointer, "null output pointer"));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_handle<T>(out: *mut *mut T, v: T) -> Result<(), DcStatus> {
    if out.is_null() {
        return Err(fail(DcStatus::NullPointer, "null output pointer"));
    }
    out.write(Box::into_raw(Box::new(v)));
    Ok(())
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// NUL-terminated library version.
#[no_mangle]
pub extern "C" fn dc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn dc_atom_new(excited_energy: f64, width: f64, out: *mut *mut DcAtom) -> DcStatus {
    guard(|| put_handle(out, DcAtom(MarkovianAtom::new(excited_energy, width).map_err(from_error)?)))
}

/// # Safety
/// `atom` must come from `dc_atom_new` and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn dc_atom_free(atom: *mut DcAtom) {
    if !atom.is_null() {
        drop(Box::from_raw(atom));
    }
}

/// |e^{-iE_e t - Γt/2}|².
///
/// # Safety
/// `atom` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_atom_survival_probability(atom: *const DcAtom, t: f64, out: *mut f64) -> DcStatus {
    guard(|| {
        let atom = get(atom)?;
        if !(t >= 0.0 && t.is_finite()) {
            return Err(fail(DcStatus::Domain, "time must be finite and non-negative"));
        }
        put(out, atom.0.survival_probability(t))
    })
}

/// Long-time photon spectrum per unit energy.
///
/// # Safety
/// `atom` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_lorentzian_spectrum(atom: *const DcAtom, energy: f64, out: *mut f64) -> DcStatus {
    guard(|| put(out, lorentzian_spectrum(&get(atom)?.0, energy)))
}

/// Photon spectrum at finite time `t`.
///
/// # Safety
/// `atom` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_transient_spectrum(atom: *const DcAtom, energy: f64, t: f64, out: *mut f64) -> DcStatus {
    guard(|| put(out, transient_spectrum(&get(atom)?.0, energy, t).map_err(from_error)?))
}

/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn dc_clock_new(bosons: u64, hopping: f64, out: *mut *mut DcClock) -> DcStatus {
    guard(|| put_handle(out, DcClock(ClockParams::new(bosons, hopping).map_err(from_error)?)))
}

/// # Safety
/// `clock` must come from `dc_clock_new` and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn dc_clock_free(clock: *mut DcClock) {
    if !clock.is_null() {
        drop(Box::from_raw(clock));
    }
}

/// Δt = 1/(ω√N).
///
/// # Safety
/// `clock` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_clock_resolution(clock: *const DcClock, out: *mut f64) -> DcStatus {
    guard(|| put(out, get(clock)?.0.resolution()))
}

/// τ_n = √(n/N)/ω.
///
/// # Safety
/// `clock` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_clock_reading_time(clock: *const DcClock, n: u64, out: *mut f64) -> DcStatus {
    guard(|| put(out, get(clock)?.0.reading_time(n)))
}

/// # Safety
/// `clock` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_binomial_probability(clock: *const DcClock, n: u64, t: f64, out: *mut f64) -> DcStatus {
    guard(|| put(out, binomial_probability(&get(clock)?.0, n, t).map_err(from_error)?))
}

/// # Safety
/// `clock` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_gaussian_probability(clock: *const DcClock, n: u64, t: f64, out: *mut f64) -> DcStatus {
    guard(|| put(out, gaussian_probability(&get(clock)?.0, n, t).map_err(from_error)?))
}

/// Long-time spectrum of photons emitted while the clock runs.
///
/// # Safety
/// Both handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_clocked_spectrum(
    atom: *const DcAtom,
    clock: *const DcClock,
    energy: f64,
    out: *mut f64,
) -> DcStatus {
    guard(|| put(out, clocked_spectrum(&get(atom)?.0, &get(clock)?.0, energy)))
}

/// Closed-form probability that the clock reads `n` when the photon appears.
///
/// # Safety
/// Both handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_reading_probability(
    atom: *const DcAtom,
    clock: *const DcClock,
    n: u64,
    t: f64,
    out: *mut f64,
) -> DcStatus {
    guard(|| put(out, reading_probability_closed_form(&get(atom)?.0, &get(clock)?.0, n, t)))
}

/// Reading distribution P(n) for n = 0, 1, ... at horizon `t`, written to
/// `probs`. `len` receives the number of entries; if `capacity` is smaller
/// the call returns `DC_STATUS_BUFFER_TOO_SMALL` and writes nothing else.
/// `probs` may be null when `capacity` is zero.
///
/// # Safety
/// `probs` must be valid for `capacity` writes and `len` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_reading_distribution(
    atom: *const DcAtom,
    clock: *const DcClock,
    t: f64,
    probs: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> DcStatus {
    guard(|| {
        let table = reading_distribution(&get(atom)?.0, &get(clock)?.0, t).map_err(from_error)?;
        let n = table.entries.len();
        put(len, n)?;
        if capacity < n {
            return Err(fail(DcStatus::BufferTooSmall, &format!("need {n} entries, got {capacity}")));
        }
        if probs.is_null() {
            return Err(fail(DcStatus::NullPointer, "null output buffer"));
        }
        let dst = std::slice::from_raw_parts_mut(probs, n);
        for (d, e) in dst.iter_mut().zip(&table.entries) {
            *d = e.probability;
        }
        Ok(())
    })
}

/// Flat band on [e_min, e_max] with constant ρΩ².
///
/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn dc_band_flat(
    e_min: f64,
    e_max: f64,
    excited_energy: f64,
    coupling_density: f64,
    out: *mut *mut DcBand,
) -> DcStatus {
    guard(|| {
        let band = BandProfile::flat(e_min, e_max, excited_energy, coupling_density).map_err(from_error)?;
        put_handle(out, DcBand(band))
    })
}

/// Flat band [0, band_width] with E_e = ξ·band_width/2.
///
/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn dc_band_from_xi(xi: f64, band_width: f64, coupling_density: f64, out: *mut *mut DcBand) -> DcStatus {
    guard(|| put_handle(out, DcBand(BandProfile::from_xi(xi, band_width, coupling_density).map_err(from_error)?)))
}

/// # Safety
/// `band` must come from a `dc_band_*` constructor and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn dc_band_free(band: *mut DcBand) {
    if !band.is_null() {
        drop(Box::from_raw(band));
    }
}

/// Golden-rule rate 2πρΩ².
///
/// # Safety
/// `band` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_band_fermi_rate(band: *const DcBand, out: *mut f64) -> DcStatus {
    guard(|| put(out, get(band)?.0.fermi_rate()))
}

/// Decay rate seen through a clock of resolution `dt`.
///
/// # Safety
/// `band` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_clocked_decay_rate(band: *const DcBand, dt: f64, out: *mut f64) -> DcStatus {
    guard(|| put(out, clocked_decay_rate(&get(band)?.0, dt).map_err(from_error)?))
}

/// Clocked rate divided by the golden-rule rate.
///
/// # Safety
/// `band` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_rate_ratio(band: *const DcBand, dt: f64, out: *mut f64) -> DcStatus {
    guard(|| {
        let curve = rate_ratio_curve(&get(band)?.0, &[dt]).map_err(from_error)?;
        put(out, curve[0].1)
    })
}

/// Resolutions below which the clock suppresses decay (`zeno`) and above
/// which the golden rule is recovered (`jump`).
///
/// # Safety
/// `band` must be a live handle and both outputs writable.
#[no_mangle]
pub unsafe extern "C" fn dc_zeno_and_jump_time(band: *const DcBand, zeno: *mut f64, jump: *mut f64) -> DcStatus {
    guard(|| {
        if zeno.is_null() || jump.is_null() {
            return Err(fail(DcStatus::NullPointer, "null output pointer"));
        }
        let times = zeno_and_jump_time(&get(band)?.0).map_err(from_error)?;
        put(zeno, times.zeno)?;
        put(jump, times.jump)
    })
}
