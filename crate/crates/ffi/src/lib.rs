//! C interface to `tropfan`.
//!
//! Fans are passed as opaque `TfFan` handles. Every fallible call returns a
//! `TfStatus`; on failure the message is available from
//! `tf_last_error_message` until the next call on the same thread. Strings
//! returned through `char **` must be released with `tf_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tropfan::chow::chow_dims;
use tropfan::error::Error;
use tropfan::homology::{homology_table, pd_check, smooth_check, SmoothCriterion, Space, Theory};
use tropfan::io::{from_fan, parse, LoadedFan};
use tropfan::weights::check_balancing;
use tropfan::zoo;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidFan = 4,
    NotBalanced = 5,
    Unsupported = 6,
    BufferTooSmall = 7,
    UnknownExample = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TfTheory {
    Ordinary = 0,
    BorelMoore = 1,
    Compact = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TfSpace {
    Fan = 0,
    Compactification = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TfCriterion {
    Local = 0,
    Aksnes = 1,
}

/// A validated weighted fan.
pub struct TfFan {
    inner: LoadedFan,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TfStatus {
    match e {
        Error::Parse(_) => TfStatus::Parse,
        Error::NotBalanced => TfStatus::NotBalanced,
        Error::UnknownExample(_) => TfStatus::UnknownExample,
        Error::NotSimplicial | Error::UnsupportedStar(_) | Error::RankTooLarge(_) => TfStatus::Unsupported,
        _ => TfStatus::InvalidFan,
    }
}

/// Runs `f`, recording errors and catching panics.
fn guard(f: impl FnOnce() -> Result<(), (TfStatus, String)>) -> TfStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TfStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            TfStatus::Panic
        }
    }
}

fn lib(e: Error) -> (TfStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (TfStatus, String) {
    (TfStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (TfStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (TfStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn fan_arg<'a>(p: *const TfFan) -> Result<&'a LoadedFan, (TfStatus, String)> {
    p.as_ref().map(|f| &f.inner).ok_or_else(|| null("fan"))
}

unsafe fn write_out<T>(out: *mut T, v: T, what: &str) -> Result<(), (TfStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    *out = v;
    Ok(())
}

/// Copies `values` into `buf` of capacity `cap`; `len` always receives the
/// required length.
unsafe fn write_buf(values: &[usize], buf: *mut usize, cap: usize, len: *mut usize) -> Result<(), (TfStatus, String)> {
    write_out(len, values.len(), "len")?;
    if cap < values.len() {
        return Err((TfStatus::BufferTooSmall, format!("need {} entries, have {cap}", values.len())));
    }
    if buf.is_null() {
        return Err(null("buffer"));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    Ok(())
}

fn boxed(inner: LoadedFan) -> *mut TfFan {
    Box::into_raw(Box::new(TfFan { inner }))
}

/// Parses a fan file.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tf_fan_from_json(json: *const c_char, out: *mut *mut TfFan) -> TfStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let loaded = parse(text).and_then(|f| f.load()).map_err(lib)?;
        write_out(out, boxed(loaded), "out")
    })
}

/// Loads a built-in example by name.
///
/// # Safety
/// `name` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tf_fan_from_example(name: *const c_char, out: *mut *mut TfFan) -> TfStatus {
    guard(|| {
        let name = str_arg(name, "name")?;
        let loaded = zoo::example(name).and_then(|f| f.load()).map_err(lib)?;
        write_out(out, boxed(loaded), "out")
    })
}

/// Releases a fan; null is ignored.
///
/// # Safety
/// `fan` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tf_fan_free(fan: *mut TfFan) {
    if !fan.is_null() {
        drop(Box::from_raw(fan));
    }
}

/// Ambient rank, dimension and number of rays.
///
/// # Safety
/// `fan` must be a live handle; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tf_fan_info(
    fan: *const TfFan,
    ambient_rank: *mut usize,
    dim: *mut usize,
    num_rays: *mut usize,
) -> TfStatus {
    guard(|| {
        let f = &fan_arg(fan)?.fan;
        write_out(ambient_rank, f.ambient_rank(), "ambient_rank")?;
        write_out(dim, f.dim(), "dim")?;
        write_out(num_rays, f.num_rays(), "num_rays")
    })
}

/// Canonical JSON of the fan, to be released with `tf_string_free`.
///
/// # Safety
/// `fan` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tf_fan_to_json(fan: *const TfFan, out: *mut *mut c_char) -> TfStatus {
    guard(|| {
        let l = fan_arg(fan)?;
        let s = from_fan(&l.fan, &l.weights).to_json();
        let c = CString::new(s).expect("json has no nul");
        write_out(out, c.into_raw(), "out")
    })
}

/// Whether the fan's weights satisfy the balancing condition.
///
/// # Safety
/// `fan` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tf_is_balanced(fan: *const TfFan, out: *mut bool) -> TfStatus {
    guard(|| {
        let l = fan_arg(fan)?;
        let r = check_balancing(&l.fan, &l.weights).map_err(lib)?;
        write_out(out, r.is_balanced(), "out")
    })
}

/// The `(d+1) x (d+1)` table of dimensions, row-major with `p` the row.
///
/// # Safety
/// `fan` must be a live handle, `buf` valid for `cap` entries and `len` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tf_homology(
    fan: *const TfFan,
    theory: TfTheory,
    space: TfSpace,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> TfStatus {
    guard(|| {
        let l = fan_arg(fan)?;
        let theory = match theory {
            TfTheory::Ordinary => Theory::Ordinary,
            TfTheory::BorelMoore => Theory::BorelMoore,
            TfTheory::Compact => Theory::Compact,
        };
        let space = match space {
            TfSpace::Fan => Space::Fan,
            TfSpace::Compactification => Space::Compactification,
        };
        let t = homology_table(&l.fan, &space, theory).map_err(lib)?;
        let flat: Vec<usize> = t.grid.concat();
        write_buf(&flat, buf, cap, len)
    })
}

/// Whether the fan satisfies Poincaré duality.
///
/// # Safety
/// `fan` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tf_pd_check(fan: *const TfFan, out: *mut bool) -> TfStatus {
    guard(|| {
        let l = fan_arg(fan)?;
        let r = pd_check(&l.fan, &l.weights).map_err(lib)?;
        write_out(out, r.holds, "out")
    })
}

/// Whether the fan is homologically smooth under the given criterion.
///
/// # Safety
/// `fan` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tf_smooth_check(fan: *const TfFan, criterion: TfCriterion, out: *mut bool) -> TfStatus {
    guard(|| {
        let l = fan_arg(fan)?;
        let c = match criterion {
            TfCriterion::Local => SmoothCriterion::Local,
            TfCriterion::Aksnes => SmoothCriterion::Aksnes,
        };
        let r = smooth_check(&l.fan, &l.weights, c).map_err(lib)?;
        write_out(out, r.smooth, "out")
    })
}

/// Dimensions of the graded pieces of the Chow ring.
///
/// # Safety
/// `fan` must be a live handle, `buf` valid for `cap` entries and `len` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tf_chow_dims(fan: *const TfFan, buf: *mut usize, cap: usize, len: *mut usize) -> TfStatus {
    guard(|| {
        let l = fan_arg(fan)?;
        let dims = chow_dims(&l.fan).map_err(lib)?;
        write_buf(&dims, buf, cap, len)
    })
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library.
#[no_mangle]
pub extern "C" fn tf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
