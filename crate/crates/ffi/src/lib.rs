//! C ABI for `refined-chord`.
//!
//! Degrees, polynomials and memo caches are handed out as opaque pointers and
//! must be released with the matching `rc_*_free`. Every fallible call returns
//! an [`RcStatus`]; on failure [`rc_last_error`] describes the problem. Strings
//! returned through `char **` are owned by the caller and released with
//! [`rc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use refined_chord::cli::{parse_degree, SpecError};
use refined_chord::{
    oracle_invariant, refined_invariant, ChordError, Degree, InvariantOptions, LatticeVector,
    MemoCache, NoCache, OracleError, OracleOptions, RefinedPolynomial,
};

/// A validated degree.
pub struct RcDegree(Degree);

/// A Laurent polynomial in `q^{1/2}`.
pub struct RcPolynomial(RefinedPolynomial);

/// A thread-safe memo cache shared across invariant computations.
pub struct RcCache(MemoCache);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidDegree = 4,
    InvalidEnds = 5,
    TooLarge = 6,
    GenericityFailure = 7,
    CacheError = 8,
    OutOfRange = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcFormat {
    /// `q + 7 + q^-1`
    Text = 0,
    /// `{"2":"1","0":"7","-2":"1"}`
    Json = 1,
    /// `q+7+q^-1`
    Compact = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

struct Failure(RcStatus, String);

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        let status = match e {
            SpecError::Parse(_) => RcStatus::ParseError,
            SpecError::Invalid(_) => RcStatus::InvalidDegree,
        };
        Failure(status, e.to_string())
    }
}

impl From<ChordError> for Failure {
    fn from(e: ChordError) -> Self {
        Failure(RcStatus::InvalidEnds, e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let status = match e {
            OracleError::TooLarge { .. } | OracleError::TooFew(_) => RcStatus::TooLarge,
            _ => RcStatus::GenericityFailure,
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            RcStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            RcStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(RcStatus::NullPointer, "null pointer argument".into())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(RcStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    let c = CString::new(s).map_err(|_| Failure(RcStatus::OutOfRange, "interior NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

/// Message for the last failed call on this thread, or NULL after a success.
/// The pointer stays valid until the next `rc_*` call on the same thread.
#[no_mangle]
pub extern "C" fn rc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a degree in the command-line grammar, e.g. `"P2:3"` or
/// `"(-1,0)^2,(0,-2),(1,1)^2"`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rc_degree_parse(spec: *const c_char, out: *mut *mut RcDegree) -> RcStatus {
    guard(|| {
        let d = parse_degree(read_str(spec)?)?;
        write_out(out, RcDegree(d))
    })
}

/// Builds a degree from `count` vectors stored as `x0, y0, x1, y1, …`.
///
/// # Safety
/// `xy` must point to `2 * count` readable integers and `out` be valid.
#[no_mangle]
pub unsafe extern "C" fn rc_degree_from_vectors(
    xy: *const i64,
    count: usize,
    out: *mut *mut RcDegree,
) -> RcStatus {
    guard(|| {
        if xy.is_null() && count > 0 {
            return Err(null());
        }
        let coords: &[i64] = if count == 0 {
            &[]
        } else {
            let len = count
                .checked_mul(2)
                .ok_or_else(|| Failure(RcStatus::OutOfRange, "count overflows".into()))?;
            std::slice::from_raw_parts(xy, len)
        };
        let vectors = coords
            .chunks_exact(2)
            .map(|c| LatticeVector::new(c[0], c[1]))
            .collect();
        let d = Degree::new(vectors).map_err(SpecError::from)?;
        write_out(out, RcDegree(d))
    })
}

/// Number of vectors in the degree, counted with multiplicity; 0 for NULL.
///
/// # Safety
/// `degree` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rc_degree_len(degree: *const RcDegree) -> usize {
    degree.as_ref().map_or(0, |d| d.0.len())
}

/// The memoization key of the degree.
///
/// # Safety
/// `degree` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rc_degree_key(degree: *const RcDegree, out: *mut *mut c_char) -> RcStatus {
    guard(|| write_string(out, borrow(degree)?.0.canonical_key()))
}

/// # Safety
/// `degree` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rc_degree_free(degree: *mut RcDegree) {
    if !degree.is_null() {
        drop(Box::from_raw(degree));
    }
}

/// A fresh, empty memo cache.
#[no_mangle]
pub extern "C" fn rc_cache_new() -> *mut RcCache {
    Box::into_raw(Box::new(RcCache(MemoCache::new())))
}

/// Loads a JSON-lines cache file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rc_cache_load(path: *const c_char, out: *mut *mut RcCache) -> RcStatus {
    guard(|| {
        let path = read_str(path)?;
        let cache = MemoCache::load(Path::new(path))
            .map_err(|e| Failure(RcStatus::CacheError, e.to_string()))?;
        write_out(out, RcCache(cache))
    })
}

/// Writes every cached entry to a JSON-lines file.
///
/// # Safety
/// `cache` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn rc_cache_save(cache: *const RcCache, path: *const c_char) -> RcStatus {
    guard(|| {
        let cache = borrow(cache)?;
        let path = read_str(path)?;
        cache
            .0
            .save(Path::new(path))
            .map_err(|e| Failure(RcStatus::CacheError, e.to_string()))
    })
}

/// Number of cached entries; 0 for NULL.
///
/// # Safety
/// `cache` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rc_cache_len(cache: *const RcCache) -> usize {
    cache.as_ref().map_or(0, |c| c.0.len())
}

/// # Safety
/// `cache` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rc_cache_free(cache: *mut RcCache) {
    if !cache.is_null() {
        drop(Box::from_raw(cache));
    }
}

unsafe fn invariant(
    cache: *const RcCache,
    degree: *const RcDegree,
    ends: Option<(LatticeVector, LatticeVector)>,
    out: *mut *mut RcPolynomial,
) -> RcStatus {
    guard(|| {
        let d = &borrow(degree)?.0;
        let value = match cache.as_ref() {
            Some(c) => {
                let mut opts = InvariantOptions::new(&c.0);
                opts.ends = ends;
                refined_invariant(d, &opts)?
            }
            None => {
                let mut opts = InvariantOptions::new(&NoCache);
                opts.ends = ends;
                refined_invariant(d, &opts)?
            }
        };
        write_out(out, RcPolynomial(value))
    })
}

/// The invariant by the chord recursion with default ends. `cache` may be
/// NULL to compute without memoization.
///
/// # Safety
/// `cache` must be NULL or live, `degree` live, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rc_refined_invariant(
    cache: *const RcCache,
    degree: *const RcDegree,
    out: *mut *mut RcPolynomial,
) -> RcStatus {
    invariant(cache, degree, None, out)
}

/// As [`rc_refined_invariant`] with the chord running from `(v1x, v1y)` to
/// `(vmx, vmy)`.
///
/// # Safety
/// Same as [`rc_refined_invariant`].
#[no_mangle]
pub unsafe extern "C" fn rc_refined_invariant_with_ends(
    cache: *const RcCache,
    degree: *const RcDegree,
    v1x: i64,
    v1y: i64,
    vmx: i64,
    vmy: i64,
    out: *mut *mut RcPolynomial,
) -> RcStatus {
    let ends = (LatticeVector::new(v1x, v1y), LatticeVector::new(vmx, vmy));
    invariant(cache, degree, Some(ends), out)
}

/// The invariant by direct enumeration at the generic moments drawn from
/// `seed`. Degrees with more than 10 ends need `allow_large`.
///
/// # Safety
/// `degree` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rc_oracle_invariant(
    degree: *const RcDegree,
    seed: u64,
    allow_large: bool,
    out: *mut *mut RcPolynomial,
) -> RcStatus {
    guard(|| {
        let d = &borrow(degree)?.0;
        let opts = if allow_large {
            OracleOptions::unbounded()
        } else {
            OracleOptions::default()
        };
        write_out(out, RcPolynomial(oracle_invariant(d, seed, opts)?))
    })
}

/// Renders the polynomial.
///
/// # Safety
/// `poly` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rc_polynomial_to_string(
    poly: *const RcPolynomial,
    format: RcFormat,
    out: *mut *mut c_char,
) -> RcStatus {
    guard(|| {
        let p = &borrow(poly)?.0;
        let s = match format {
            RcFormat::Text => p.to_string(),
            RcFormat::Json => p.to_json().to_string(),
            RcFormat::Compact => p.to_compact_string(),
        };
        write_string(out, s)
    })
}

/// Parses either text rendering back into a polynomial.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rc_polynomial_parse(
    text: *const c_char,
    out: *mut *mut RcPolynomial,
) -> RcStatus {
    guard(|| {
        let p: RefinedPolynomial = read_str(text)?
            .parse()
            .map_err(|e: refined_chord::PolyError| Failure(RcStatus::ParseError, e.to_string()))?;
        write_out(out, RcPolynomial(p))
    })
}

/// Number of nonzero terms; 0 for NULL.
///
/// # Safety
/// `poly` must be NULL or live.
#[no_mangle]
pub unsafe extern "C" fn rc_polynomial_term_count(poly: *const RcPolynomial) -> usize {
    poly.as_ref().map_or(0, |p| p.0.len())
}

/// Term `index` in decreasing exponent order: its exponent in half units
/// (`q^{k/2}`) and its coefficient as a decimal string.
///
/// # Safety
/// `poly` must be live; `half_exponent` and `coefficient` valid.
#[no_mangle]
pub unsafe extern "C" fn rc_polynomial_term(
    poly: *const RcPolynomial,
    index: usize,
    half_exponent: *mut i64,
    coefficient: *mut *mut c_char,
) -> RcStatus {
    guard(|| {
        let p = &borrow(poly)?.0;
        if half_exponent.is_null() {
            return Err(null());
        }
        let (k, c) = p
            .terms()
            .rev()
            .nth(index)
            .ok_or_else(|| Failure(RcStatus::OutOfRange, format!("no term {index}")))?;
        write_string(coefficient, c.to_string())?;
        *half_exponent = k;
        Ok(())
    })
}

/// The value at `q = 1` as a decimal string.
///
/// # Safety
/// `poly` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rc_polynomial_evaluate_at_one(
    poly: *const RcPolynomial,
    out: *mut *mut c_char,
) -> RcStatus {
    guard(|| write_string(out, borrow(poly)?.0.evaluate_at_one().to_string()))
}

/// True when both are live and equal.
///
/// # Safety
/// Each pointer must be NULL or live.
#[no_mangle]
pub unsafe extern "C" fn rc_polynomial_equal(
    a: *const RcPolynomial,
    b: *const RcPolynomial,
) -> bool {
    match (a.as_ref(), b.as_ref()) {
        (Some(a), Some(b)) => a.0 == b.0,
        _ => false,
    }
}

/// # Safety
/// `poly` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rc_polynomial_free(poly: *mut RcPolynomial) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
