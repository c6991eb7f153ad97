//! C ABI over `primseq`.
//!
//! Objects are opaque handles created by `*_parse`/`*_bound` style calls and
//! released with the matching `*_free`. Every fallible call returns a
//! `PrimseqStatus`; on failure `primseq_last_error_message` describes the
//! problem for the calling thread. Rationals cross the boundary as `p/q`
//! strings allocated here and released with `primseq_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use primseq::admissibility::Verdict;
use primseq::bounds::{
    cdf_bound, default_tol, envelope_sweep, moment_bound, BoundResult, ConstraintPrefix, EnvelopePoint, Side,
};
use primseq::cli::{check_report, Render};
use primseq::distzoo::{parse_dist_spec, Distribution};
use primseq::seqcore::{format_sequence_file, parse_sequence_file, PrimitiveSeq};
use primseq::{parse_rational, Error, Rational};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrimseqStatus {
    Ok = 0,
    Parse = 1,
    Usage = 2,
    Domain = 3,
    NotAdmissible = 4,
    InfeasiblePrefix = 5,
    ToleranceNotReached = 6,
    Lp = 7,
    Io = 8,
    NullArgument = 9,
    InvalidUtf8 = 10,
    OutOfRange = 11,
    Panic = 12,
}

pub const PRIMSEQ_SIDE_UPPER: i32 = 0;
pub const PRIMSEQ_SIDE_LOWER: i32 = 1;

pub const PRIMSEQ_VERDICT_REJECTED: i32 = 0;
pub const PRIMSEQ_VERDICT_PASSES_NECESSARY: i32 = 1;
pub const PRIMSEQ_VERDICT_CERTIFIED_TRUNCATED: i32 = 2;

/// Parsed distribution spec.
pub struct PrimseqDistribution(Distribution);

/// Primitive sequence on an interval.
pub struct PrimseqSequence(PrimitiveSeq);

/// Bound enclosure with certificate and extremal law.
pub struct PrimseqBound(BoundResult);

/// Envelope sweep points.
pub struct PrimseqEnvelope(Vec<EnvelopePoint>);

type Fail = (PrimseqStatus, String);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PrimseqStatus {
    match e {
        Error::Parse(_) => PrimseqStatus::Parse,
        Error::Usage(_) => PrimseqStatus::Usage,
        Error::Domain(_) | Error::NotAMomentPrefix { .. } => PrimseqStatus::Domain,
        Error::NotAdmissible { .. } => PrimseqStatus::NotAdmissible,
        Error::InfeasiblePrefix(_) => PrimseqStatus::InfeasiblePrefix,
        Error::ToleranceNotReached { .. } => PrimseqStatus::ToleranceNotReached,
        Error::Lp(_) => PrimseqStatus::Lp,
        Error::Io { .. } => PrimseqStatus::Io,
    }
}

fn lib(e: Error) -> Fail {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> Fail {
    (PrimseqStatus::NullArgument, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PrimseqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PrimseqStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            PrimseqStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (PrimseqStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn rat_arg(p: *const c_char, what: &str) -> Result<Rational, Fail> {
    parse_rational(str_arg(p, what)?).map_err(lib)
}

unsafe fn obj<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_handle<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    put(out, Box::into_raw(Box::new(v)), "output handle pointer")
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| (PrimseqStatus::Panic, "string contains NUL".to_string()))?;
    put(out, c.into_raw(), "output string pointer")
}

fn side_arg(side: i32) -> Result<Side, Fail> {
    match side {
        PRIMSEQ_SIDE_UPPER => Ok(Side::Upper),
        PRIMSEQ_SIDE_LOWER => Ok(Side::Lower),
        _ => Err((PrimseqStatus::Usage, format!("side {side} is not PRIMSEQ_SIDE_UPPER or PRIMSEQ_SIDE_LOWER"))),
    }
}

unsafe fn tol_arg(tol: *const c_char) -> Result<Rational, Fail> {
    if tol.is_null() {
        Ok(default_tol())
    } else {
        rat_arg(tol, "tol")
    }
}

fn index<'a, T>(v: &'a [T], i: usize) -> Result<&'a T, Fail> {
    v.get(i)
        .ok_or_else(|| (PrimseqStatus::OutOfRange, format!("index {i} out of range (length {})", v.len())))
}

/// Crate version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn primseq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn primseq_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn primseq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a distribution spec such as `uniform`, `beta 2 3` or
/// `atomic[0,1] 0:1/2 1:1/2`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn primseq_dist_parse(spec: *const c_char, out: *mut *mut PrimseqDistribution) -> PrimseqStatus {
    guard(|| {
        let d = parse_dist_spec(str_arg(spec, "spec")?).map_err(lib)?;
        put_handle(out, PrimseqDistribution(d))
    })
}

/// # Safety
/// `d` must be null or a handle from `primseq_dist_parse`, freed once.
#[no_mangle]
pub unsafe extern "C" fn primseq_dist_free(d: *mut PrimseqDistribution) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// `eps_0..eps_order` of a distribution.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn primseq_dist_sequence(
    d: *const PrimseqDistribution,
    order: usize,
    out: *mut *mut PrimseqSequence,
) -> PrimseqStatus {
    guard(|| {
        let d = obj(d, "distribution")?;
        put_handle(out, PrimseqSequence(d.0.eps(order).map_err(lib)?))
    })
}

/// Parses the text sequence format (`interval a b` then `n eps_n` rows).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn primseq_sequence_parse(text: *const c_char, out: *mut *mut PrimseqSequence) -> PrimseqStatus {
    guard(|| {
        let ps = parse_sequence_file(str_arg(text, "text")?).map_err(lib)?;
        put_handle(out, PrimseqSequence(ps))
    })
}

/// # Safety
/// `s` must be null or a sequence handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn primseq_sequence_free(s: *mut PrimseqSequence) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn primseq_sequence_order(s: *const PrimseqSequence, out: *mut usize) -> PrimseqStatus {
    guard(|| put(out, obj(s, "sequence")?.0.order(), "output pointer"))
}

/// `eps_n` as `p/q`.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn primseq_sequence_term(s: *const PrimseqSequence, n: usize, out: *mut *mut c_char) -> PrimseqStatus {
    guard(|| {
        let s = obj(s, "sequence")?;
        put_string(out, index(s.0.eps(), n)?.to_string())
    })
}

/// The sequence in the text file format.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn primseq_sequence_format(s: *const PrimseqSequence, out: *mut *mut c_char) -> PrimseqStatus {
    guard(|| put_string(out, format_sequence_file(&obj(s, "sequence")?.0)))
}

/// Admissibility screens; with `grid > 0` also grid-LP certification on that
/// many points. `verdict` receives a `PRIMSEQ_VERDICT_*` value; `report`
/// may be null.
///
/// # Safety
/// `s` must be a live handle; `verdict` writable; `report` null or writable.
#[no_mangle]
pub unsafe extern "C" fn primseq_check(
    s: *const PrimseqSequence,
    grid: usize,
    verdict: *mut i32,
    report: *mut *mut c_char,
) -> PrimseqStatus {
    guard(|| {
        let s = obj(s, "sequence")?;
        let (text, v) = check_report(&s.0, (grid > 0).then_some(grid), Render::default()).map_err(lib)?;
        let code = match v {
            Verdict::Rejected => PRIMSEQ_VERDICT_REJECTED,
            Verdict::PassesNecessary => PRIMSEQ_VERDICT_PASSES_NECESSARY,
            Verdict::CertifiedTruncated => PRIMSEQ_VERDICT_CERTIFIED_TRUNCATED,
        };
        put(verdict, code, "verdict pointer")?;
        if !report.is_null() {
            put_string(report, text)?;
        }
        Ok(())
    })
}

/// Sharp bound on `F(x0)` (upper) or `F(x0-)` (lower) given the whole
/// sequence as the constraint prefix. `tol` may be null for the default.
///
/// # Safety
/// `s` live; `x0` NUL-terminated; `tol` null or NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn primseq_cdf_bound(
    s: *const PrimseqSequence,
    x0: *const c_char,
    side: i32,
    tol: *const c_char,
    out: *mut *mut PrimseqBound,
) -> PrimseqStatus {
    guard(|| {
        let prefix = ConstraintPrefix::new(obj(s, "sequence")?.0.clone()).map_err(lib)?;
        let r = cdf_bound(&prefix, &rat_arg(x0, "x0")?, side_arg(side)?, &tol_arg(tol)?).map_err(lib)?;
        put_handle(out, PrimseqBound(r))
    })
}

/// Sharp bound on `E[(b - X)^k] / k!`.
///
/// # Safety
/// `s` live; `tol` null or NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn primseq_moment_bound(
    s: *const PrimseqSequence,
    k: usize,
    side: i32,
    tol: *const c_char,
    out: *mut *mut PrimseqBound,
) -> PrimseqStatus {
    guard(|| {
        let prefix = ConstraintPrefix::new(obj(s, "sequence")?.0.clone()).map_err(lib)?;
        let r = moment_bound(&prefix, k, side_arg(side)?, &tol_arg(tol)?).map_err(lib)?;
        put_handle(out, PrimseqBound(r))
    })
}

/// # Safety
/// `b` must be null or a bound handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn primseq_bound_free(b: *mut PrimseqBound) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Enclosure `[lo, hi]` of the sharp bound as `p/q` strings.
///
/// # Safety
/// `b` live; `lo` and `hi` writable.
#[no_mangle]
pub unsafe extern "C" fn primseq_bound_enclosure(
    b: *const PrimseqBound,
    lo: *mut *mut c_char,
    hi: *mut *mut c_char,
) -> PrimseqStatus {
    guard(|| {
        let b = obj(b, "bound")?;
        if lo.is_null() || hi.is_null() {
            return Err(null("output string pointer"));
        }
        put_string(lo, b.0.lo.to_string())?;
        put_string(hi, b.0.hi.to_string())
    })
}

/// Certified side of the enclosure as a double, for plotting.
///
/// # Safety
/// `b` live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn primseq_bound_value_f64(b: *const PrimseqBound, out: *mut f64) -> PrimseqStatus {
    guard(|| {
        let v = obj(b, "bound")?.0.value();
        put(out, primseq::exactmath::to_f64(v), "output pointer")
    })
}

/// Certificate coefficients in powers of `(b - x)`, lowest first, space
/// separated.
///
/// # Safety
/// `b` live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn primseq_bound_certificate(b: *const PrimseqBound, out: *mut *mut c_char) -> PrimseqStatus {
    guard(|| put_string(out, obj(b, "bound")?.0.certificate.to_string()))
}

/// # Safety
/// `b` live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn primseq_bound_atom_count(b: *const PrimseqBound, out: *mut usize) -> PrimseqStatus {
    guard(|| put(out, obj(b, "bound")?.0.extremizer.points().len(), "output pointer"))
}

/// Atom `i` of the extremal law: location and weight.
///
/// # Safety
/// `b` live; `x` and `w` writable.
#[no_mangle]
pub unsafe extern "C" fn primseq_bound_atom(
    b: *const PrimseqBound,
    i: usize,
    x: *mut *mut c_char,
    w: *mut *mut c_char,
) -> PrimseqStatus {
    guard(|| {
        let e = &obj(b, "bound")?.0.extremizer;
        if x.is_null() || w.is_null() {
            return Err(null("output string pointer"));
        }
        let (px, pw) = (index(e.points(), i)?, index(e.weights(), i)?);
        put_string(x, px.to_string())?;
        put_string(w, pw.to_string())
    })
}

/// Upper and lower CDF bounds at `x0` for `m = 1..=m_max`.
///
/// # Safety
/// `d` live; `x0` NUL-terminated; `tol` null or NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn primseq_envelope(
    d: *const PrimseqDistribution,
    x0: *const c_char,
    m_max: usize,
    tol: *const c_char,
    out: *mut *mut PrimseqEnvelope,
) -> PrimseqStatus {
    guard(|| {
        let d = obj(d, "distribution")?;
        let pts = envelope_sweep(&d.0, &rat_arg(x0, "x0")?, m_max, &tol_arg(tol)?).map_err(lib)?;
        put_handle(out, PrimseqEnvelope(pts))
    })
}

/// # Safety
/// `e` must be null or an envelope handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn primseq_envelope_free(e: *mut PrimseqEnvelope) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// # Safety
/// `e` live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn primseq_envelope_len(e: *const PrimseqEnvelope, out: *mut usize) -> PrimseqStatus {
    guard(|| put(out, obj(e, "envelope")?.0.len(), "output pointer"))
}

/// Point `i`: order `m` and the upper and lower bounds as `p/q`.
///
/// # Safety
/// `e` live; `m`, `upper` and `lower` writable.
#[no_mangle]
pub unsafe extern "C" fn primseq_envelope_point(
    e: *const PrimseqEnvelope,
    i: usize,
    m: *mut usize,
    upper: *mut *mut c_char,
    lower: *mut *mut c_char,
) -> PrimseqStatus {
    guard(|| {
        let p = index(&obj(e, "envelope")?.0, i)?;
        if m.is_null() || upper.is_null() || lower.is_null() {
            return Err(null("output pointer"));
        }
        put(m, p.m, "m pointer")?;
        put_string(upper, p.upper.to_string())?;
        put_string(lower, p.lower.to_string())
    })
}
