//! C interface to the `shepard-bernoulli` interpolation library.
//!
//! Interpolants are opaque handles created by `sb_interpolant_build*` and
//! released with `sb_interpolant_free`. Every entry point returns an
//! [`SbStatus`]; the detailed message of the last failure on the calling
//! thread is available from `sb_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use shepard_bernoulli::{
    Config, Error, Fallback, Interpolant, Jet, JetSource, Mode, NodalData, NodeSet, Point,
};

/// Result code of every call.
#[repr(C)]
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbStatus {
    SB_OK = 0,
    SB_NULL_POINTER = 1,
    SB_INVALID_ARGUMENT = 2,
    SB_DEGENERATE_GEOMETRY = 3,
    SB_ASSOCIATION_FAILED = 4,
    SB_FIT_FAILED = 5,
    SB_NOT_COVERED = 6,
    SB_EVALUATION_FAILED = 7,
    SB_INTERNAL_ERROR = 99,
}

pub const SB_MODE_BERNOULLI: u32 = 0;
pub const SB_MODE_TAYLOR: u32 = 1;

pub const SB_JETS_ANALYTIC: u32 = 0;
pub const SB_JETS_WLS_QUADRATIC: u32 = 1;
pub const SB_JETS_WLS_CUBIC: u32 = 2;

pub const SB_FALLBACK_ERROR: u32 = 0;
pub const SB_FALLBACK_NEAREST: u32 = 1;

/// Interpolant settings. `n_q = 0` picks 13 for quadratic and 17 for cubic
/// fits.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SbConfig {
    pub degree: u32,
    pub mu: f64,
    pub n_w: u32,
    pub n_q: u32,
    /// One of the `SB_MODE_*` constants.
    pub mode: u32,
    /// One of the `SB_JETS_*` constants.
    pub jet_source: u32,
    /// One of the `SB_FALLBACK_*` constants.
    pub fallback: u32,
}

/// Opaque interpolant handle.
pub struct SbInterpolant {
    inner: Interpolant,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let text = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(e: &Error) -> SbStatus {
    match e {
        Error::Argument(_) | Error::Parse(_) | Error::Io(_) => SbStatus::SB_INVALID_ARGUMENT,
        Error::Geometry(_) => SbStatus::SB_DEGENERATE_GEOMETRY,
        Error::Association { .. } => SbStatus::SB_ASSOCIATION_FAILED,
        Error::Fit { .. } => SbStatus::SB_FIT_FAILED,
        Error::Coverage(_) => SbStatus::SB_NOT_COVERED,
        Error::Evaluator(_) => SbStatus::SB_EVALUATION_FAILED,
    }
}

fn guarded(body: impl FnOnce() -> Result<(), SbStatus>) -> SbStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            SbStatus::SB_OK
        }
        Ok(Err(status)) => status,
        Err(_) => {
            set_last_error("internal panic");
            SbStatus::SB_INTERNAL_ERROR
        }
    }
}

fn fail(e: Error) -> SbStatus {
    set_last_error(&e.to_string());
    status_of(&e)
}

fn invalid(msg: &str) -> SbStatus {
    set_last_error(msg);
    SbStatus::SB_INVALID_ARGUMENT
}

fn null(what: &str) -> SbStatus {
    set_last_error(&format!("null pointer: {what}"));
    SbStatus::SB_NULL_POINTER
}

fn to_config(c: &SbConfig) -> Result<Config, SbStatus> {
    let mode = match c.mode {
        SB_MODE_BERNOULLI => Mode::Bernoulli,
        SB_MODE_TAYLOR => Mode::Taylor,
        other => return Err(invalid(&format!("unknown mode {other}"))),
    };
    let jet_source = match c.jet_source {
        SB_JETS_ANALYTIC => JetSource::Analytic,
        SB_JETS_WLS_QUADRATIC => JetSource::WlsQuadratic,
        SB_JETS_WLS_CUBIC => JetSource::WlsCubic,
        other => return Err(invalid(&format!("unknown jet source {other}"))),
    };
    let fallback = match c.fallback {
        SB_FALLBACK_ERROR => Fallback::Error,
        SB_FALLBACK_NEAREST => Fallback::Nearest,
        other => return Err(invalid(&format!("unknown fallback {other}"))),
    };
    let config = Config {
        degree: c.degree as usize,
        mu: c.mu,
        n_w: c.n_w as usize,
        n_q: (c.n_q > 0).then_some(c.n_q as usize),
        mode,
        jet_source,
        fallback,
    };
    config.validate().map_err(fail)?;
    Ok(config)
}

/// # Safety
/// `ptr` must be null or point to `n` readable values.
unsafe fn slice<'a, T>(ptr: *const T, n: usize, what: &str) -> Result<&'a [T], SbStatus> {
    if n == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(ptr, n))
}

/// # Safety
/// `xs` and `ys` must each point to `n` readable values.
unsafe fn node_set(xs: *const f64, ys: *const f64, n: usize) -> Result<NodeSet, SbStatus> {
    let xs = slice(xs, n, "xs")?;
    let ys = slice(ys, n, "ys")?;
    NodeSet::new(xs.iter().zip(ys).map(|(x, y)| Point::new(*x, *y)).collect()).map_err(fail)
}

fn finish(
    nodes: NodeSet,
    data: NodalData,
    config: &Config,
    out: *mut *mut SbInterpolant,
) -> Result<(), SbStatus> {
    let inner = Interpolant::build(nodes, data, config).map_err(fail)?;
    // SAFETY: `out` was checked non-null by the caller.
    unsafe { *out = Box::into_raw(Box::new(SbInterpolant { inner })) };
    Ok(())
}

/// Default settings: degree 3 Bernoulli mode, mu 2, 9 basis neighbours,
/// quadratic least-squares jets, error on uncovered points.
#[no_mangle]
pub extern "C" fn sb_config_default() -> SbConfig {
    SbConfig {
        degree: 3,
        mu: 2.0,
        n_w: 9,
        n_q: 0,
        mode: SB_MODE_BERNOULLI,
        jet_source: SB_JETS_WLS_QUADRATIC,
        fallback: SB_FALLBACK_ERROR,
    }
}

/// Builds an interpolant from node coordinates and function values. The
/// configuration must use a least-squares jet source.
///
/// # Safety
/// `xs`, `ys` and `values` must each point to `n` doubles; `config` must be
/// null or point to a valid `SbConfig`; `out` must be writable. On failure
/// `*out` is set to null.
#[no_mangle]
pub unsafe extern "C" fn sb_interpolant_build(
    xs: *const f64,
    ys: *const f64,
    values: *const f64,
    n: usize,
    config: *const SbConfig,
    out: *mut *mut SbInterpolant,
) -> SbStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let defaults = sb_config_default();
        let config = to_config(if config.is_null() { &defaults } else { &*config })?;
        if config.jet_source == JetSource::Analytic {
            return Err(invalid("values-only build needs a least-squares jet source"));
        }
        let nodes = node_set(xs, ys, n)?;
        let values = slice(values, n, "values")?.to_vec();
        finish(nodes, NodalData::Values(values), &config, out)
    })
}

/// Builds an interpolant from values and derivatives. `derivs` holds `6 * n`
/// doubles, one row `f, fx, fy, fxx, fxy, fyy` per node. The configuration
/// must use the analytic jet source and need derivatives of order at most 2.
///
/// # Safety
/// `xs` and `ys` must point to `n` doubles and `derivs` to `6 * n`; `config`
/// must be null (defaults with analytic jets) or valid; `out` must be
/// writable. On failure `*out` is null.
#[no_mangle]
pub unsafe extern "C" fn sb_interpolant_build_with_derivs(
    xs: *const f64,
    ys: *const f64,
    derivs: *const f64,
    n: usize,
    config: *const SbConfig,
    out: *mut *mut SbInterpolant,
) -> SbStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let defaults = SbConfig { jet_source: SB_JETS_ANALYTIC, ..sb_config_default() };
        let config = to_config(if config.is_null() { &defaults } else { &*config })?;
        if config.jet_source != JetSource::Analytic {
            return Err(invalid("derivative build needs the analytic jet source"));
        }
        let nodes = node_set(xs, ys, n)?;
        let table = slice(derivs, n.checked_mul(6).ok_or_else(|| invalid("n too large"))?, "derivs")?;
        let jets = nodes
            .points()
            .iter()
            .zip(table.chunks_exact(6))
            .map(|(p, row)| Jet::from_table(*p, 2, row.to_vec()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(fail)?;
        finish(nodes, NodalData::Jets(jets), &config, out)
    })
}

/// Evaluates the interpolant at `(x, y)`.
///
/// # Safety
/// `itp` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sb_interpolant_eval(itp: *const SbInterpolant, x: f64, y: f64, out: *mut f64) -> SbStatus {
    guarded(|| {
        if itp.is_null() {
            return Err(null("interpolant"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = (*itp).inner.eval(Point::new(x, y)).map_err(fail)?;
        Ok(())
    })
}

/// Evaluates at `n` points. On failure the contents of `out` are
/// unspecified.
///
/// # Safety
/// `itp` must be a live handle; `xs`, `ys` must point to `n` doubles and
/// `out` to `n` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sb_interpolant_eval_many(
    itp: *const SbInterpolant,
    xs: *const f64,
    ys: *const f64,
    n: usize,
    out: *mut f64,
) -> SbStatus {
    guarded(|| {
        if itp.is_null() {
            return Err(null("interpolant"));
        }
        let xs = slice(xs, n, "xs")?;
        let ys = slice(ys, n, "ys")?;
        if n > 0 && out.is_null() {
            return Err(null("out"));
        }
        for (k, (x, y)) in xs.iter().zip(ys).enumerate() {
            *out.add(k) = (*itp).inner.eval(Point::new(*x, *y)).map_err(fail)?;
        }
        Ok(())
    })
}

/// Number of nodes, or 0 for a null handle.
///
/// # Safety
/// `itp` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sb_interpolant_node_count(itp: *const SbInterpolant) -> usize {
    if itp.is_null() {
        0
    } else {
        (*itp).inner.nodes().len()
    }
}

/// Releases a handle. Null is accepted.
///
/// # Safety
/// `itp` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sb_interpolant_free(itp: *mut SbInterpolant) {
    if !itp.is_null() {
        drop(Box::from_raw(itp));
    }
}

/// Static description of a status code; unknown codes get a generic text.
#[no_mangle]
pub extern "C" fn sb_status_message(status: i32) -> *const c_char {
    let text: &'static [u8] = match status {
        0 => b"ok\0",
        1 => b"null pointer argument\0",
        2 => b"invalid argument\0",
        3 => b"degenerate geometry\0",
        4 => b"no triangle could be associated with a node\0",
        5 => b"least-squares fit failed\0",
        6 => b"point not covered by any support disk\0",
        7 => b"derivative evaluation failed\0",
        99 => b"internal error\0",
        _ => b"unknown status\0",
    };
    text.as_ptr().cast()
}

/// Detailed message of the most recent failure on this thread, or an empty
/// string. The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn sb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;

    #[test]
    fn status_messages_are_terminated() {
        for s in [SbStatus::SB_OK, SbStatus::SB_NOT_COVERED, SbStatus::SB_INTERNAL_ERROR] {
            let msg = unsafe { CStr::from_ptr(sb_status_message(s as i32)) };
            assert!(!msg.to_bytes().is_empty());
        }
    }

    #[test]
    fn config_translation() {
        let c = to_config(&sb_config_default()).unwrap();
        assert_eq!((c.degree, c.mode, c.jet_source, c.n_q), (3, Mode::Bernoulli, JetSource::WlsQuadratic, None));
        let bad = SbConfig { mode: 7, ..sb_config_default() };
        assert_eq!(to_config(&bad), Err(SbStatus::SB_INVALID_ARGUMENT));
        let too_high = SbConfig { degree: 9, ..sb_config_default() };
        assert_eq!(to_config(&too_high), Err(SbStatus::SB_INVALID_ARGUMENT));
        let msg = unsafe { CStr::from_ptr(sb_last_error_message()) };
        assert!(!msg.to_bytes().is_empty());
    }
}
