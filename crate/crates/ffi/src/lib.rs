//! C ABI over the idealstat engine.
//!
//! Objects are opaque heap handles created by `*_new`/`*_parse` functions and
//! released by the matching `*_free`. Every fallible call returns an
//! [`IdealstatStatus`]; on failure the message is available from
//! [`idealstat_last_error`] on the same thread. Strings returned through out
//! pointers are owned by the caller and released with [`idealstat_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use idealstat::convergence::{ideal_limit, imu_limit, istat_limit, SymbolicSequence};
use idealstat::functionals::density::upper_density;
use idealstat::functionals::submeasure::Submeasure;
use idealstat::num::parse_q;
use idealstat::{Error, Ideal, RunConfig, SymbolicSet};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdealstatStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Schema = 4,
    Validation = 5,
    Precondition = 6,
    NotCertifiable = 7,
    Infeasible = 8,
    GeneratorExhausted = 9,
    Io = 10,
    Panic = 11,
}

/// Verdict and outcome codes, matching the command-line exit codes.
pub const IDEALSTAT_POSITIVE: i32 = 0;
pub const IDEALSTAT_NEGATIVE: i32 = 1;
pub const IDEALSTAT_UNDECIDED: i32 = 2;

pub const IDEALSTAT_MODE_IDEAL: i32 = 0;
pub const IDEALSTAT_MODE_ISTAT: i32 = 1;
pub const IDEALSTAT_MODE_IMU: i32 = 2;

pub struct IdealstatConfig(RunConfig);
pub struct IdealstatSet(SymbolicSet);
pub struct IdealstatIdeal(Ideal);
pub struct IdealstatSequence(SymbolicSequence);
pub struct IdealstatSubmeasure(Submeasure);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> IdealstatStatus {
    match e {
        Error::Parse(_) => IdealstatStatus::Parse,
        Error::Schema(_) => IdealstatStatus::Schema,
        Error::Validation(_) => IdealstatStatus::Validation,
        Error::Precondition(_) => IdealstatStatus::Precondition,
        Error::NotCertifiable(_) => IdealstatStatus::NotCertifiable,
        Error::Infeasible(_) => IdealstatStatus::Infeasible,
        Error::GeneratorExhausted(_) => IdealstatStatus::GeneratorExhausted,
        Error::Io(_) => IdealstatStatus::Io,
    }
}

enum Fail {
    Status(IdealstatStatus, String),
    Engine(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Engine(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> IdealstatStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            IdealstatStatus::Ok
        }
        Ok(Err(Fail::Status(s, m))) => {
            set_error(&m);
            s
        }
        Ok(Err(Fail::Engine(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            IdealstatStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Status(IdealstatStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Status(IdealstatStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail::Status(IdealstatStatus::NullPointer, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Status(IdealstatStatus::NullPointer, format!("{what} is null")));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail::Status(IdealstatStatus::Parse, "report contains NUL".into()))?;
    put(out, c.into_raw(), "out")
}

/// Message for the last failed call on this thread (empty after a success).
/// Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn idealstat_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn idealstat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Default configuration with the given horizon (at least 1000).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn idealstat_config_new(horizon: u64, out: *mut *mut IdealstatConfig) -> IdealstatStatus {
    guard(|| {
        let cfg = RunConfig::with_horizon(horizon);
        cfg.validate()?;
        put(out, Box::into_raw(Box::new(IdealstatConfig(cfg))), "out")
    })
}

/// Configuration from TOML text.
///
/// # Safety
/// `toml` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn idealstat_config_from_toml(
    toml: *const c_char,
    out: *mut *mut IdealstatConfig,
) -> IdealstatStatus {
    guard(|| {
        let cfg = RunConfig::from_toml(text(toml, "toml")?)?;
        put(out, Box::into_raw(Box::new(IdealstatConfig(cfg))), "out")
    })
}

/// # Safety
/// `p` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn idealstat_config_free(p: *mut IdealstatConfig) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Parses a set from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn idealstat_set_from_json(json: *const c_char, out: *mut *mut IdealstatSet) -> IdealstatStatus {
    guard(|| {
        let s = SymbolicSet::from_json(text(json, "json")?)?;
        put(out, Box::into_raw(Box::new(IdealstatSet(s))), "out")
    })
}

/// # Safety
/// `p` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn idealstat_set_free(p: *mut IdealstatSet) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// `|A ∩ [1, n]|`.
///
/// # Safety
/// `set` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn idealstat_set_count(set: *const IdealstatSet, n: u64, out: *mut u64) -> IdealstatStatus {
    guard(|| {
        let c = get(set, "set")?.0.count_u64(n)?;
        put(out, c, "out")
    })
}

/// Writes 1 when `n ∈ A`, 0 otherwise.
///
/// # Safety
/// `set` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn idealstat_set_contains(set: *const IdealstatSet, n: u64, out: *mut i32) -> IdealstatStatus {
    guard(|| {
        let c = get(set, "set")?.0.contains_u64(n)?;
        put(out, i32::from(c), "out")
    })
}

/// Upper asymptotic density report as JSON.
///
/// # Safety
/// Handles must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn idealstat_set_density(
    set: *const IdealstatSet,
    cfg: *const IdealstatConfig,
    out: *mut *mut c_char,
) -> IdealstatStatus {
    guard(|| {
        let d = upper_density(&get(set, "set")?.0, get(cfg, "config")?.0.horizon)?;
        put_string(out, serde_json::to_string(&d).expect("reports serialize"))
    })
}

/// Parses an ideal: `fin`, `zeta`, `summable`, `empty-times-fin`,
/// `zmu:<json>`, `j-of:<ideal>:<json>`, `generated-by:<json>`.
///
/// # Safety
/// `input` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn idealstat_ideal_parse(input: *const c_char, out: *mut *mut IdealstatIdeal) -> IdealstatStatus {
    guard(|| {
        let i = Ideal::parse(text(input, "input")?)?;
        put(out, Box::into_raw(Box::new(IdealstatIdeal(i))), "out")
    })
}

/// # Safety
/// `p` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn idealstat_ideal_free(p: *mut IdealstatIdeal) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Membership verdict: `IDEALSTAT_POSITIVE` (in), `IDEALSTAT_NEGATIVE` (out)
/// or `IDEALSTAT_UNDECIDED`. The full verdict JSON goes to `report` when it
/// is not null.
///
/// # Safety
/// Handles must be live, `verdict` valid, `report` valid or null.
#[no_mangle]
pub unsafe extern "C" fn idealstat_ideal_decide(
    ideal: *const IdealstatIdeal,
    set: *const IdealstatSet,
    cfg: *const IdealstatConfig,
    verdict: *mut i32,
    report: *mut *mut c_char,
) -> IdealstatStatus {
    guard(|| {
        let v = get(ideal, "ideal")?.0.decide(&get(set, "set")?.0, &get(cfg, "config")?.0)?;
        put(verdict, v.exit_code(), "verdict")?;
        if !report.is_null() {
            put_string(report, serde_json::to_string(&v).expect("verdicts serialize"))?;
        }
        Ok(())
    })
}

/// Parses a sequence from JSON or shorthand (`indicator:factorial`,
/// `constant:1/2`, `inv-log`, `inv-power:c:p`, `tent:log`, `tent:<d>`).
///
/// # Safety
/// `input` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn idealstat_sequence_parse(
    input: *const c_char,
    out: *mut *mut IdealstatSequence,
) -> IdealstatStatus {
    guard(|| {
        let x = SymbolicSequence::parse(text(input, "input")?)?;
        put(out, Box::into_raw(Box::new(IdealstatSequence(x))), "out")
    })
}

/// # Safety
/// `p` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn idealstat_sequence_free(p: *mut IdealstatSequence) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Parses a submeasure sequence: `uniform`, `upper-density`, `zero`,
/// `lacunary:<scheme>` or JSON.
///
/// # Safety
/// `input` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn idealstat_submeasure_parse(
    input: *const c_char,
    out: *mut *mut IdealstatSubmeasure,
) -> IdealstatStatus {
    guard(|| {
        let m = Submeasure::parse(text(input, "input")?)?;
        put(out, Box::into_raw(Box::new(IdealstatSubmeasure(m))), "out")
    })
}

/// # Safety
/// `p` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn idealstat_submeasure_free(p: *mut IdealstatSubmeasure) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Convergence of `seq` to `limit` (a rational such as `"1/2"`).
///
/// `mode` is one of `IDEALSTAT_MODE_*`; `mu` is required for
/// `IDEALSTAT_MODE_IMU` and ignored otherwise. `outcome` receives
/// `IDEALSTAT_POSITIVE` (converges), `IDEALSTAT_NEGATIVE` (diverges) or
/// `IDEALSTAT_UNDECIDED`; the report JSON goes to `report` when not null.
///
/// # Safety
/// Handles must be live (`mu` may be null outside IMU mode), `limit` a
/// NUL-terminated string, `outcome` valid and `report` valid or null.
#[no_mangle]
pub unsafe extern "C" fn idealstat_converge(
    mode: i32,
    seq: *const IdealstatSequence,
    ideal: *const IdealstatIdeal,
    mu: *const IdealstatSubmeasure,
    limit: *const c_char,
    cfg: *const IdealstatConfig,
    outcome: *mut i32,
    report: *mut *mut c_char,
) -> IdealstatStatus {
    guard(|| {
        let x = &get(seq, "sequence")?.0;
        let i = &get(ideal, "ideal")?.0;
        let l = parse_q(text(limit, "limit")?)?;
        let cfg = &get(cfg, "config")?.0;
        let r = match mode {
            IDEALSTAT_MODE_IDEAL => ideal_limit(x, i, &l, cfg)?,
            IDEALSTAT_MODE_ISTAT => istat_limit(x, i, &l, cfg)?,
            IDEALSTAT_MODE_IMU => imu_limit(x, i, &get(mu, "submeasure")?.0, &l, cfg)?,
            other => return Err(Fail::Status(IdealstatStatus::Precondition, format!("unknown mode {other}"))),
        };
        put(outcome, r.outcome.exit_code(), "outcome")?;
        if !report.is_null() {
            put_string(report, r.to_json())?;
        }
        Ok(())
    })
}
