//! C ABI over `ici-core`.
//!
//! A scenario is an opaque handle built from a JSON configuration. Every
//! function returns an [`IciStatus`]; on failure the message is kept per
//! thread and can be read with [`ici_last_error_message`]. Output arrays are
//! owned by the caller.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ici_core::analysis::Scenario;
use ici_core::cli::config::parse_config;
use ici_core::interference::transform_to_cdf;
use ici_core::montecarlo::Arm;
use ici_core::scheduling::Scheme;
use ici_core::Error;

/// Result code of every call. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IciStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidConfig = 3,
    Domain = 4,
    Overflow = 5,
    NonConvergence = 6,
    ComplexityBudget = 7,
    Parse = 8,
    Io = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IciScheme {
    Greedy = 0,
    ProportionalFair = 1,
    RoundRobin = 2,
    LocationRoundRobin = 3,
    GreedyRoundRobin = 4,
}

impl From<IciScheme> for Scheme {
    fn from(s: IciScheme) -> Self {
        match s {
            IciScheme::Greedy => Scheme::Greedy,
            IciScheme::ProportionalFair => Scheme::ProportionalFair,
            IciScheme::RoundRobin => Scheme::RoundRobin,
            IciScheme::LocationRoundRobin => Scheme::LocationRoundRobin,
            IciScheme::GreedyRoundRobin => Scheme::GreedyRoundRobin,
        }
    }
}

/// Opaque network scenario.
pub struct IciScenario {
    inner: Scenario,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: &str) {
    LAST_ERROR.with(|e| {
        let mut e = e.borrow_mut();
        e.clear();
        e.extend(msg.bytes().filter(|&b| b != 0));
    });
}

struct Failure(IciStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidConfig(_) => IciStatus::InvalidConfig,
            Error::Domain(_) => IciStatus::Domain,
            Error::Overflow(_) => IciStatus::Overflow,
            Error::NonConvergence { .. } => IciStatus::NonConvergence,
            Error::ComplexityBudget { .. } => IciStatus::ComplexityBudget,
            Error::Parse { .. } | Error::Json(_) => IciStatus::Parse,
            Error::Io(_) | Error::Csv(_) => IciStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(IciStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> IciStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            IciStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            IciStatus::Panic
        }
    }
}

unsafe fn scenario<'a>(handle: *const IciScenario) -> Result<&'a Scenario, Failure> {
    handle.as_ref().map(|h| &h.inner).ok_or_else(|| null("scenario"))
}

unsafe fn input<'a>(data: *const f64, len: usize) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null("input array"));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn output<'a>(data: *mut f64, len: usize) -> Result<&'a mut [f64], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if data.is_null() {
        return Err(null("output array"));
    }
    Ok(std::slice::from_raw_parts_mut(data, len))
}

unsafe fn scalar<'a>(out: *mut f64) -> Result<&'a mut f64, Failure> {
    out.as_mut().ok_or_else(|| null("output"))
}

/// `slot` is ignored by schemes without slots and must be at least 1 otherwise.
fn arm(scheme: IciScheme, slot: usize) -> Result<Arm, Failure> {
    let scheme = Scheme::from(scheme);
    let slot = match scheme {
        Scheme::LocationRoundRobin | Scheme::GreedyRoundRobin => Some(slot),
        _ => None,
    };
    Ok(Arm::new(scheme, slot)?)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ici_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error of the calling thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn ici_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = e.len().min(len - 1);
            ptr::copy_nonoverlapping(e.as_ptr().cast(), buf, n);
            *buf.add(n) = 0;
        }
        e.len()
    })
}

/// Builds a scenario from a flat JSON object of overrides. An empty string
/// gives the default network.
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ici_scenario_new(config_json: *const c_char, out: *mut *mut IciScenario) -> IciStatus {
    guard(|| {
        if config_json.is_null() {
            return Err(null("config_json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(config_json).to_str().map_err(|e| Failure(IciStatus::InvalidUtf8, e.to_string()))?;
        let cfg = parse_config(text)?;
        let inner = Scenario::new(cfg.network()?, cfg.kappa_db, cfg.zeta, cfg.chi, cfg.angular_bins, cfg.segments)?;
        *out = Box::into_raw(Box::new(IciScenario { inner }));
        Ok(())
    })
}

/// Releases a scenario. Null is ignored.
///
/// # Safety
/// `handle` must come from [`ici_scenario_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ici_scenario_free(handle: *mut IciScenario) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of rings, which is the length of a location PMF.
///
/// # Safety
/// `handle` must be a live scenario and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ici_ring_count(handle: *const IciScenario, out: *mut usize) -> IciStatus {
    guard(|| {
        let sc = scenario(handle)?;
        *out.as_mut().ok_or_else(|| null("output"))? = sc.grid.len();
        Ok(())
    })
}

/// Probability that each ring is scheduled. `out` must hold the ring count.
///
/// # Safety
/// `handle` must be a live scenario and `out` must point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ici_location_pmf(
    handle: *const IciScenario,
    scheme: IciScheme,
    slot: usize,
    out: *mut f64,
    len: usize,
) -> IciStatus {
    guard(|| {
        let sc = scenario(handle)?;
        let pmf = sc.location_pmf(arm(scheme, slot)?)?;
        if len < pmf.probabilities.len() {
            return Err(Failure(
                IciStatus::BufferTooSmall,
                format!("need {} entries, got {len}", pmf.probabilities.len()),
            ));
        }
        output(out, len)?[..pmf.probabilities.len()].copy_from_slice(&pmf.probabilities);
        Ok(())
    })
}

/// Ergodic capacity in bits per channel use.
///
/// # Safety
/// `handle` must be a live scenario and `bits` writable.
#[no_mangle]
pub unsafe extern "C" fn ici_capacity(
    handle: *const IciScenario,
    scheme: IciScheme,
    slot: usize,
    bits: *mut f64,
) -> IciStatus {
    guard(|| {
        let sc = scenario(handle)?;
        *scalar(bits)? = sc.capacity(arm(scheme, slot)?)?.bits;
        Ok(())
    })
}

/// Outage probability at each linear SIR threshold.
///
/// # Safety
/// `handle` must be a live scenario; `thresholds` and `out` must hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn ici_outage(
    handle: *const IciScenario,
    scheme: IciScheme,
    slot: usize,
    thresholds: *const f64,
    n: usize,
    out: *mut f64,
) -> IciStatus {
    guard(|| {
        let sc = scenario(handle)?;
        let qs = input(thresholds, n)?;
        let dst = output(out, n)?;
        dst.copy_from_slice(&sc.outage(arm(scheme, slot)?, qs)?);
        Ok(())
    })
}

/// Average fairness of the scheduler, in `[0, 1]`.
///
/// # Safety
/// `handle` must be a live scenario and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ici_fairness(
    handle: *const IciScenario,
    scheme: IciScheme,
    slot: usize,
    out: *mut f64,
) -> IciStatus {
    guard(|| {
        let sc = scenario(handle)?;
        *scalar(out)? = sc.fairness(arm(scheme, slot)?)?.value;
        Ok(())
    })
}

/// Distribution function of the aggregate interference at each point.
///
/// # Safety
/// `handle` must be a live scenario; `xs` and `out` must hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn ici_interference_cdf(
    handle: *const IciScenario,
    scheme: IciScheme,
    slot: usize,
    xs: *const f64,
    n: usize,
    out: *mut f64,
) -> IciStatus {
    guard(|| {
        let sc = scenario(handle)?;
        let xs = input(xs, n)?;
        let dst = output(out, n)?;
        let tr = sc.transform(arm(scheme, slot)?)?;
        dst.copy_from_slice(&transform_to_cdf(&tr, xs)?);
        Ok(())
    })
}

/// Mean aggregate interference.
///
/// # Safety
/// `handle` must be a live scenario and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ici_interference_mean(
    handle: *const IciScenario,
    scheme: IciScheme,
    slot: usize,
    out: *mut f64,
) -> IciStatus {
    guard(|| {
        let sc = scenario(handle)?;
        *scalar(out)? = sc.transform(arm(scheme, slot)?)?.mean();
        Ok(())
    })
}
