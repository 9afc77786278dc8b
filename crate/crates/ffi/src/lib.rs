//! C interface to the planner.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `*_free` function. Every fallible call returns an [`SppStatus`];
//! on failure a description is available from [`spp_last_error_message`]
//! on the same thread. Results are written through out-pointers only on
//! success. Panics never cross the boundary; they are reported as
//! `SPP_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use spp_core::io::{load_scenario, parse_scenario};
use spp_core::planner::{plan_all, PlanResult, Scenario};
use spp_core::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SppStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    Schema = 5,
    InvalidScenario = 6,
    Solver = 7,
    IndexOutOfRange = 8,
    BufferTooSmall = 9,
    /// The requested value does not exist, e.g. the latest start of an
    /// unreachable vehicle.
    NotAvailable = 10,
    Panic = 11,
}

/// A validated scenario.
pub struct SppScenario {
    inner: Scenario,
}

/// The outcome of planning a scenario.
pub struct SppPlan {
    result: PlanResult,
    /// Columns per trajectory row for each vehicle: time, state, control.
    widths: Vec<usize>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: SppStatus, message: impl Into<String>) -> SppStatus {
    set_error(message.into());
    status
}

fn status_of(e: &Error) -> SppStatus {
    match e {
        Error::Io { .. } => SppStatus::Io,
        Error::Parse { .. } => SppStatus::Parse,
        Error::Schema { .. } => SppStatus::Schema,
        Error::InvalidScenario(_)
        | Error::InvalidShape(_)
        | Error::InvalidGrid(_)
        | Error::InvalidModel(_)
        | Error::UnknownModel(_)
        | Error::InvalidConfig(_) => SppStatus::InvalidScenario,
        _ => SppStatus::Solver,
    }
}

/// Runs `body`, converting errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), (SppStatus, String)>) -> SppStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SppStatus::Ok,
        Ok(Err((status, message))) => fail(status, message),
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(SppStatus::Panic, format!("internal panic: {msg}"))
        }
    }
}

fn core_err(e: Error) -> (SppStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (SppStatus, String) {
    (SppStatus::NullArgument, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (SppStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null and, by contract, a nul-terminated string.
    unsafe { CStr::from_ptr(p) }.to_str().map_err(|_| (SppStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (SppStatus, String)> {
    // SAFETY: by contract a valid, writable, aligned pointer when non-null.
    unsafe { p.as_mut() }.ok_or_else(|| null(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, (SppStatus, String)> {
    // SAFETY: by contract a live handle from this library when non-null.
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

fn vehicle(plan: &SppPlan, index: usize) -> Result<&spp_core::planner::VehicleOutcome, (SppStatus, String)> {
    plan.result.vehicles.get(index).ok_or_else(|| {
        (SppStatus::IndexOutOfRange, format!("vehicle index {index} out of range 0..{}", plan.result.vehicles.len()))
    })
}

/// Message describing the last failure on this thread, or null if the last
/// call succeeded. Valid until the next call into this library on the same
/// thread.
#[no_mangle]
pub extern "C" fn spp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn spp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Loads and validates a scenario file.
///
/// # Safety
/// `path` must be a nul-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spp_scenario_from_file(path: *const c_char, out: *mut *mut SppScenario) -> SppStatus {
    guard(|| {
        let path = unsafe { str_arg(path, "path") }?;
        let out = unsafe { out_arg(out, "out") }?;
        let inner = load_scenario(path).map_err(core_err)?;
        *out = Box::into_raw(Box::new(SppScenario { inner }));
        Ok(())
    })
}

/// Parses and validates a scenario from JSON text.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spp_scenario_from_json(json: *const c_char, out: *mut *mut SppScenario) -> SppStatus {
    guard(|| {
        let json = unsafe { str_arg(json, "json") }?;
        let out = unsafe { out_arg(out, "out") }?;
        let inner = parse_scenario(json).map_err(core_err)?;
        *out = Box::into_raw(Box::new(SppScenario { inner }));
        Ok(())
    })
}

/// # Safety
/// `scenario` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spp_scenario_vehicle_count(scenario: *const SppScenario, out: *mut usize) -> SppStatus {
    guard(|| {
        let s = unsafe { handle(scenario, "scenario") }?;
        *unsafe { out_arg(out, "out") }? = s.inner.vehicles.len();
        Ok(())
    })
}

/// Releases a scenario. Null is ignored.
///
/// # Safety
/// `scenario` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spp_scenario_free(scenario: *mut SppScenario) {
    if !scenario.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(scenario) });
    }
}

/// Plans every vehicle in priority order. Infeasible vehicles and safety
/// violations are part of a successful result; query them on the plan.
///
/// # Safety
/// `scenario` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spp_plan_run(scenario: *const SppScenario, out: *mut *mut SppPlan) -> SppStatus {
    guard(|| {
        let s = unsafe { handle(scenario, "scenario") }?;
        let out = unsafe { out_arg(out, "out") }?;
        let result = plan_all(&s.inner).map_err(core_err)?;
        let widths = s
            .inner
            .vehicles
            .iter()
            .map(|v| v.dynamics().map(|m| 1 + m.state_dim() + m.control_dim()))
            .collect::<Result<_, _>>()
            .map_err(core_err)?;
        *out = Box::into_raw(Box::new(SppPlan { result, widths }));
        Ok(())
    })
}

/// Releases a plan. Null is ignored.
///
/// # Safety
/// `plan` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spp_plan_free(plan: *mut SppPlan) {
    if !plan.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(plan) });
    }
}

/// # Safety
/// `plan` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spp_plan_vehicle_count(plan: *const SppPlan, out: *mut usize) -> SppStatus {
    guard(|| {
        let p = unsafe { handle(plan, "plan") }?;
        *unsafe { out_arg(out, "out") }? = p.result.vehicles.len();
        Ok(())
    })
}

/// Whether vehicle `index` (0 = highest priority) was planned.
///
/// # Safety
/// `plan` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spp_plan_vehicle_feasible(plan: *const SppPlan, index: usize, out: *mut bool) -> SppStatus {
    guard(|| {
        let p = unsafe { handle(plan, "plan") }?;
        let out = unsafe { out_arg(out, "out") }?;
        *out = vehicle(p, index)?.is_feasible();
        Ok(())
    })
}

/// Latest start time of vehicle `index`; `SPP_STATUS_NOT_AVAILABLE` if its
/// target is unreachable within the horizon.
///
/// # Safety
/// `plan` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spp_plan_latest_start(plan: *const SppPlan, index: usize, out: *mut f64) -> SppStatus {
    guard(|| {
        let p = unsafe { handle(plan, "plan") }?;
        let out = unsafe { out_arg(out, "out") }?;
        *out = vehicle(p, index)?
            .latest_start
            .ok_or((SppStatus::NotAvailable, format!("vehicle {index} has no latest start time")))?;
        Ok(())
    })
}

/// Arrival time of vehicle `index`; `SPP_STATUS_NOT_AVAILABLE` if it was
/// not planned.
///
/// # Safety
/// `plan` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spp_plan_arrival_time(plan: *const SppPlan, index: usize, out: *mut f64) -> SppStatus {
    guard(|| {
        let p = unsafe { handle(plan, "plan") }?;
        let out = unsafe { out_arg(out, "out") }?;
        *out = vehicle(p, index)?
            .arrival_time()
            .ok_or((SppStatus::NotAvailable, format!("vehicle {index} has no trajectory")))?;
        Ok(())
    })
}

/// Shape of vehicle `index`'s trajectory: `rows` samples of `columns`
/// values each (time, then the state, then the control). A vehicle without
/// a trajectory has zero rows.
///
/// # Safety
/// `plan` must be a live handle; `rows` and `columns` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn spp_plan_trajectory_shape(
    plan: *const SppPlan,
    index: usize,
    rows: *mut usize,
    columns: *mut usize,
) -> SppStatus {
    guard(|| {
        let p = unsafe { handle(plan, "plan") }?;
        let rows = unsafe { out_arg(rows, "rows") }?;
        let columns = unsafe { out_arg(columns, "columns") }?;
        let v = vehicle(p, index)?;
        *rows = v.trajectory.as_ref().map_or(0, |t| t.samples.len());
        *columns = p.widths[index];
        Ok(())
    })
}

/// Copies vehicle `index`'s trajectory, row-major, into `buffer` of
/// `capacity` doubles. Fails with `SPP_STATUS_BUFFER_TOO_SMALL` unless
/// `capacity >= rows * columns`.
///
/// # Safety
/// `plan` must be a live handle; `buffer` must be valid for `capacity`
/// writes.
#[no_mangle]
pub unsafe extern "C" fn spp_plan_trajectory_copy(
    plan: *const SppPlan,
    index: usize,
    buffer: *mut f64,
    capacity: usize,
) -> SppStatus {
    guard(|| {
        let p = unsafe { handle(plan, "plan") }?;
        let v = vehicle(p, index)?;
        let Some(tr) = &v.trajectory else {
            return Err((SppStatus::NotAvailable, format!("vehicle {index} has no trajectory")));
        };
        let needed = tr.samples.len() * p.widths[index];
        if capacity < needed {
            return Err((SppStatus::BufferTooSmall, format!("need {needed} doubles, got {capacity}")));
        }
        if buffer.is_null() {
            return Err(null("buffer"));
        }
        // SAFETY: non-null and valid for `capacity >= needed` writes by contract.
        let dst = unsafe { std::slice::from_raw_parts_mut(buffer, needed) };
        let rows = tr.samples.iter().flat_map(|s| std::iter::once(s.t).chain(s.state.iter().copied()).chain(s.control.iter().copied()));
        for (d, x) in dst.iter_mut().zip(rows) {
            *d = x;
        }
        Ok(())
    })
}

/// Whether the a-posteriori check found no violations.
///
/// # Safety
/// `plan` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spp_plan_is_safe(plan: *const SppPlan, out: *mut bool) -> SppStatus {
    guard(|| {
        let p = unsafe { handle(plan, "plan") }?;
        *unsafe { out_arg(out, "out") }? = p.result.report.is_safe();
        Ok(())
    })
}

/// # Safety
/// `plan` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spp_plan_violation_count(plan: *const SppPlan, out: *mut usize) -> SppStatus {
    guard(|| {
        let p = unsafe { handle(plan, "plan") }?;
        *unsafe { out_arg(out, "out") }? = p.result.report.violations.len();
        Ok(())
    })
}

/// Smallest separation between any two planned vehicles;
/// `SPP_STATUS_NOT_AVAILABLE` with fewer than two.
///
/// # Safety
/// `plan` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spp_plan_min_pairwise_distance(plan: *const SppPlan, out: *mut f64) -> SppStatus {
    guard(|| {
        let p = unsafe { handle(plan, "plan") }?;
        let out = unsafe { out_arg(out, "out") }?;
        *out = p
            .result
            .report
            .min_pairwise_distance
            .ok_or((SppStatus::NotAvailable, "fewer than two planned vehicles".to_string()))?;
        Ok(())
    })
}
