use std::ffi::{CStr, CString};
use std::ptr;

use spp_ffi::*;

const INTEGRATOR: &str = include_str!("../../core/examples/integrator_oracle.json");

fn last_error() -> String {
    let p = spp_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn scenario(json: &str) -> *mut SppScenario {
    let text = CString::new(json).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { spp_scenario_from_json(text.as_ptr(), &mut s) }, SppStatus::Ok);
    assert!(spp_last_error_message().is_null());
    s
}

#[test]
fn plan_round_trip_through_handles() {
    let s = scenario(INTEGRATOR);
    let mut n = 0usize;
    assert_eq!(unsafe { spp_scenario_vehicle_count(s, &mut n) }, SppStatus::Ok);
    assert_eq!(n, 1);

    let mut plan = ptr::null_mut();
    assert_eq!(unsafe { spp_plan_run(s, &mut plan) }, SppStatus::Ok);
    unsafe { spp_scenario_free(s) };

    let mut feasible = false;
    assert_eq!(unsafe { spp_plan_vehicle_feasible(plan, 0, &mut feasible) }, SppStatus::Ok);
    assert!(feasible);
    let (mut lst, mut arrival) = (0.0, 0.0);
    assert_eq!(unsafe { spp_plan_latest_start(plan, 0, &mut lst) }, SppStatus::Ok);
    assert_eq!(unsafe { spp_plan_arrival_time(plan, 0, &mut arrival) }, SppStatus::Ok);
    // from -0.5 at unit speed the target edge is 0.4 away
    assert!((lst + 0.4).abs() < 0.01, "{lst}");
    assert!(arrival <= 0.0 && arrival > lst);

    let (mut rows, mut cols) = (0usize, 0usize);
    assert_eq!(unsafe { spp_plan_trajectory_shape(plan, 0, &mut rows, &mut cols) }, SppStatus::Ok);
    assert_eq!(cols, 3);
    assert!(rows > 10);
    let mut buf = vec![f64::NAN; rows * cols];
    assert_eq!(unsafe { spp_plan_trajectory_copy(plan, 0, buf.as_mut_ptr(), buf.len() - 1) }, SppStatus::BufferTooSmall);
    assert!(last_error().contains("need"));
    assert_eq!(unsafe { spp_plan_trajectory_copy(plan, 0, buf.as_mut_ptr(), buf.len()) }, SppStatus::Ok);
    assert_eq!(buf[0], lst);
    assert_eq!(buf[1], -0.5);
    assert_eq!(buf[2], 1.0);
    assert_eq!(buf[(rows - 1) * cols], arrival);

    let mut safe = false;
    assert_eq!(unsafe { spp_plan_is_safe(plan, &mut safe) }, SppStatus::Ok);
    assert!(safe);
    let mut violations = 9usize;
    assert_eq!(unsafe { spp_plan_violation_count(plan, &mut violations) }, SppStatus::Ok);
    assert_eq!(violations, 0);
    let mut d = 0.0;
    assert_eq!(unsafe { spp_plan_min_pairwise_distance(plan, &mut d) }, SppStatus::NotAvailable);

    assert_eq!(unsafe { spp_plan_latest_start(plan, 1, &mut lst) }, SppStatus::IndexOutOfRange);
    assert!(last_error().contains("out of range"));
    unsafe { spp_plan_free(plan) };
}

#[test]
fn unreachable_vehicle_has_no_latest_start() {
    let s = scenario(&INTEGRATOR.replace("\"x0\": [-0.5]", "\"x0\": [-0.95]"));
    let mut plan = ptr::null_mut();
    assert_eq!(unsafe { spp_plan_run(s, &mut plan) }, SppStatus::Ok);
    let mut feasible = true;
    assert_eq!(unsafe { spp_plan_vehicle_feasible(plan, 0, &mut feasible) }, SppStatus::Ok);
    assert!(!feasible);
    let mut x = 0.0;
    assert_eq!(unsafe { spp_plan_latest_start(plan, 0, &mut x) }, SppStatus::NotAvailable);
    assert_eq!(unsafe { spp_plan_arrival_time(plan, 0, &mut x) }, SppStatus::NotAvailable);
    let (mut rows, mut cols) = (9usize, 0usize);
    assert_eq!(unsafe { spp_plan_trajectory_shape(plan, 0, &mut rows, &mut cols) }, SppStatus::Ok);
    assert_eq!(rows, 0);
    assert_eq!(unsafe { spp_plan_trajectory_copy(plan, 0, ptr::null_mut(), 0) }, SppStatus::NotAvailable);
    unsafe {
        spp_plan_free(plan);
        spp_scenario_free(s);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut s = ptr::null_mut();
    let bad = CString::new("{ \"grid\": ").unwrap();
    assert_eq!(unsafe { spp_scenario_from_json(bad.as_ptr(), &mut s) }, SppStatus::Parse);
    assert!(last_error().contains("line"));
    assert!(s.is_null());

    let neg = CString::new(INTEGRATOR.replace("\"danger_radius\": 0.05", "\"danger_radius\": -1")).unwrap();
    assert_eq!(unsafe { spp_scenario_from_json(neg.as_ptr(), &mut s) }, SppStatus::Schema);
    assert!(last_error().contains("/danger_radius"));

    let missing = CString::new("/nonexistent/scenario.json").unwrap();
    assert_eq!(unsafe { spp_scenario_from_file(missing.as_ptr(), &mut s) }, SppStatus::Io);

    assert_eq!(unsafe { spp_scenario_from_json(ptr::null(), &mut s) }, SppStatus::NullArgument);
    let ok = CString::new(INTEGRATOR).unwrap();
    assert_eq!(unsafe { spp_scenario_from_json(ok.as_ptr(), ptr::null_mut()) }, SppStatus::NullArgument);
    let mut n = 0usize;
    assert_eq!(unsafe { spp_scenario_vehicle_count(ptr::null(), &mut n) }, SppStatus::NullArgument);
    let mut plan = ptr::null_mut();
    assert_eq!(unsafe { spp_plan_run(ptr::null(), &mut plan) }, SppStatus::NullArgument);

    let invalid = [0xffu8, 0xfe, 0];
    assert_eq!(unsafe { spp_scenario_from_json(invalid.as_ptr().cast(), &mut s) }, SppStatus::InvalidUtf8);

    unsafe {
        spp_scenario_free(ptr::null_mut());
        spp_plan_free(ptr::null_mut());
    }
}

#[test]
fn loads_bundled_file_and_reports_version() {
    let path = CString::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/examples/four_dubins.json")).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { spp_scenario_from_file(path.as_ptr(), &mut s) }, SppStatus::Ok);
    let mut n = 0usize;
    assert_eq!(unsafe { spp_scenario_vehicle_count(s, &mut n) }, SppStatus::Ok);
    assert_eq!(n, 4);
    unsafe { spp_scenario_free(s) };
    let v = unsafe { CStr::from_ptr(spp_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_surface() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/spp.h")).unwrap();
    for name in [
        "typedef struct SppScenario SppScenario;",
        "typedef struct SppPlan SppPlan;",
        "SPP_STATUS_OK = 0",
        "spp_scenario_from_file",
        "spp_plan_run",
        "spp_plan_trajectory_copy",
        "spp_last_error_message",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
