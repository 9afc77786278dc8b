//! Text outputs: trajectory CSV, the latest-start summary and the safety
//! report.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geom::Grid;
use crate::planner::{PlanResult, SafetyReport, Scenario, VehicleStatus};
use crate::reach_avoid::{Trajectory, TrajectorySample};

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Maps a periodic coordinate into `[lower, lower + period)`.
fn wrap_into(x: f64, lower: f64, period: f64) -> f64 {
    let r = (x - lower).rem_euclid(period);
    if r >= period {
        lower
    } else {
        lower + r
    }
}

/// Renders a trajectory as CSV with header `t,<state labels>,<control labels>`.
/// Coordinates on periodic grid axes are wrapped into the axis range.
pub fn trajectory_csv(tr: &Trajectory, grid: &Grid, state_labels: &[&str], control_labels: &[&str]) -> String {
    let mut out = String::new();
    out.push('t');
    for l in state_labels.iter().chain(control_labels) {
        out.push(',');
        out.push_str(l);
    }
    out.push('\n');
    for s in &tr.samples {
        out.push_str(&fmt_f64(s.t));
        for (d, x) in s.state.iter().enumerate() {
            let x = match grid.axes().get(d) {
                Some(a) if a.periodic => wrap_into(*x, a.lower, a.period()),
                _ => *x,
            };
            let _ = write!(out, ",{}", fmt_f64(x));
        }
        for u in &s.control {
            let _ = write!(out, ",{}", fmt_f64(*u));
        }
        out.push('\n');
    }
    out
}

/// Parses CSV produced by [`trajectory_csv`]. The first sample is taken as
/// the departure and the last as the arrival, which is how planned
/// trajectories end.
pub fn parse_trajectory_csv(text: &str, state_dim: usize, control_dim: usize) -> Result<Trajectory> {
    let bad = |m: String| Error::TrajectoryCsv(m);
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| bad("empty file".into()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let width = 1 + state_dim + control_dim;
    if cols.len() != width || cols[0] != "t" {
        return Err(bad(format!("header `{header}` does not have {width} columns starting with t")));
    }
    let mut samples = Vec::new();
    for (i, line) in lines.enumerate() {
        let row: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| bad(format!("row {}: {e}", i + 1)))?;
        if row.len() != width {
            return Err(bad(format!("row {} has {} columns, expected {width}", i + 1, row.len())));
        }
        let s = TrajectorySample {
            t: row[0],
            state: row[1..1 + state_dim].to_vec(),
            control: row[1 + state_dim..].to_vec(),
        };
        if samples.last().is_some_and(|p: &TrajectorySample| p.t >= s.t) {
            return Err(bad(format!("row {}: time does not increase", i + 1)));
        }
        samples.push(s);
    }
    let (first, last) = match (samples.first(), samples.last()) {
        (Some(a), Some(b)) => (a.t, b.t),
        _ => return Err(bad("no samples".into())),
    };
    Ok(Trajectory { samples, departure_time: first, arrival_time: Some(last) })
}

pub fn read_trajectory_csv(path: impl AsRef<Path>, state_dim: usize, control_dim: usize) -> Result<Trajectory> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_trajectory_csv(&text, state_dim, control_dim)
}

fn status_label(s: &VehicleStatus) -> String {
    match s {
        VehicleStatus::Planned => "planned".into(),
        VehicleStatus::Unreachable => "unreachable".into(),
        VehicleStatus::StartsTooEarly => "starts_too_early".into(),
        VehicleStatus::SynthesisFailed(r) => format!("synthesis_failed: {}", r.replace([',', '\n'], ";")),
    }
}

/// One row per vehicle: priority, schedule, latest start, actual times and
/// status. Empty cells stand for "none".
pub fn lst_summary_csv(result: &PlanResult, scenario: &Scenario) -> String {
    let mut out = String::from("priority,model,est,sta,latest_start,departure,arrival,timestep,status\n");
    for (spec, v) in scenario.vehicles.iter().zip(&result.vehicles) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            v.priority,
            spec.model,
            fmt_f64(spec.earliest_start),
            fmt_f64(spec.scheduled_arrival),
            fmt_opt(v.latest_start),
            fmt_opt(v.trajectory.as_ref().map(|t| t.departure_time)),
            fmt_opt(v.arrival_time()),
            fmt_f64(v.timestep),
            status_label(&v.status),
        );
    }
    out
}

pub fn safety_report_json(report: &SafetyReport) -> String {
    serde_json::to_string_pretty(report).expect("reports always serialize")
}
