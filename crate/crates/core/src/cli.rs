//! The `spp` command line.
//!
//! `spp plan` runs the sequential planner and writes its outputs;
//! `spp solve` runs one vehicle's backward solve against static obstacles
//! only. Exit codes: 0 success, 1 input/output or solver error, 2 some
//! vehicle infeasible, 3 safety violation.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::geom::Grid;
use crate::io::{
    fmt_f64, load_scenario_file, lst_summary_csv, safety_report_json, trajectory_csv, write_slice,
};
use crate::planner::{plan_all_with, verify_plan, AvoidConstraint, PlanResult, Scenario, VehicleSpec};
use crate::reach_avoid::{latest_start_time, solve, ReachAvoidSolution, StaticField, StopRule};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_UNSAFE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "spp", version, about = "Sequential reach-avoid path planning for multiple vehicles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plan every vehicle in priority order and write trajectories and reports.
    Plan(PlanArgs),
    /// Solve a single vehicle's reach-avoid problem against static obstacles.
    Solve(SolveArgs),
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    pub scenario: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    /// Dump value-function slices of one vehicle, e.g. `v3`.
    #[arg(long, value_name = "vK", value_parser = parse_vehicle_tag)]
    pub dump_slices: Option<usize>,
    /// Keep every N-th stored slice when dumping.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub stride: u64,
    /// Time step of the a-posteriori safety check.
    #[arg(long, value_name = "X")]
    pub check_dt: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub scenario: PathBuf,
    /// Override the vehicle's dynamics model (`dubins` or `integrator1d`).
    #[arg(long, value_name = "M")]
    pub model: Option<String>,
    /// Vehicle whose target, schedule and dynamics to use (by priority).
    #[arg(long, default_value_t = 1)]
    pub vehicle: usize,
    /// Print the latest start time from this comma-separated state.
    #[arg(long, value_name = "STATE", allow_hyphen_values = true)]
    pub query_lst: Option<String>,
    /// Solve on K successively halved grids and report error ratios.
    #[arg(long, value_name = "K", value_parser = clap::value_parser!(u32).range(2..))]
    pub convergence: Option<u32>,
}

fn parse_vehicle_tag(s: &str) -> std::result::Result<usize, String> {
    let digits = s.strip_prefix(['v', 'V']).unwrap_or(s);
    match digits.parse::<usize>() {
        Ok(k) if k >= 1 => Ok(k),
        _ => Err(format!("expected a vehicle tag like v3, got `{s}`")),
    }
}

/// Parses a comma- or space-separated state vector.
pub fn parse_state(s: &str) -> Result<Vec<f64>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|e| Error::InvalidConfig(format!("state component `{t}`: {e}"))))
        .collect()
}

/// Sizes the global worker pool from `SPP_THREADS` (unset or 0: automatic).
pub fn configure_threads() {
    let n = std::env::var("SPP_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()).unwrap_or(0);
    if n > 0 {
        // a pool configured earlier in the process wins
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Parses arguments, runs the command and returns the process exit code.
/// Diagnostics go to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    configure_threads();
    let outcome = match &cli.command {
        Command::Plan(a) => run_plan(a),
        Command::Solve(a) => run_solve(a).map(|report| {
            print!("{report}");
            EXIT_OK
        }),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("spp: {e}");
        EXIT_ERROR
    })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Runs the planner, writes its outputs into `args.out` and returns the
/// exit code for the plan's outcome.
pub fn run_plan(args: &PlanArgs) -> Result<i32> {
    let (doc, scenario) = load_scenario_file(&args.scenario)?;
    std::fs::create_dir_all(&args.out).map_err(|e| Error::io(&args.out, e))?;
    if let Some(k) = args.dump_slices {
        if k > scenario.vehicles.len() {
            return Err(Error::InvalidConfig(format!(
                "--dump-slices v{k}: scenario has {} vehicles",
                scenario.vehicles.len()
            )));
        }
    }

    let mut log = String::new();
    let _ = writeln!(log, "scenario {}", args.scenario.display());
    for n in &doc.notes {
        let _ = writeln!(log, "note: {n}");
    }
    let started = Instant::now();
    let mut dump_error: Option<Error> = None;
    let mut dumped = 0usize;
    let mut result = plan_all_with(&scenario, &mut |stage| {
        let s = stage.solution;
        let _ = writeln!(
            log,
            "vehicle {}: {} slices, dt {}, status {:?}, earliest slice {}",
            stage.vehicle.priority,
            s.slices().len(),
            fmt_f64(s.timestep()),
            s.status(),
            fmt_f64(s.earliest_time())
        );
        if args.dump_slices == Some(stage.vehicle.priority) && dump_error.is_none() {
            match dump_slices(s, &args.out, stage.vehicle.priority, args.stride as usize) {
                Ok(n) => dumped = n,
                Err(e) => dump_error = Some(e),
            }
        }
    })?;
    if let Some(e) = dump_error {
        return Err(e);
    }
    if let Some(dt) = args.check_dt {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidConfig(format!("--check-dt {dt} must be positive")));
        }
        result.report = verify_plan(&result, &scenario, dt);
    }
    result.report.notes.extend(doc.notes.iter().cloned());

    write_plan_outputs(&result, &scenario, &args.out)?;
    for v in &result.vehicles {
        let _ = writeln!(
            log,
            "vehicle {}: latest start {}, arrival {}, {:?}",
            v.priority,
            v.latest_start.map_or("none".into(), fmt_f64),
            v.arrival_time().map_or("none".into(), fmt_f64),
            v.status
        );
    }
    if dumped > 0 {
        let _ = writeln!(log, "dumped {dumped} value slices");
    }
    for w in &result.report.violations {
        let _ = writeln!(log, "violation: {w}");
    }
    let _ = writeln!(log, "elapsed {:.1} s", started.elapsed().as_secs_f64());
    write_file(&args.out.join("plan.log"), &log)?;
    eprint!("{log}");

    Ok(if !result.all_feasible() {
        EXIT_INFEASIBLE
    } else if !result.report.is_safe() {
        EXIT_UNSAFE
    } else {
        EXIT_OK
    })
}

/// File name of a vehicle's trajectory CSV.
pub fn trajectory_file_name(priority: usize) -> String {
    format!("trajectory_v{priority}.csv")
}

/// Writes one trajectory CSV per planned vehicle, `lst_summary.csv` and
/// `safety_report.json`.
pub fn write_plan_outputs(result: &PlanResult, scenario: &Scenario, out: &Path) -> Result<()> {
    for (spec, v) in scenario.vehicles.iter().zip(&result.vehicles) {
        if let Some(tr) = &v.trajectory {
            let model = spec.dynamics()?;
            let csv = trajectory_csv(tr, &scenario.grid, model.state_labels(), model.control_labels());
            write_file(&out.join(trajectory_file_name(v.priority)), &csv)?;
        }
    }
    write_file(&out.join("lst_summary.csv"), &lst_summary_csv(result, scenario))?;
    write_file(&out.join("safety_report.json"), &safety_report_json(&result.report))
}

fn dump_slices(solution: &ReachAvoidSolution, out: &Path, priority: usize, stride: usize) -> Result<usize> {
    let dir = out.join(format!("slices_v{priority}"));
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let mut n = 0;
    for (k, s) in solution.slices().iter().enumerate().step_by(stride) {
        write_slice(dir.join(format!("slice_{k:05}.bin")), s)?;
        n += 1;
    }
    Ok(n)
}

fn solve_vehicle(
    scenario: &Scenario,
    spec: &VehicleSpec,
    grid: Arc<Grid>,
) -> Result<ReachAvoidSolution> {
    let model = spec.dynamics()?;
    let target = StaticField(spec.target.field(&grid)?);
    let constraint =
        AvoidConstraint::new(grid.clone(), model.position_dim(), &scenario.obstacles, vec![], scenario.danger_radius)?;
    let mut numerics = scenario.numerics;
    let needed = spec.scheduled_arrival - spec.earliest_start;
    if needed > 0.0 {
        numerics.horizon_cap = numerics.horizon_cap.min(needed);
    }
    solve(model, grid, &target, &constraint, spec.scheduled_arrival, &numerics, &StopRule::Horizon)
}

/// Zero crossings of a 1-D field, linearly interpolated between nodes.
fn zero_crossings(solution: &ReachAvoidSolution) -> Vec<f64> {
    let f = solution.slices().last().expect("solutions hold at least one slice");
    let grid = f.grid();
    let v = f.values();
    let mut out = Vec::new();
    for i in 0..v.len().saturating_sub(1) {
        let (a, b) = (v[i], v[i + 1]);
        if (a <= 0.0) != (b <= 0.0) {
            let (xa, xb) = (grid.axis(0).node(i), grid.axis(0).node(i + 1));
            out.push(xa + (xb - xa) * a / (a - b));
        }
    }
    out
}

/// Runs the single-vehicle solve and returns the text report.
pub fn run_solve(args: &SolveArgs) -> Result<String> {
    let (_, mut scenario) = load_scenario_file(&args.scenario)?;
    let idx = args.vehicle.checked_sub(1).filter(|i| *i < scenario.vehicles.len()).ok_or_else(|| {
        Error::InvalidConfig(format!("--vehicle {}: scenario has {} vehicles", args.vehicle, scenario.vehicles.len()))
    })?;
    if let Some(m) = &args.model {
        scenario.vehicles[idx].model = m.clone();
        scenario.validate()?;
    }
    let spec = scenario.vehicles[idx].clone();
    let model = spec.dynamics()?;

    let mut out = String::new();
    let dims: Vec<String> = scenario.grid.axes().iter().map(|a| a.count.to_string()).collect();
    let _ = writeln!(out, "model {} on grid {}", model.name(), dims.join("x"));

    let solution = solve_vehicle(&scenario, &spec, scenario.grid.clone())?;
    let _ = writeln!(
        out,
        "slices {} dt {} from t = {} back to t = {} ({:?})",
        solution.slices().len(),
        fmt_f64(solution.timestep()),
        fmt_f64(solution.terminal_time()),
        fmt_f64(solution.earliest_time()),
        solution.status()
    );
    if scenario.grid.ndim() == 1 {
        let xs: Vec<String> = zero_crossings(&solution).into_iter().map(fmt_f64).collect();
        let _ = writeln!(out, "reach-avoid boundary at t = {}: [{}]", fmt_f64(solution.earliest_time()), xs.join(", "));
    }
    if let Some(q) = &args.query_lst {
        let state = parse_state(q)?;
        match latest_start_time(&solution, &state)? {
            Some(t) => {
                let _ = writeln!(out, "latest start time {}", fmt_f64(t));
            }
            None => {
                let _ = writeln!(out, "latest start time none (not reachable within the horizon)");
            }
        }
    }
    if let Some(k) = args.convergence {
        out.push_str(&convergence_study(&scenario, &spec, k as usize, &solution)?);
    }
    Ok(out)
}

/// Solves on `levels` grids, each with half the spacing of the previous, plus
/// one finer reference grid, and compares the earliest slices at the base
/// nodes, which every refined grid contains.
fn convergence_study(scenario: &Scenario, spec: &VehicleSpec, levels: usize, base: &ReachAvoidSolution) -> Result<String> {
    let mut grids = vec![scenario.grid.clone()];
    for _ in 0..levels {
        let next = Arc::new(grids.last().unwrap().refined());
        grids.push(next);
    }
    let mut finals = vec![base.slices().last().unwrap().clone()];
    for g in &grids[1..] {
        finals.push(solve_vehicle(scenario, spec, g.clone())?.slices().last().unwrap().clone());
    }
    let reference = finals.pop().unwrap();
    let base_grid = &grids[0];
    let mut errors = Vec::with_capacity(levels);
    for f in &finals {
        let mut e: f64 = 0.0;
        for idx in 0..base_grid.len() {
            let x = base_grid.coords(idx);
            e = e.max((f.interpolate(&x)? - reference.interpolate(&x)?).abs());
        }
        errors.push(e);
    }
    let mut out = String::new();
    for (i, e) in errors.iter().enumerate() {
        let n: Vec<String> = grids[i].axes().iter().map(|a| a.count.to_string()).collect();
        let _ = write!(out, "level {i} grid {} max error {}", n.join("x"), fmt_f64(*e));
        if i > 0 {
            let _ = write!(out, " ratio {}", fmt_f64(errors[i - 1] / e));
        }
        out.push('\n');
    }
    let n: Vec<String> = reference.grid().axes().iter().map(|a| a.count.to_string()).collect();
    let _ = writeln!(out, "reference grid {}", n.join("x"));
    Ok(out)
}
