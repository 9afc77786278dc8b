//! Single-integrator instances with closed-form reach-avoid sets.

use std::sync::Arc;

use spp_core::dynamics::{Dynamics, SingleIntegrator1D};
use spp_core::geom::{make_grid, signed_distance, Grid, ScalarField, Shape};
use spp_core::numerics::NumericsConfig;
use spp_core::reach_avoid::{
    latest_start_time, solve, synthesize_trajectory, ReachAvoidSolution, SolveStatus, StaticField, StopRule,
};

fn setup(nodes: usize) -> (Arc<dyn Dynamics>, Arc<Grid>, StaticField) {
    let model: Arc<dyn Dynamics> = Arc::new(SingleIntegrator1D::new(1.0).unwrap());
    let grid = Arc::new(make_grid(&[(-1.0, 1.0, nodes, false)]).unwrap());
    let target = StaticField(signed_distance(&Shape::circle(&[0.0], 0.1).unwrap(), &grid).unwrap());
    (model, grid, target)
}

fn free_space(grid: &Arc<Grid>) -> StaticField {
    StaticField(ScalarField::constant(grid.clone(), -1.0))
}

fn with_obstacle(grid: &Arc<Grid>) -> StaticField {
    let sd = signed_distance(&Shape::rectangle(&[0.2], &[0.3]).unwrap(), grid).unwrap();
    StaticField(sd.complement())
}

fn config(horizon: f64) -> NumericsConfig {
    NumericsConfig { horizon_cap: horizon, ..NumericsConfig::default() }
}

/// Zero crossings of a 1-D field, linearly interpolated between nodes.
fn zero_crossings(f: &ScalarField) -> Vec<f64> {
    let a = f.grid().axis(0);
    let v = f.values();
    let mut out = Vec::new();
    for k in 0..v.len() - 1 {
        if (v[k] <= 0.0) != (v[k + 1] <= 0.0) {
            out.push(a.node(k) + a.spacing() * v[k] / (v[k] - v[k + 1]));
        }
    }
    out
}

fn run(nodes: usize, obstacle: bool, stop: StopRule) -> (ReachAvoidSolution, StaticField) {
    let (model, grid, target) = setup(nodes);
    let g = if obstacle { with_obstacle(&grid) } else { free_space(&grid) };
    let sol = solve(model, grid, &target, &g, 0.0, &config(0.5), &stop).unwrap();
    (sol, target)
}

#[test]
fn terminal_slice_is_max_of_target_and_constraint() {
    let (model, grid, target) = setup(401);
    let g = with_obstacle(&grid);
    let sol = solve(model, grid, &target, &g, 0.0, &config(0.05), &StopRule::Horizon).unwrap();
    let first = &sol.slices()[0];
    assert_eq!(first.time(), Some(0.0));
    for ((v, l), g) in first.values().iter().zip(target.0.values()).zip(g.0.values()) {
        assert_eq!(v.to_bits(), l.max(*g).to_bits());
    }
}

#[test]
fn free_reach_set_grows_at_max_speed() {
    let (sol, _) = run(401, false, StopRule::Horizon);
    assert_eq!(sol.status(), SolveStatus::HorizonReached);
    let last = sol.slices().last().unwrap();
    assert!((sol.earliest_time() + 0.5).abs() < 1e-12);
    let zc = zero_crossings(last);
    assert_eq!(zc.len(), 2, "{zc:?}");
    assert!((zc[0] + 0.6).abs() <= 0.005, "{zc:?}");
    assert!((zc[1] - 0.6).abs() <= 0.005, "{zc:?}");
}

#[test]
fn obstacle_blocks_the_right_side() {
    let (sol, _) = run(401, true, StopRule::Horizon);
    for (k, s) in sol.slices().iter().enumerate() {
        let v = s.interpolate(&[0.5]).unwrap();
        assert!(v > 0.0, "slice {k} at t={} has V(0.5) = {v}", sol.slice_time(k));
    }
    // the left side is unaffected
    let zc = zero_crossings(sol.slices().last().unwrap());
    assert!((zc[0] + 0.6).abs() <= 0.005);
}

#[test]
fn slices_are_nested_backward_in_time() {
    let (sol, _) = run(401, false, StopRule::Horizon);
    let s = sol.slices();
    for k in 1..s.len() {
        for (earlier, later) in s[k].values().iter().zip(s[k - 1].values()) {
            assert!(*earlier <= later + 1e-9);
        }
    }
}

#[test]
fn latest_start_matches_travel_time() {
    let (sol, _) = run(401, false, StopRule::Horizon);
    let lst = latest_start_time(&sol, &[0.35]).unwrap().unwrap();
    assert!((lst + 0.25).abs() <= sol.timestep() + 1e-12, "{lst}");
    assert_eq!(latest_start_time(&sol, &[0.05]).unwrap(), Some(0.0));
    assert_eq!(latest_start_time(&sol, &[0.9]).unwrap(), None);
    assert!(latest_start_time(&sol, &[1.5]).is_err());
}

#[test]
fn reach_rule_stops_after_entry() {
    let (sol, _) = run(401, false, StopRule::reach(&[0.35]));
    assert_eq!(sol.status(), SolveStatus::QueryReached);
    assert!(sol.earliest_time() > -0.27 && sol.earliest_time() < -0.25);
    let lst = latest_start_time(&sol, &[0.35]).unwrap().unwrap();
    assert!((lst + 0.25).abs() <= sol.timestep() + 1e-12);

    let (sol, _) = run(401, true, StopRule::reach(&[0.5]));
    assert_eq!(sol.status(), SolveStatus::InfeasibleWithinHorizon);
}

#[test]
fn convergence_rule_on_static_fields() {
    let (model, grid, target) = setup(81);
    let g = with_obstacle(&grid);
    let sol = solve(model, grid, &target, &g, 0.0, &config(10.0), &StopRule::converged()).unwrap();
    assert_eq!(sol.status(), SolveStatus::Converged);
    assert!(sol.earliest_time() > -10.0);
}

#[test]
fn synthesized_path_moves_at_full_speed() {
    let (sol, target) = run(401, false, StopRule::Horizon);
    let lst = latest_start_time(&sol, &[0.5]).unwrap().unwrap();
    assert!((lst + 0.4).abs() <= sol.timestep() + 1e-12);
    let tr = synthesize_trajectory(&sol, &target, &[0.5], lst, sol.timestep()).unwrap();
    let arrival = tr.arrival_time.unwrap();
    assert!(arrival <= 0.0);
    assert!((arrival - lst - 0.4).abs() <= 2.0 * sol.timestep(), "{}", arrival - lst);
    for s in &tr.samples[..tr.samples.len() - 1] {
        assert_eq!(s.control, vec![-1.0]);
    }
    let end = tr.final_state()[0];
    assert!(end <= 0.1 && end > 0.1 - 2.0 * sol.timestep());
}

#[test]
fn synthesis_from_inside_target_is_empty() {
    let (sol, target) = run(101, false, StopRule::Horizon);
    let tr = synthesize_trajectory(&sol, &target, &[0.02], -0.3, 0.01).unwrap();
    assert_eq!(tr.samples.len(), 1);
    assert_eq!(tr.arrival_time, Some(-0.3));
}

#[test]
fn synthesis_refuses_unreachable_departure() {
    let (sol, target) = run(401, false, StopRule::Horizon);
    // 0.5 needs 0.4 time units; leaving at -0.1 is too late
    assert!(synthesize_trajectory(&sol, &target, &[0.5], -0.1, 0.01).is_err());
}
