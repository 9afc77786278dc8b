use serde::{Deserialize, Serialize};

use super::plan::PlanResult;
use super::scenario::Scenario;
use crate::reach_avoid::Trajectory;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PairSeparation {
    pub higher: usize,
    pub lower: usize,
    pub min_distance: f64,
    pub at_time: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VehicleCheck {
    pub priority: usize,
    pub departure: Option<f64>,
    pub arrival: Option<f64>,
    /// Smallest signed distance to any static obstacle along the path.
    pub min_obstacle_distance: Option<f64>,
    /// Scheduled arrival minus actual arrival.
    pub deadline_slack: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SafetyReport {
    pub danger_radius: f64,
    pub check_dt: f64,
    pub min_pairwise_distance: Option<f64>,
    pub pairs: Vec<PairSeparation>,
    pub vehicles: Vec<VehicleCheck>,
    pub violations: Vec<String>,
    pub notes: Vec<String>,
}

impl SafetyReport {
    pub fn is_safe(&self) -> bool {
        self.violations.is_empty()
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Check times inside `[lo, hi]`: a uniform lattice of step `dt` anchored at
/// `origin`, the window ends, and every trajectory sample time.
fn check_times(origin: f64, dt: f64, lo: f64, hi: f64, samples: &[f64]) -> Vec<f64> {
    let mut ts = vec![lo, hi];
    let k0 = ((lo - origin) / dt).ceil().max(0.0) as u64;
    let mut k = k0;
    loop {
        let t = origin + k as f64 * dt;
        if t > hi {
            break;
        }
        ts.push(t);
        k += 1;
    }
    ts.extend(samples.iter().copied().filter(|t| (lo..=hi).contains(t)));
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts
}

/// A-posteriori safety check of a plan, independent of the solver's fields.
pub fn verify_plan(result: &PlanResult, scenario: &Scenario, check_dt: f64) -> SafetyReport {
    let trajectories: Vec<Option<Trajectory>> = result.vehicles.iter().map(|v| v.trajectory.clone()).collect();
    verify_trajectories(&trajectories, scenario, check_dt)
}

/// Checks planned trajectories (indexed like `scenario.vehicles`) on a time
/// lattice of step `check_dt`.
///
/// Each pair is checked over the lower-priority vehicle's active window,
/// from its departure to its arrival; the higher-priority vehicle is parked
/// at its start before departing and at its final state after arriving (or
/// gone, when arrived vehicles do not persist). Reports a violation for any
/// separation below the danger radius, any static-obstacle incursion, and
/// any late arrival.
pub fn verify_trajectories(trajectories: &[Option<Trajectory>], scenario: &Scenario, check_dt: f64) -> SafetyReport {
    let r = scenario.danger_radius;
    let k = scenario
        .vehicles
        .first()
        .and_then(|v| v.dynamics().ok())
        .map(|m| m.position_dim())
        .unwrap_or(2)
        .min(scenario.grid.ndim());
    let dt = if check_dt > 0.0 && check_dt.is_finite() { check_dt } else { 1e-3 };
    let mut report = SafetyReport { danger_radius: r, check_dt: dt, ..Default::default() };

    let active: Vec<(usize, &Trajectory)> =
        trajectories.iter().enumerate().filter_map(|(i, t)| t.as_ref().map(|t| (i, t))).collect();
    let origin = active.iter().map(|(_, t)| t.samples[0].t).fold(f64::INFINITY, f64::min);

    for (i, spec) in scenario.vehicles.iter().enumerate() {
        let mut check = VehicleCheck { priority: spec.priority, ..Default::default() };
        if let Some(Some(tr)) = trajectories.get(i) {
            let (lo, hi) = (tr.samples[0].t, tr.end_time());
            check.departure = Some(tr.departure_time);
            check.arrival = tr.arrival_time;
            let sample_times: Vec<f64> = tr.samples.iter().map(|s| s.t).collect();
            if !scenario.obstacles.is_empty() {
                let min_d = check_times(origin, dt, lo, hi, &sample_times)
                    .into_iter()
                    .filter_map(|t| scenario.obstacle_distance(&tr.position_at(t, k)))
                    .fold(f64::INFINITY, f64::min);
                check.min_obstacle_distance = Some(min_d);
                if min_d < 0.0 {
                    report.violations.push(format!(
                        "vehicle {} enters a static obstacle (depth {:.4})",
                        spec.priority, -min_d
                    ));
                }
            }
            match tr.arrival_time {
                Some(a) => {
                    let slack = spec.scheduled_arrival - a;
                    check.deadline_slack = Some(slack);
                    if slack < 0.0 {
                        report.violations.push(format!("vehicle {} arrives {:.4} late", spec.priority, -slack));
                    }
                }
                None => report.violations.push(format!("vehicle {} never reaches its target", spec.priority)),
            }
        }
        report.vehicles.push(check);
    }

    for (a, &(hi_idx, higher)) in active.iter().enumerate() {
        for &(lo_idx, lower) in &active[a + 1..] {
            let (lo, hi) = (lower.samples[0].t, lower.end_time());
            let mut samples: Vec<f64> = lower.samples.iter().map(|s| s.t).collect();
            samples.extend(higher.samples.iter().map(|s| s.t));
            let mut best = PairSeparation {
                higher: scenario.vehicles[hi_idx].priority,
                lower: scenario.vehicles[lo_idx].priority,
                min_distance: f64::INFINITY,
                at_time: lo,
            };
            for t in check_times(origin, dt, lo, hi, &samples) {
                if !scenario.options.post_arrival_obstacle && t > higher.end_time() {
                    continue;
                }
                let d = dist(&higher.position_at(t, k), &lower.position_at(t, k));
                if d < best.min_distance {
                    best.min_distance = d;
                    best.at_time = t;
                }
            }
            if best.min_distance < r {
                report.violations.push(format!(
                    "vehicles {} and {} are {:.4} apart at t = {:.4}, inside the danger radius {r}",
                    best.higher, best.lower, best.min_distance, best.at_time
                ));
            }
            if best.min_distance.is_finite() {
                report.min_pairwise_distance =
                    Some(report.min_pairwise_distance.map_or(best.min_distance, |m| m.min(best.min_distance)));
            }
            report.pairs.push(best);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;
    use std::sync::Arc;

    use super::*;
    use crate::geom::{make_grid, Shape};
    use crate::numerics::NumericsConfig;
    use crate::planner::{PlanOptions, TargetSpec, VehicleSpec};
    use crate::reach_avoid::TrajectorySample;

    fn scenario(n: usize, obstacles: Vec<Shape>) -> Scenario {
        let grid = Arc::new(make_grid(&[(-1.0, 1.0, 21, false), (-1.0, 1.0, 21, false), (0.0, 2.0 * PI, 8, true)]).unwrap());
        let vehicles = (0..n)
            .map(|i| VehicleSpec {
                model: "dubins".into(),
                speed: 1.0,
                max_turn_rate: Some(1.0),
                x0: vec![-0.8 + 0.3 * i as f64, 0.8, 0.0],
                earliest_start: -2.0,
                scheduled_arrival: 0.0,
                target: TargetSpec::position(Shape::circle(&[0.5, -0.5], 0.1).unwrap()),
                priority: i + 1,
            })
            .collect();
        Scenario::new(grid, obstacles, vehicles, 0.1, NumericsConfig::default(), PlanOptions::default()).unwrap()
    }

    fn stationary(x: f64, y: f64) -> Trajectory {
        Trajectory {
            samples: vec![
                TrajectorySample { t: -1.0, state: vec![x, y, 0.0], control: vec![0.0] },
                TrajectorySample { t: 0.0, state: vec![x, y, 0.0], control: vec![0.0] },
            ],
            departure_time: -1.0,
            arrival_time: Some(0.0),
        }
    }

    #[test]
    fn close_stationary_pair_is_flagged() {
        let s = scenario(2, vec![]);
        let rep = verify_trajectories(&[Some(stationary(0.0, 0.0)), Some(stationary(0.05, 0.0))], &s, 0.01);
        assert!(!rep.is_safe());
        assert!((rep.min_pairwise_distance.unwrap() - 0.05).abs() < 1e-12);
    }

    #[test]
    fn single_vehicle_is_clean() {
        let s = scenario(1, vec![]);
        let rep = verify_trajectories(&[Some(stationary(0.0, 0.0))], &s, 0.01);
        assert!(rep.is_safe(), "{:?}", rep.violations);
        assert_eq!(rep.min_pairwise_distance, None);
        assert_eq!(rep.vehicles[0].deadline_slack, Some(0.0));
    }

    #[test]
    fn obstacle_and_deadline_violations() {
        let s = scenario(1, vec![Shape::rectangle(&[-0.1, -0.1], &[0.1, 0.1]).unwrap()]);
        let mut late = stationary(0.0, 0.0);
        late.arrival_time = Some(0.5);
        let rep = verify_trajectories(&[Some(late)], &s, 0.01);
        assert_eq!(rep.violations.len(), 2, "{:?}", rep.violations);
        assert!(rep.vehicles[0].min_obstacle_distance.unwrap() < 0.0);
    }

    #[test]
    fn pair_checked_only_while_lower_vehicle_is_active() {
        let s = scenario(2, vec![]);
        let higher = Trajectory {
            samples: vec![
                TrajectorySample { t: -2.0, state: vec![0.0, 0.0, 0.0], control: vec![0.0] },
                TrajectorySample { t: -1.0, state: vec![0.8, 0.0, 0.0], control: vec![0.0] },
            ],
            departure_time: -2.0,
            arrival_time: Some(-1.0),
        };
        // lower vehicle parked at the higher one's start before it departs:
        // outside the guarantee, so not checked
        let mut lower = stationary(0.0, 0.02);
        lower.samples[0].t = -0.5;
        lower.departure_time = -0.5;
        let rep = verify_trajectories(&[Some(higher), Some(lower)], &s, 0.01);
        assert!(rep.is_safe(), "{:?}", rep.violations);
        assert!((rep.pairs[0].min_distance - (0.8f64.powi(2) + 0.02f64.powi(2)).sqrt()).abs() < 1e-12);
    }
}
