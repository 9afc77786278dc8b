use serde::Serialize;

use super::obstacles::{build_constraint, AvoidConstraint};
use super::scenario::{Scenario, VehicleSpec};
use super::verify::{verify_plan, SafetyReport};
use crate::error::{Error, Result};
use crate::reach_avoid::{
    latest_start_time, solve, synthesize_trajectory, ReachAvoidSolution, StaticField, StopRule,
    Trajectory,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum VehicleStatus {
    Planned,
    /// The start state never enters the reach-avoid set within the horizon.
    Unreachable,
    /// Reachable, but only by departing before the earliest start time.
    StartsTooEarly,
    /// Control synthesis did not deliver the vehicle on time.
    SynthesisFailed(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct VehicleOutcome {
    pub priority: usize,
    pub latest_start: Option<f64>,
    pub trajectory: Option<Trajectory>,
    pub status: VehicleStatus,
    /// Solver step, also used as the simulation step.
    pub timestep: f64,
}

impl VehicleOutcome {
    pub fn is_feasible(&self) -> bool {
        self.status == VehicleStatus::Planned
    }

    pub fn arrival_time(&self) -> Option<f64> {
        self.trajectory.as_ref().and_then(|t| t.arrival_time)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PlanResult {
    pub vehicles: Vec<VehicleOutcome>,
    pub report: SafetyReport,
}

impl PlanResult {
    pub fn all_feasible(&self) -> bool {
        self.vehicles.iter().all(VehicleOutcome::is_feasible)
    }

    pub fn trajectories(&self) -> Vec<Option<&Trajectory>> {
        self.vehicles.iter().map(|v| v.trajectory.as_ref()).collect()
    }
}

/// Handed to the observer after each vehicle's backward solve.
pub struct PlanStage<'a> {
    /// Position in priority order, from 0.
    pub index: usize,
    pub vehicle: &'a VehicleSpec,
    pub solution: &'a ReachAvoidSolution,
    pub constraint: &'a AvoidConstraint,
    pub committed: &'a [Trajectory],
}

/// Plans every vehicle in priority order; see [`plan_all_with`].
pub fn plan_all(scenario: &Scenario) -> Result<PlanResult> {
    plan_all_with(scenario, &mut |_| {})
}

/// Sequential priority planning.
///
/// For each vehicle: build its target and its avoid constraint from the
/// static obstacles and every trajectory committed so far, solve backward
/// from the scheduled arrival until the start state enters the reach-avoid
/// set, take the latest start time, synthesize the trajectory departing then,
/// and commit it. Vehicles that cannot be planned are reported and induce no
/// obstacle for later ones. `observer` sees each solution before it is
/// dropped.
pub fn plan_all_with(scenario: &Scenario, observer: &mut dyn FnMut(&PlanStage<'_>)) -> Result<PlanResult> {
    scenario.validate()?;
    let mut committed: Vec<Trajectory> = Vec::new();
    let mut outcomes = Vec::with_capacity(scenario.vehicles.len());

    for (index, vehicle) in scenario.vehicles.iter().enumerate() {
        let model = vehicle.dynamics()?;
        let target = StaticField(vehicle.target.field(&scenario.grid)?);
        let constraint = build_constraint(scenario, &committed, model.position_dim())?;

        let mut numerics = scenario.numerics;
        let needed = vehicle.scheduled_arrival - vehicle.earliest_start;
        if needed.is_finite() && needed > 0.0 {
            numerics.horizon_cap = numerics.horizon_cap.min(needed);
        }
        let solution = solve(
            model.clone(),
            scenario.grid.clone(),
            &target,
            &constraint,
            vehicle.scheduled_arrival,
            &numerics,
            &StopRule::reach(&vehicle.x0),
        )?;
        observer(&PlanStage { index, vehicle, solution: &solution, constraint: &constraint, committed: &committed });

        let timestep = solution.timestep();
        let lst = latest_start_time(&solution, &vehicle.x0)?;
        let status = match lst {
            None => VehicleStatus::Unreachable,
            Some(t) if t < vehicle.earliest_start => VehicleStatus::StartsTooEarly,
            Some(_) => VehicleStatus::Planned,
        };
        let mut outcome =
            VehicleOutcome { priority: vehicle.priority, latest_start: lst, trajectory: None, status, timestep };

        if let (VehicleStatus::Planned, Some(depart)) = (&outcome.status, lst) {
            match synthesize_trajectory(&solution, &target, &vehicle.x0, depart, timestep) {
                Ok(tr) => {
                    committed.push(tr.clone());
                    outcome.trajectory = Some(tr);
                }
                Err(Error::SynthesisFailed { reason, .. }) => {
                    outcome.status = VehicleStatus::SynthesisFailed(reason);
                }
                Err(e) => return Err(e),
            }
        }
        outcomes.push(outcome);
    }

    let check_dt = outcomes.iter().map(|o| o.timestep).fold(f64::INFINITY, f64::min) / 2.0;
    let mut result = PlanResult { vehicles: outcomes, report: SafetyReport::default() };
    result.report = verify_plan(&result, scenario, check_dt);
    Ok(result)
}
