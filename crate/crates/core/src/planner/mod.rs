//! Sequential priority planning: each vehicle is solved in turn, treating
//! the trajectories already committed by higher-priority vehicles as moving
//! obstacles.

mod obstacles;
mod plan;
mod scenario;
mod verify;

pub use obstacles::{build_constraint, induced_obstacle_field, AvoidConstraint, MovingObstacle, FAR};
pub use plan::{plan_all, plan_all_with, PlanResult, PlanStage, VehicleOutcome, VehicleStatus};
pub use scenario::{PlanOptions, Scenario, TargetSpec, VehicleSpec};
pub use verify::{verify_plan, verify_trajectories, PairSeparation, SafetyReport, VehicleCheck};
