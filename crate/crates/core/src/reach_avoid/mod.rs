//! Single-vehicle reach-avoid analysis: the backward value-function solve,
//! latest-start-time extraction and forward trajectory synthesis.

mod fields;
mod solve;
mod synthesis;
mod trajectory;

pub use fields::{FieldTable, FnField, StaticField, TimeVaryingField};
pub use solve::{solve, ReachAvoidSolution, SolveStatus, StopRule};
pub use synthesis::{gradient_at, latest_start_time, synthesize_trajectory};
pub use trajectory::{Trajectory, TrajectorySample};
