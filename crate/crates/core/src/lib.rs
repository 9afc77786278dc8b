//! Reach-avoid analysis with time-varying targets and constraints, and a
//! sequential priority planner built on top of it.
//!
//! Each vehicle's value function solves a double-obstacle Hamilton-Jacobi
//! variational inequality backward from its scheduled arrival time. Vehicles
//! are planned one at a time in priority order; committed trajectories become
//! moving obstacles for everyone after them.

pub mod dynamics;
pub mod error;
pub mod cli;
pub mod geom;
pub mod io;
pub mod numerics;
pub mod planner;
pub mod reach_avoid;

pub use error::{Error, Result};
