//! Finite-difference machinery for the backward value-function solve.

mod config;
mod derivatives;
mod scheme;

pub use config::{NumericsConfig, SchemeOrder};
pub use derivatives::{one_sided_derivatives, DerivativePair};
pub use scheme::{cfl_timestep, lax_friedrichs_hamiltonian, vi_backward_step};
