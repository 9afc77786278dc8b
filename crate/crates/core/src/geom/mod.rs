//! Grids, node-valued scalar fields and implicit-surface shapes.
//!
//! Regions are encoded as sub-zero level sets. Union, intersection and
//! complement map to pointwise min, max and negation.

mod field;
mod grid;
mod shape;

pub use field::{field_complement, field_intersect, field_union, interpolate, ScalarField};
pub use grid::{make_grid, Axis, Grid, MAX_DIMS};
pub(crate) use shape::extrude;
pub use shape::{extruded_field, signed_distance, Shape};
