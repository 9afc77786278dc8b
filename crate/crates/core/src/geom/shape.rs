use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::field::ScalarField;
use super::grid::Grid;
use crate::error::{Error, Result};

/// A region in the position subspace (the leading `dim()` state coordinates).
///
/// Scenario files use 2-D shapes for planar vehicles; 1-D shapes (intervals)
/// serve the single-integrator test model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Shape {
    Circle { center: Vec<f64>, radius: f64 },
    #[serde(alias = "rect")]
    Rectangle { lower: Vec<f64>, upper: Vec<f64> },
}

impl Shape {
    pub fn circle(center: &[f64], radius: f64) -> Result<Self> {
        let s = Shape::Circle { center: center.to_vec(), radius };
        s.validate()?;
        Ok(s)
    }

    pub fn rectangle(lower: &[f64], upper: &[f64]) -> Result<Self> {
        let s = Shape::Rectangle { lower: lower.to_vec(), upper: upper.to_vec() };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Shape::Circle { center, radius } => {
                if center.is_empty() || center.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidShape("circle center must be a finite vector".into()));
                }
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(Error::InvalidShape(format!("circle radius {radius} must be positive")));
                }
            }
            Shape::Rectangle { lower, upper } => {
                if lower.is_empty() || lower.len() != upper.len() {
                    return Err(Error::InvalidShape("rectangle corners must have equal, nonzero length".into()));
                }
                if lower.iter().zip(upper).any(|(l, u)| !(u > l && l.is_finite() && u.is_finite())) {
                    return Err(Error::InvalidShape(format!(
                        "rectangle upper corner {upper:?} must strictly dominate lower corner {lower:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Number of position coordinates the shape constrains.
    pub fn dim(&self) -> usize {
        match self {
            Shape::Circle { center, .. } => center.len(),
            Shape::Rectangle { lower, .. } => lower.len(),
        }
    }

    /// Exact Euclidean signed distance from `p` (position coordinates) to the
    /// shape boundary; negative inside.
    pub fn distance(&self, p: &[f64]) -> f64 {
        match self {
            Shape::Circle { center, radius } => {
                let d2: f64 = center.iter().zip(p).map(|(c, x)| (x - c).powi(2)).sum();
                d2.sqrt() - radius
            }
            Shape::Rectangle { lower, upper } => {
                let mut outside = 0.0;
                let mut inside = f64::NEG_INFINITY;
                for ((l, u), x) in lower.iter().zip(upper).zip(p) {
                    let half = 0.5 * (u - l);
                    let q = (x - 0.5 * (u + l)).abs() - half;
                    outside += q.max(0.0).powi(2);
                    inside = inside.max(q);
                }
                outside.sqrt() + inside.min(0.0)
            }
        }
    }
}

/// Samples `f` on the leading `k` coordinates and extends it as a cylinder
/// along the remaining dimensions.
pub fn extruded_field<F>(grid: &Arc<Grid>, k: usize, f: F) -> Result<ScalarField>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if k == 0 || k > grid.ndim() {
        return Err(Error::DimensionMismatch { expected: grid.ndim(), got: k });
    }
    let lead = Arc::new(grid.leading(k)?);
    let base = ScalarField::from_fn(lead, f);
    Ok(extrude(base.values(), grid, k))
}

/// Broadcasts values on the leading-`k` subgrid to every node of `grid`.
pub(crate) fn extrude(lead_values: &[f64], grid: &Arc<Grid>, k: usize) -> ScalarField {
    let block = grid.strides()[k - 1];
    let mut values = Vec::with_capacity(grid.len());
    for &v in lead_values {
        values.extend(std::iter::repeat_n(v, block));
    }
    ScalarField::from_raw(grid.clone(), values)
}

/// Signed distance to `shape` at every node, constant along non-position dims.
pub fn signed_distance(shape: &Shape, grid: &Arc<Grid>) -> Result<ScalarField> {
    shape.validate()?;
    let k = shape.dim();
    if k > grid.ndim() {
        return Err(Error::DimensionMismatch { expected: grid.ndim(), got: k });
    }
    extruded_field(grid, k, |p| shape.distance(p))
}
