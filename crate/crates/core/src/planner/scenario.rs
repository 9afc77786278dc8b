use std::f64::consts::PI;
use std::sync::Arc;

use crate::dynamics::{model_from_name, Dynamics, ModelParams};
use crate::error::{Error, Result};
use crate::geom::{extruded_field, Grid, ScalarField, Shape};
use crate::numerics::NumericsConfig;

/// Where a vehicle must end up.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetSpec {
    pub shape: Shape,
    /// Experimental: restricts the heading (state coordinate 2) to the arc
    /// `[lo, hi]` (radians, counter-clockwise from `lo`).
    pub heading: Option<(f64, f64)>,
}

impl TargetSpec {
    pub fn position(shape: Shape) -> Self {
        Self { shape, heading: None }
    }

    /// Implicit surface function of the target on `grid`.
    pub fn field(&self, grid: &Arc<Grid>) -> Result<ScalarField> {
        let k = self.shape.dim();
        match self.heading {
            None => extruded_field(grid, k, |p| self.shape.distance(p)),
            Some((lo, hi)) => {
                if grid.ndim() <= k {
                    return Err(Error::InvalidScenario("heading target needs a heading dimension".into()));
                }
                Ok(ScalarField::from_fn(grid.clone(), |x| {
                    self.shape.distance(&x[..k]).max(arc_distance(x[k], lo, hi))
                }))
            }
        }
    }
}

/// Signed angular distance from `theta` to the arc running counter-clockwise
/// from `lo` to `hi`; negative inside.
fn arc_distance(theta: f64, lo: f64, hi: f64) -> f64 {
    let tau = 2.0 * PI;
    let width = (hi - lo).rem_euclid(tau);
    let s = (theta - lo).rem_euclid(tau);
    if s <= width {
        -(s.min(width - s))
    } else {
        (s - width).min(tau - s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VehicleSpec {
    /// Registry name of the dynamics model.
    pub model: String,
    /// Forward speed (Dubins) or speed bound (integrator).
    pub speed: f64,
    pub max_turn_rate: Option<f64>,
    pub x0: Vec<f64>,
    /// Earliest start time.
    pub earliest_start: f64,
    /// Scheduled arrival time; the backward solve starts here.
    pub scheduled_arrival: f64,
    pub target: TargetSpec,
    /// 1 is planned first.
    pub priority: usize,
}

impl VehicleSpec {
    pub fn dynamics(&self) -> Result<Arc<dyn Dynamics>> {
        let params = ModelParams { speed: self.speed, max_turn_rate: self.max_turn_rate };
        Ok(Arc::from(model_from_name(&self.model, params)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlanOptions {
    /// Arrived vehicles keep occupying their final position.
    pub post_arrival_obstacle: bool,
}

impl Default for PlanOptions {
    fn default() -> Self {
        Self { post_arrival_obstacle: true }
    }
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub grid: Arc<Grid>,
    pub obstacles: Vec<Shape>,
    /// Sorted by priority, highest first.
    pub vehicles: Vec<VehicleSpec>,
    pub danger_radius: f64,
    pub numerics: NumericsConfig,
    pub options: PlanOptions,
}

impl Scenario {
    /// Sorts vehicles by priority and checks cross-field invariants.
    pub fn new(
        grid: Arc<Grid>,
        obstacles: Vec<Shape>,
        mut vehicles: Vec<VehicleSpec>,
        danger_radius: f64,
        numerics: NumericsConfig,
        options: PlanOptions,
    ) -> Result<Self> {
        vehicles.sort_by_key(|v| v.priority);
        let s = Self { grid, obstacles, vehicles, danger_radius, numerics, options };
        s.validate()?;
        Ok(s)
    }

    /// Signed distance to the union of static obstacles at a position.
    pub fn obstacle_distance(&self, p: &[f64]) -> Option<f64> {
        self.obstacles.iter().map(|o| o.distance(p)).reduce(f64::min)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidScenario(m));
        if !(self.danger_radius > 0.0 && self.danger_radius.is_finite()) {
            return bad(format!("danger radius {} must be positive", self.danger_radius));
        }
        self.numerics.validate()?;
        for (i, v) in self.vehicles.iter().enumerate() {
            if v.priority != i + 1 {
                return bad(format!("vehicle priorities must be 1..{} without gaps", self.vehicles.len()));
            }
            let model = v.dynamics()?;
            if model.state_dim() != self.grid.ndim() {
                return bad(format!(
                    "vehicle {} has a {}-dimensional state but the grid has {} dimensions",
                    v.priority,
                    model.state_dim(),
                    self.grid.ndim()
                ));
            }
            if v.x0.len() != model.state_dim() {
                return bad(format!("vehicle {} initial state has wrong length", v.priority));
            }
            if v.earliest_start > v.scheduled_arrival {
                return bad(format!("vehicle {} earliest start is after its scheduled arrival", v.priority));
            }
            v.target.shape.validate()?;
            if v.target.shape.dim() != model.position_dim() {
                return bad(format!("vehicle {} target dimension does not match its position", v.priority));
            }
            let k = model.position_dim();
            for (d, a) in self.grid.axes().iter().enumerate() {
                if !a.periodic && (v.x0[d] < a.lower || v.x0[d] > a.upper) {
                    return bad(format!("vehicle {} starts outside the grid", v.priority));
                }
            }
            if self.obstacle_distance(&v.x0[..k]).is_some_and(|d| d <= 0.0) {
                return bad(format!("vehicle {} starts inside a static obstacle", v.priority));
            }
        }
        for o in &self.obstacles {
            o.validate()?;
            if o.dim() > self.grid.ndim() {
                return bad("obstacle has more dimensions than the grid".into());
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arc_distance_signs() {
        assert!((arc_distance(0.5, 0.0, 1.0) + 0.5).abs() < 1e-12);
        assert!((arc_distance(1.2, 0.0, 1.0) - 0.2).abs() < 1e-12);
        // arc crossing zero
        assert!((arc_distance(0.1, 2.0 * PI - 0.2, 0.2) + 0.1).abs() < 1e-12);
        assert!((arc_distance(PI, 2.0 * PI - 0.2, 0.2) - (PI - 0.2)).abs() < 1e-12);
    }
}
