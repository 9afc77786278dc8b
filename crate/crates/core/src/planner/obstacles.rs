use std::borrow::Cow;
use std::sync::Arc;

use rayon::prelude::*;

use super::scenario::Scenario;
use crate::error::{Error, Result};
use crate::geom::{extrude, Grid, ScalarField};
use crate::reach_avoid::{TimeVaryingField, Trajectory};

/// Stand-in distance for "no obstacle anywhere".
pub const FAR: f64 = 1e12;

/// A higher-priority vehicle's committed motion, as seen by later vehicles.
#[derive(Clone, Debug)]
pub struct MovingObstacle {
    pub trajectory: Trajectory,
    /// Keep the danger zone at the final position after arrival.
    pub persists_after_arrival: bool,
}

impl MovingObstacle {
    /// Center of the danger zone at `t`, or `None` once the vehicle has left
    /// the airspace.
    pub fn center_at(&self, t: f64, position_dim: usize) -> Option<Vec<f64>> {
        if !self.persists_after_arrival && t > self.trajectory.end_time() {
            return None;
        }
        Some(self.trajectory.position_at(t, position_dim))
    }
}

fn check_position_dim(grid: &Grid, k: usize) -> Result<()> {
    if k == 0 || k > grid.ndim() {
        return Err(Error::DimensionMismatch { expected: grid.ndim(), got: k });
    }
    Ok(())
}

/// Signed distance to the union of danger disks of radius `danger_radius`
/// around each committed vehicle's position at `t`, on the leading
/// `position_dim` coordinates. `FAR` where nothing is committed.
fn induced_lead_values(
    centers: &[Vec<f64>],
    danger_radius: f64,
    lead: &Grid,
) -> Vec<f64> {
    let k = lead.ndim();
    (0..lead.len())
        .into_par_iter()
        .map(|idx| {
            let mut p = [0.0; crate::geom::MAX_DIMS];
            lead.coords_into(idx, &mut p);
            centers
                .iter()
                .map(|c| c.iter().zip(&p[..k]).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt() - danger_radius)
                .fold(FAR, f64::min)
        })
        .collect()
}

/// Induced obstacle field at time `t`: distance to the nearest danger disk,
/// extended along non-position dimensions. Vehicles are parked at their
/// first sample before departure and at their last sample after arrival.
pub fn induced_obstacle_field(
    committed: &[Trajectory],
    danger_radius: f64,
    t: f64,
    grid: &Arc<Grid>,
    position_dim: usize,
) -> Result<ScalarField> {
    check_position_dim(grid, position_dim)?;
    let centers: Vec<Vec<f64>> = committed.iter().map(|tr| tr.position_at(t, position_dim)).collect();
    let lead = grid.leading(position_dim)?;
    Ok(extrude(&induced_lead_values(&centers, danger_radius, &lead), grid, position_dim).with_time(t))
}

/// Constraint `g(x, t)` for one vehicle: the negated signed distance to its
/// avoid set (static obstacles plus danger zones of committed vehicles), so
/// `g <= 0` exactly outside the avoid set.
///
/// The static part is computed once; the moving part is regenerated for
/// each queried time.
pub struct AvoidConstraint {
    grid: Arc<Grid>,
    lead: Grid,
    position_dim: usize,
    /// Distance to static obstacles on the position subgrid (`FAR` if none).
    static_distance: Vec<f64>,
    moving: Vec<MovingObstacle>,
    danger_radius: f64,
    cached_static: Option<ScalarField>,
}

impl AvoidConstraint {
    pub fn new(
        grid: Arc<Grid>,
        position_dim: usize,
        obstacles: &[crate::geom::Shape],
        moving: Vec<MovingObstacle>,
        danger_radius: f64,
    ) -> Result<Self> {
        check_position_dim(&grid, position_dim)?;
        if obstacles.iter().any(|o| o.dim() != position_dim) {
            return Err(Error::InvalidScenario("obstacle dimension does not match vehicle position".into()));
        }
        let lead = grid.leading(position_dim)?;
        let static_distance: Vec<f64> = (0..lead.len())
            .into_par_iter()
            .map(|idx| {
                let p = lead.coords(idx);
                obstacles.iter().map(|o| o.distance(&p)).fold(FAR, f64::min)
            })
            .collect();
        let cached_static = if moving.is_empty() {
            let neg: Vec<f64> = static_distance.iter().map(|d| -d).collect();
            Some(extrude(&neg, &grid, position_dim))
        } else {
            None
        };
        Ok(Self { grid, lead, position_dim, static_distance, moving, danger_radius, cached_static })
    }

    pub fn moving(&self) -> &[MovingObstacle] {
        &self.moving
    }
}

impl TimeVaryingField for AvoidConstraint {
    fn at(&self, t: f64) -> Result<Cow<'_, ScalarField>> {
        if let Some(f) = &self.cached_static {
            return Ok(Cow::Borrowed(f));
        }
        let centers: Vec<Vec<f64>> =
            self.moving.iter().filter_map(|m| m.center_at(t, self.position_dim)).collect();
        let induced = induced_lead_values(&centers, self.danger_radius, &self.lead);
        let neg: Vec<f64> = induced.iter().zip(&self.static_distance).map(|(a, b)| -a.min(*b)).collect();
        Ok(Cow::Owned(extrude(&neg, &self.grid, self.position_dim).with_time(t)))
    }

    fn is_static(&self) -> bool {
        self.moving.is_empty()
    }
}

/// Assembles the constraint for the next vehicle to plan, given the
/// trajectories already committed by higher-priority vehicles.
pub fn build_constraint(scenario: &Scenario, committed: &[Trajectory], position_dim: usize) -> Result<AvoidConstraint> {
    let moving = committed
        .iter()
        .map(|tr| MovingObstacle {
            trajectory: tr.clone(),
            persists_after_arrival: scenario.options.post_arrival_obstacle,
        })
        .collect();
    AvoidConstraint::new(scenario.grid.clone(), position_dim, &scenario.obstacles, moving, scenario.danger_radius)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::geom::{make_grid, Shape};
    use crate::reach_avoid::TrajectorySample;

    fn grid() -> Arc<Grid> {
        Arc::new(make_grid(&[(-1.0, 1.0, 41, false), (-1.0, 1.0, 41, false), (0.0, 2.0 * PI, 6, true)]).unwrap())
    }

    fn parked(x: f64, y: f64) -> Trajectory {
        Trajectory {
            samples: vec![TrajectorySample { t: 0.0, state: vec![x, y, 0.0], control: vec![0.0] }],
            departure_time: 0.0,
            arrival_time: Some(0.0),
        }
    }

    #[test]
    fn single_vehicle_disk() {
        let g = grid();
        let f = induced_obstacle_field(&[parked(0.0, 0.0)], 0.1, 0.0, &g, 2).unwrap();
        assert!(f.interpolate(&[0.05, 0.0, 1.0]).unwrap() < 0.0);
        assert!((f.interpolate(&[0.05, 0.0, 1.0]).unwrap() + 0.05).abs() < 1e-12);
    }

    #[test]
    fn empty_union_is_far() {
        let f = induced_obstacle_field(&[], 0.1, 0.0, &grid(), 2).unwrap();
        assert!(f.values().iter().all(|v| *v == FAR));
    }

    #[test]
    fn nearest_of_two_disks() {
        let g = grid();
        let f = induced_obstacle_field(&[parked(0.0, 0.0), parked(1.0, 0.0)], 0.1, 0.0, &g, 2).unwrap();
        assert!((f.interpolate(&[0.5, 0.0, 0.0]).unwrap() - 0.4).abs() < 1e-12);
    }

    #[test]
    fn constraint_encoding() {
        let g = grid();
        let rect = Shape::rectangle(&[-0.1, -0.5], &[0.1, 0.0]).unwrap();
        let c = AvoidConstraint::new(g.clone(), 2, std::slice::from_ref(&rect), vec![], 0.1).unwrap();
        assert!(c.is_static());
        let f = c.at(3.0).unwrap();
        assert!(f.interpolate(&[0.0, -0.25, 0.0]).unwrap() > 0.0);

        let moving = vec![MovingObstacle { trajectory: parked(-0.5, 0.5), persists_after_arrival: true }];
        let c = AvoidConstraint::new(g.clone(), 2, &[], moving, 0.1).unwrap();
        assert!(!c.is_static());
        // 0.15 from the vehicle: outside its zone by 0.05
        let v = c.at(0.0).unwrap().interpolate(&[-0.35, 0.5, 2.0]).unwrap();
        assert!((v + 0.05).abs() < 1e-12);

        let c = AvoidConstraint::new(g, 2, &[], vec![], 0.1).unwrap();
        assert!(c.at(0.0).unwrap().values().iter().all(|v| *v == -FAR));
    }

    #[test]
    fn departed_vehicle_can_leave_airspace() {
        let g = grid();
        let m = MovingObstacle { trajectory: parked(0.0, 0.0), persists_after_arrival: false };
        assert!(m.center_at(-1.0, 2).is_some());
        assert!(m.center_at(1.0, 2).is_none());
        let c = AvoidConstraint::new(g, 2, &[], vec![m], 0.1).unwrap();
        assert!(c.at(1.0).unwrap().values().iter().all(|v| *v == -FAR));
    }
}
