use super::fields::TimeVaryingField;
use super::solve::ReachAvoidSolution;
use super::trajectory::{Trajectory, TrajectorySample};
use crate::dynamics::Dynamics;
use crate::error::{Error, Result};
use crate::geom::{Grid, ScalarField};

/// Latest stored time at which `x0` lies in the reach-avoid set, refined by
/// linear interpolation of `V(x0, .)` between the bracketing slices.
/// `None` when no slice contains `x0`.
pub fn latest_start_time(solution: &ReachAvoidSolution, x0: &[f64]) -> Result<Option<f64>> {
    let slices = solution.slices();
    if slices.is_empty() {
        return Err(Error::EmptySolution);
    }
    let mut later: Option<(f64, f64)> = None;
    for (k, slice) in slices.iter().enumerate() {
        let v = slice.interpolate(x0)?;
        let t = solution.slice_time(k);
        if v <= 0.0 {
            return Ok(Some(match later {
                None => t,
                Some((t1, v1)) => t + (t1 - t) * (-v) / (v1 - v),
            }));
        }
        later = Some((t, v));
    }
    Ok(None)
}

/// Central-difference gradient of `field` at an off-grid point. Stencil
/// points are pulled back inside non-periodic faces.
pub fn gradient_at(field: &ScalarField, point: &[f64]) -> Result<Vec<f64>> {
    let grid: &Grid = field.grid();
    let mut grad = vec![0.0; grid.ndim()];
    let mut probe = point.to_vec();
    for (d, g) in grad.iter_mut().enumerate() {
        let a = grid.axis(d);
        let h = a.spacing();
        let (mut lo, mut hi) = (point[d] - h, point[d] + h);
        if !a.periodic {
            lo = lo.max(a.lower);
            hi = hi.min(a.upper);
        }
        probe[d] = hi;
        let vh = field.interpolate(&probe)?;
        probe[d] = lo;
        let vl = field.interpolate(&probe)?;
        probe[d] = point[d];
        *g = (vh - vl) / (hi - lo);
    }
    Ok(grad)
}

fn rk4(model: &dyn Dynamics, x: &[f64], u: &[f64], t: f64, h: f64) -> Result<Vec<f64>> {
    let shifted = |base: &[f64], k: &[f64], s: f64| -> Vec<f64> { base.iter().zip(k).map(|(a, b)| a + s * b).collect() };
    let k1 = model.flow(x, u, t)?;
    let k2 = model.flow(&shifted(x, &k1, 0.5 * h), u, t + 0.5 * h)?;
    let k3 = model.flow(&shifted(x, &k2, 0.5 * h), u, t + 0.5 * h)?;
    let k4 = model.flow(&shifted(x, &k3, h), u, t + h)?;
    Ok((0..x.len()).map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect())
}

fn in_bounds(grid: &Grid, x: &mut [f64]) -> bool {
    for (d, a) in grid.axes().iter().enumerate() {
        if a.periodic {
            x[d] = a.wrap(x[d]);
        } else if x[d] < a.lower || x[d] > a.upper {
            return false;
        }
    }
    true
}

/// Forward simulation under the value-function control law.
///
/// Each step takes the costate from the stored slice nearest in time,
/// picks the control minimizing the Hamiltonian, and integrates the flow
/// with RK4 holding that control. Stops at the first sample inside the
/// target (`l <= 0`); failing to arrive by the terminal time is an error.
pub fn synthesize_trajectory(
    solution: &ReachAvoidSolution,
    target: &dyn TimeVaryingField,
    x0: &[f64],
    depart: f64,
    sim_dt: f64,
) -> Result<Trajectory> {
    if solution.slices().is_empty() {
        return Err(Error::EmptySolution);
    }
    if !(sim_dt > 0.0 && sim_dt.is_finite()) {
        return Err(Error::InvalidConfig(format!("simulation step {sim_dt} must be positive")));
    }
    let model = solution.model().as_ref();
    let grid = solution.grid().clone();
    let tf = solution.terminal_time();

    let mut x = x0.to_vec();
    if !in_bounds(&grid, &mut x) {
        return Err(Error::OutOfBounds { point: x0.to_vec(), dim: 0 });
    }
    let slack = grid.cell_diagonal(grid.ndim());
    let v_start = solution.nearest_slice(depart).interpolate(&x)?;
    if v_start > slack {
        return Err(Error::SynthesisFailed {
            reason: format!("departure state has V = {v_start:.4} at t = {depart}; not in the reach-avoid set"),
            values_along_path: vec![v_start],
        });
    }

    let zero_control = vec![0.0; model.control_dim()];
    let inside = |x: &[f64], t: f64| -> Result<bool> { Ok(target.at(t)?.interpolate(x)? <= 0.0) };
    if inside(&x, depart)? {
        return Ok(Trajectory {
            samples: vec![TrajectorySample { t: depart, state: x, control: zero_control }],
            departure_time: depart,
            arrival_time: Some(depart),
        });
    }

    let mut samples = Vec::new();
    let mut values = vec![v_start];
    let mut t = depart;
    let mut k = 0u64;
    loop {
        let slice = solution.nearest_slice(t);
        let p = gradient_at(slice, &x)?;
        let u = model.optimal_control(&x, &p);
        let t_next = (depart + (k + 1) as f64 * sim_dt).min(tf);
        let mut next = rk4(model, &x, &u, t, t_next - t)?;
        samples.push(TrajectorySample { t, state: x, control: u.clone() });
        if !in_bounds(&grid, &mut next) {
            return Err(Error::SynthesisFailed {
                reason: format!("trajectory left the grid at t = {t_next:.4}"),
                values_along_path: values,
            });
        }
        x = next;
        t = t_next;
        k += 1;
        values.push(solution.nearest_slice(t).interpolate(&x)?);

        if inside(&x, t)? {
            samples.push(TrajectorySample { t, state: x, control: u });
            return Ok(Trajectory { samples, departure_time: depart, arrival_time: Some(t) });
        }
        if t >= tf {
            return Err(Error::SynthesisFailed {
                reason: format!("target not reached by terminal time {tf}"),
                values_along_path: values,
            });
        }
    }
}
