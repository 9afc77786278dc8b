use std::sync::Arc;

use super::fields::TimeVaryingField;
use crate::dynamics::Dynamics;
use crate::error::{Error, Result};
use crate::geom::{Grid, ScalarField};
use crate::numerics::{
    cfl_timestep, lax_friedrichs_hamiltonian, one_sided_derivatives, vi_backward_step, NumericsConfig,
};

/// When a backward solve stops, besides hitting the horizon cap.
#[derive(Clone, Debug, PartialEq)]
pub enum StopRule {
    /// Run the full horizon.
    Horizon,
    /// Stop `extra_steps` steps after `state` first enters the reach-avoid set.
    Reach { state: Vec<f64>, extra_steps: usize },
    /// Stop once a step changes no node by `tol` or more. Only honored when
    /// both `l` and `g` are time-invariant.
    Converged { tol: f64 },
}

impl StopRule {
    pub fn reach(state: &[f64]) -> Self {
        StopRule::Reach { state: state.to_vec(), extra_steps: 2 }
    }

    pub fn converged() -> Self {
        StopRule::Converged { tol: 1e-6 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    HorizonReached,
    QueryReached,
    Converged,
    /// The query state never entered the reach-avoid set within the horizon.
    InfeasibleWithinHorizon,
}

/// Backward-ordered value-function slices `V(., t)`, first at `terminal_time`.
#[derive(Clone, Debug)]
pub struct ReachAvoidSolution {
    slices: Vec<ScalarField>,
    grid: Arc<Grid>,
    model: Arc<dyn Dynamics>,
    terminal_time: f64,
    timestep: f64,
    status: SolveStatus,
}

impl ReachAvoidSolution {
    /// Slices in strictly decreasing time; each carries its time stamp.
    pub fn slices(&self) -> &[ScalarField] {
        &self.slices
    }

    pub fn slice_time(&self, k: usize) -> f64 {
        self.slices[k].time().expect("solver stamps every slice")
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.slices.len()).map(|k| self.slice_time(k)).collect()
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn model(&self) -> &Arc<dyn Dynamics> {
        &self.model
    }

    pub fn terminal_time(&self) -> f64 {
        self.terminal_time
    }

    pub fn earliest_time(&self) -> f64 {
        self.slice_time(self.slices.len() - 1)
    }

    /// The CFL step used by the solve.
    pub fn timestep(&self) -> f64 {
        self.timestep
    }

    pub fn status(&self) -> SolveStatus {
        self.status
    }

    /// The stored slice whose time is closest to `t`.
    pub fn nearest_slice(&self, t: f64) -> &ScalarField {
        // times decrease; find first index with time <= t
        let k = self.slices.partition_point(|s| s.time().unwrap() > t);
        if k == 0 {
            return &self.slices[0];
        }
        if k == self.slices.len() {
            return &self.slices[k - 1];
        }
        let (later, earlier) = (&self.slices[k - 1], &self.slices[k]);
        if later.time().unwrap() - t <= t - earlier.time().unwrap() {
            later
        } else {
            earlier
        }
    }
}

fn check_on_grid(f: &ScalarField, grid: &Arc<Grid>) -> Result<()> {
    if **f.grid() != **grid {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

/// Solves the double-obstacle variational inequality backward from
/// `terminal_time`, starting from `V = max(l, g)`.
///
/// Every `slice_stride`-th step is stored, plus the last one. The final step
/// is shortened so a horizon-limited solve ends exactly at
/// `terminal_time - horizon_cap`.
pub fn solve(
    model: Arc<dyn Dynamics>,
    grid: Arc<Grid>,
    target: &dyn TimeVaryingField,
    constraint: &dyn TimeVaryingField,
    terminal_time: f64,
    config: &NumericsConfig,
    stop: &StopRule,
) -> Result<ReachAvoidSolution> {
    config.validate()?;
    if grid.ndim() != model.state_dim() {
        return Err(Error::DimensionMismatch { expected: model.state_dim(), got: grid.ndim() });
    }
    let alphas = model.dissipation_bounds(&grid)?;
    let dt = cfl_timestep(&alphas, &grid, config.cfl_factor)?;
    let order = config.scheme_order;
    for d in 0..grid.ndim() {
        if grid.axis(d).count < order.min_nodes() {
            return Err(Error::InsufficientNodes { dim: d, count: grid.axis(d).count, needed: order.min_nodes() });
        }
    }

    let n = grid.ndim();
    let reversed = |x: &[f64], p: &[f64]| -model.hamiltonian(x, p);
    let numerical_hamiltonian = |f: &ScalarField| -> Result<ScalarField> {
        let pairs = (0..n).map(|d| one_sided_derivatives(f, d, order)).collect::<Result<Vec<_>>>()?;
        lax_friedrichs_hamiltonian(reversed, &pairs, &alphas, &grid)
    };

    let l0 = target.at(terminal_time)?;
    let g0 = constraint.at(terminal_time)?;
    check_on_grid(&l0, &grid)?;
    check_on_grid(&g0, &grid)?;
    let mut value = l0.intersect(&g0)?.with_time(terminal_time);
    drop((l0, g0));

    let (query, extra_steps) = match stop {
        StopRule::Reach { state, extra_steps } => {
            // surfaces out-of-bounds queries before any work is done
            value.interpolate(state)?;
            (Some(state.as_slice()), *extra_steps)
        }
        _ => (None, 0),
    };
    let converge_tol = match stop {
        StopRule::Converged { tol } if target.is_static() && constraint.is_static() => Some(*tol),
        _ => None,
    };

    let horizon_end = terminal_time - config.horizon_cap;
    let mut slices = vec![value.clone()];
    let mut t = terminal_time;
    let mut step = 0usize;
    let mut steps_since_entry: Option<usize> = match query {
        Some(q) if value.interpolate(q)? <= 0.0 => Some(0),
        _ => None,
    };
    let mut status = SolveStatus::HorizonReached;

    loop {
        if let Some(k) = steps_since_entry {
            if k >= extra_steps {
                status = SolveStatus::QueryReached;
                break;
            }
        }
        let remaining = t - horizon_end;
        if remaining <= 1e-12 * dt {
            break;
        }
        let h = dt.min(remaining);
        // land exactly on the horizon when the last step is short
        let t_next = if h < dt { horizon_end } else { t - h };
        let l = target.at(t_next)?;
        let g = constraint.at(t_next)?;
        let next = vi_backward_step(&value, &l, &g, numerical_hamiltonian, h, t_next)?;
        step += 1;

        let converged = converge_tol.is_some_and(|tol| {
            next.values().iter().zip(value.values()).all(|(a, b)| (a - b).abs() < tol)
        });
        value = next;
        t = t_next;

        if let Some(q) = query {
            match steps_since_entry.as_mut() {
                Some(k) => *k += 1,
                None if value.interpolate(q)? <= 0.0 => steps_since_entry = Some(0),
                None => {}
            }
        }

        let done = converged
            || t - horizon_end <= 1e-12 * dt
            || steps_since_entry.is_some_and(|k| k >= extra_steps);
        if step.is_multiple_of(config.slice_stride) || done {
            slices.push(value.clone());
        }
        if converged {
            status = SolveStatus::Converged;
            break;
        }
    }

    if query.is_some() && status != SolveStatus::QueryReached {
        status = if steps_since_entry.is_some() {
            SolveStatus::QueryReached
        } else {
            SolveStatus::InfeasibleWithinHorizon
        };
    }

    Ok(ReachAvoidSolution { slices, grid, model, terminal_time, timestep: dt, status })
}
