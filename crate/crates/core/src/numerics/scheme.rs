use std::sync::Arc;

use rayon::prelude::*;

use super::derivatives::DerivativePair;
use crate::error::{Error, Result};
use crate::geom::{Grid, ScalarField, MAX_DIMS};

/// Lax-Friedrichs numerical Hamiltonian:
/// `H(x, (p- + p+)/2) - sum_d alpha_d (p+_d - p-_d) / 2`.
///
/// `derivs` must hold one pair per grid dimension, in any order.
pub fn lax_friedrichs_hamiltonian<H>(
    hamiltonian: H,
    derivs: &[DerivativePair],
    alphas: &[f64],
    grid: &Arc<Grid>,
) -> Result<ScalarField>
where
    H: Fn(&[f64], &[f64]) -> f64 + Sync,
{
    let n = grid.ndim();
    if alphas.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: alphas.len() });
    }
    let mut by_dim: [Option<&DerivativePair>; MAX_DIMS] = [None; MAX_DIMS];
    for pair in derivs {
        if pair.dim < n {
            by_dim[pair.dim] = Some(pair);
        }
    }
    let mut lefts: [&[f64]; MAX_DIMS] = [&[]; MAX_DIMS];
    let mut rights: [&[f64]; MAX_DIMS] = [&[]; MAX_DIMS];
    for d in 0..n {
        let pair = by_dim[d].ok_or(Error::MissingDerivative(d))?;
        if **pair.left.grid() != **grid || **pair.right.grid() != **grid {
            return Err(Error::GridMismatch);
        }
        lefts[d] = pair.left.values();
        rights[d] = pair.right.values();
    }

    let values = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let mut x = [0.0; MAX_DIMS];
            let mut p = [0.0; MAX_DIMS];
            grid.coords_into(idx, &mut x);
            let mut dissipation = 0.0;
            for d in 0..n {
                let (l, r) = (lefts[d][idx], rights[d][idx]);
                p[d] = 0.5 * (l + r);
                dissipation += alphas[d] * 0.5 * (r - l);
            }
            hamiltonian(&x[..n], &p[..n]) - dissipation
        })
        .collect();
    Ok(ScalarField::from_raw(grid.clone(), values))
}

/// Largest stable explicit step, scaled by `cfl_factor`:
/// `cfl_factor / sum_d (alpha_d / dx_d)`.
pub fn cfl_timestep(alphas: &[f64], grid: &Grid, cfl_factor: f64) -> Result<f64> {
    if alphas.len() != grid.ndim() {
        return Err(Error::DimensionMismatch { expected: grid.ndim(), got: alphas.len() });
    }
    if alphas.iter().any(|a| *a < 0.0 || !a.is_finite()) {
        return Err(Error::InvalidConfig(format!("dissipation bounds {alphas:?} must be nonnegative")));
    }
    let rate: f64 = alphas.iter().zip(grid.axes()).map(|(a, ax)| a / ax.spacing()).sum();
    if rate == 0.0 {
        return Err(Error::ZeroDissipation);
    }
    Ok(cfl_factor / rate)
}

#[inline]
fn clamp_obstacles(value: f64, target: f64, constraint: f64) -> f64 {
    constraint.max(target.min(value))
}

/// One backward step of the double-obstacle variational inequality.
///
/// `numerical_hamiltonian` evaluates the right-hand side `H^` of the
/// reversed-time equation `V_s + H^ = 0` (with `s = -t`). The update runs
/// two-stage TVD Runge-Kutta and clamps every stage as
/// `max(g, min(l, .))`, so the result always satisfies
/// `g <= V_new <= max(l, g)`. `target` and `constraint` are `l` and `g` at the
/// step's destination time `time`.
pub fn vi_backward_step<F>(
    value: &ScalarField,
    target: &ScalarField,
    constraint: &ScalarField,
    numerical_hamiltonian: F,
    dt: f64,
    time: f64,
) -> Result<ScalarField>
where
    F: Fn(&ScalarField) -> Result<ScalarField>,
{
    if !value.same_grid(target) || !value.same_grid(constraint) {
        return Err(Error::GridMismatch);
    }
    let l = target.values();
    let g = constraint.values();

    // clamping would launder NaN (f64::max ignores it), so check before
    let finite = |h: &ScalarField| h.values().par_iter().all(|v| v.is_finite());
    let h0 = numerical_hamiltonian(value)?;
    if !finite(&h0) {
        return Err(Error::NonFinite { time });
    }
    let stage: Vec<f64> = value
        .values()
        .par_iter()
        .zip(h0.values())
        .enumerate()
        .map(|(i, (v, h))| clamp_obstacles(v - dt * h, l[i], g[i]))
        .collect();
    let stage = ScalarField::from_raw(value.grid().clone(), stage);

    let h1 = numerical_hamiltonian(&stage)?;
    if !finite(&h1) {
        return Err(Error::NonFinite { time });
    }
    let next: Vec<f64> = value
        .values()
        .par_iter()
        .zip(stage.values())
        .zip(h1.values())
        .enumerate()
        .map(|(i, ((v, s), h))| clamp_obstacles(0.5 * v + 0.5 * (s - dt * h), l[i], g[i]))
        .collect();

    if next.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { time });
    }
    debug_assert!(next
        .iter()
        .zip(l.iter().zip(g))
        .all(|(v, (l, g))| *v >= *g && *v <= l.max(*g)));

    Ok(ScalarField::from_raw(value.grid().clone(), next).with_time(time))
}
