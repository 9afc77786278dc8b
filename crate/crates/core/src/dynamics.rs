//! Vehicle models: flow fields, optimized Hamiltonians and control laws.
//!
//! The Hamiltonian of every model is the pointwise minimum of `p . f(x, u)`
//! over the admissible controls, evaluated in closed form.

use std::fmt;

use crate::error::{Error, Result};
use crate::geom::Grid;

/// Slack on control-bound checks.
const CONTROL_TOL: f64 = 1e-12;

pub trait Dynamics: fmt::Debug + Send + Sync {
    /// Registry key, as written in scenario files.
    fn name(&self) -> &'static str;

    fn state_dim(&self) -> usize;

    fn control_dim(&self) -> usize;

    /// Number of leading state coordinates that are a position.
    fn position_dim(&self) -> usize;

    /// Column labels for states and controls, used by trajectory CSVs.
    fn state_labels(&self) -> &'static [&'static str];
    fn control_labels(&self) -> &'static [&'static str];

    /// State derivative. The models here are time-invariant; `t` is accepted
    /// so callers need not special-case them.
    fn flow(&self, state: &[f64], control: &[f64], t: f64) -> Result<Vec<f64>>;

    /// `min_u p . f(x, u)`.
    fn hamiltonian(&self, state: &[f64], costate: &[f64]) -> f64;

    /// A minimizer of `p . f(x, u)`.
    fn optimal_control(&self, state: &[f64], costate: &[f64]) -> Vec<f64>;

    /// Per-dimension bounds on `|dH/dp_d|` over the grid.
    fn dissipation_bounds(&self, grid: &Grid) -> Result<Vec<f64>>;

    /// Admissible control interval per control coordinate.
    fn control_bounds(&self) -> Vec<(f64, f64)>;
}

/// Sign with zero mapped to zero.
fn sign0(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn check_grid_dim(model: &dyn Dynamics, grid: &Grid) -> Result<()> {
    if grid.ndim() != model.state_dim() {
        return Err(Error::DimensionMismatch { expected: model.state_dim(), got: grid.ndim() });
    }
    Ok(())
}

/// Planar kinematic car with fixed speed and bounded turn rate.
///
/// State `(x, y, theta)`, control `omega` with `|omega| <= max_turn_rate`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DubinsCar {
    pub speed: f64,
    pub max_turn_rate: f64,
}

impl DubinsCar {
    pub fn new(speed: f64, max_turn_rate: f64) -> Result<Self> {
        if !(speed > 0.0 && speed.is_finite()) {
            return Err(Error::InvalidModel(format!("speed {speed} must be positive")));
        }
        if !(max_turn_rate > 0.0 && max_turn_rate.is_finite()) {
            return Err(Error::InvalidModel(format!("max turn rate {max_turn_rate} must be positive")));
        }
        Ok(Self { speed, max_turn_rate })
    }
}

impl Dynamics for DubinsCar {
    fn name(&self) -> &'static str {
        "dubins"
    }

    fn state_dim(&self) -> usize {
        3
    }

    fn control_dim(&self) -> usize {
        1
    }

    fn position_dim(&self) -> usize {
        2
    }

    fn state_labels(&self) -> &'static [&'static str] {
        &["x", "y", "theta"]
    }

    fn control_labels(&self) -> &'static [&'static str] {
        &["omega"]
    }

    fn flow(&self, state: &[f64], control: &[f64], _t: f64) -> Result<Vec<f64>> {
        let omega = control[0];
        if omega.abs() > self.max_turn_rate + CONTROL_TOL {
            return Err(Error::InadmissibleControl { control: control.to_vec() });
        }
        let (s, c) = state[2].sin_cos();
        Ok(vec![self.speed * c, self.speed * s, omega])
    }

    #[inline]
    fn hamiltonian(&self, state: &[f64], p: &[f64]) -> f64 {
        let (s, c) = state[2].sin_cos();
        self.speed * (p[0] * c + p[1] * s) - self.max_turn_rate * p[2].abs()
    }

    fn optimal_control(&self, _state: &[f64], p: &[f64]) -> Vec<f64> {
        // p3 == 0 leaves every omega optimal; coast straight
        vec![-self.max_turn_rate * sign0(p[2])]
    }

    fn dissipation_bounds(&self, grid: &Grid) -> Result<Vec<f64>> {
        check_grid_dim(self, grid)?;
        Ok(vec![self.speed, self.speed, self.max_turn_rate])
    }

    fn control_bounds(&self) -> Vec<(f64, f64)> {
        vec![(-self.max_turn_rate, self.max_turn_rate)]
    }
}

/// `x' = u`, `|u| <= max_speed`. Has closed-form reach sets, which makes it
/// the reference model for solver tests.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleIntegrator1D {
    pub max_speed: f64,
}

impl SingleIntegrator1D {
    pub fn new(max_speed: f64) -> Result<Self> {
        if !(max_speed > 0.0 && max_speed.is_finite()) {
            return Err(Error::InvalidModel(format!("max speed {max_speed} must be positive")));
        }
        Ok(Self { max_speed })
    }
}

impl Dynamics for SingleIntegrator1D {
    fn name(&self) -> &'static str {
        "integrator1d"
    }

    fn state_dim(&self) -> usize {
        1
    }

    fn control_dim(&self) -> usize {
        1
    }

    fn position_dim(&self) -> usize {
        1
    }

    fn state_labels(&self) -> &'static [&'static str] {
        &["x"]
    }

    fn control_labels(&self) -> &'static [&'static str] {
        &["u"]
    }

    fn flow(&self, _state: &[f64], control: &[f64], _t: f64) -> Result<Vec<f64>> {
        if control[0].abs() > self.max_speed + CONTROL_TOL {
            return Err(Error::InadmissibleControl { control: control.to_vec() });
        }
        Ok(vec![control[0]])
    }

    #[inline]
    fn hamiltonian(&self, _state: &[f64], p: &[f64]) -> f64 {
        -self.max_speed * p[0].abs()
    }

    fn optimal_control(&self, _state: &[f64], p: &[f64]) -> Vec<f64> {
        vec![-self.max_speed * sign0(p[0])]
    }

    fn dissipation_bounds(&self, grid: &Grid) -> Result<Vec<f64>> {
        check_grid_dim(self, grid)?;
        Ok(vec![self.max_speed])
    }

    fn control_bounds(&self) -> Vec<(f64, f64)> {
        vec![(-self.max_speed, self.max_speed)]
    }
}

/// Parameters a scenario can supply to any registered model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    /// Dubins forward speed, or the integrator's speed bound.
    pub speed: f64,
    pub max_turn_rate: Option<f64>,
}

pub const MODEL_NAMES: &[&str] = &["dubins", "integrator1d"];

/// Looks a model up by its registry name.
pub fn model_from_name(name: &str, params: ModelParams) -> Result<Box<dyn Dynamics>> {
    match name {
        "dubins" => {
            let w = params
                .max_turn_rate
                .ok_or_else(|| Error::InvalidModel("dubins model needs a max turn rate".into()))?;
            Ok(Box::new(DubinsCar::new(params.speed, w)?))
        }
        "integrator1d" => Ok(Box::new(SingleIntegrator1D::new(params.speed)?)),
        other => Err(Error::UnknownModel(other.to_string())),
    }
}
