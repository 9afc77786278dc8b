use std::sync::Arc;

use rayon::prelude::*;

use super::grid::{Grid, MAX_DIMS};
use crate::error::{Error, Result};

/// One value per grid node, in the grid's row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    grid: Arc<Grid>,
    values: Vec<f64>,
    time: Option<f64>,
}

impl ScalarField {
    pub fn new(grid: Arc<Grid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), got: values.len() });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid(format!("field value at node {i} is not finite")));
        }
        Ok(Self { grid, values, time: None })
    }

    /// Skips the finiteness scan. Callers guarantee the length.
    pub(crate) fn from_raw(grid: Arc<Grid>, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values, time: None }
    }

    pub fn constant(grid: Arc<Grid>, value: f64) -> Self {
        let n = grid.len();
        Self::from_raw(grid, vec![value; n])
    }

    /// Samples `f` at every node coordinate.
    pub fn from_fn<F>(grid: Arc<Grid>, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let n = grid.ndim();
        let values = (0..grid.len())
            .into_par_iter()
            .map(|idx| {
                let mut x = [0.0; MAX_DIMS];
                grid.coords_into(idx, &mut x);
                f(&x[..n])
            })
            .collect();
        Self::from_raw(grid, values)
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.time = Some(t);
        self
    }

    pub fn time(&self) -> Option<f64> {
        self.time
    }

    pub fn set_time(&mut self, t: Option<f64>) {
        self.time = t;
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn same_grid(&self, other: &ScalarField) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    fn zip_with(&self, other: &ScalarField, op: impl Fn(f64, f64) -> f64 + Sync) -> Result<Self> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        let values = self.values.par_iter().zip(&other.values).map(|(&a, &b)| op(a, b)).collect();
        Ok(Self { grid: self.grid.clone(), values, time: self.time })
    }

    /// Set union of the sub-zero regions: pointwise minimum.
    pub fn union(&self, other: &ScalarField) -> Result<Self> {
        self.zip_with(other, f64::min)
    }

    /// Set intersection: pointwise maximum.
    pub fn intersect(&self, other: &ScalarField) -> Result<Self> {
        self.zip_with(other, f64::max)
    }

    /// Set complement: pointwise negation.
    pub fn complement(&self) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| -v).collect(),
            time: self.time,
        }
    }

    /// Multilinear interpolation at `point`. Periodic coordinates wrap.
    pub fn interpolate(&self, point: &[f64]) -> Result<f64> {
        interpolate(self, point)
    }
}

pub fn field_union(a: &ScalarField, b: &ScalarField) -> Result<ScalarField> {
    a.union(b)
}

pub fn field_intersect(a: &ScalarField, b: &ScalarField) -> Result<ScalarField> {
    a.intersect(b)
}

pub fn field_complement(a: &ScalarField) -> ScalarField {
    a.complement()
}

/// Multilinear interpolation over the `2^n` nodes enclosing `point`.
pub fn interpolate(field: &ScalarField, point: &[f64]) -> Result<f64> {
    let grid = field.grid();
    let n = grid.ndim();
    if point.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: point.len() });
    }
    // per dim: lower node index, upper node index, weight of the upper node
    let mut lo = [0usize; MAX_DIMS];
    let mut hi = [0usize; MAX_DIMS];
    let mut w = [0.0f64; MAX_DIMS];
    for d in 0..n {
        let a = grid.axis(d);
        let h = a.spacing();
        if a.periodic {
            let s = (a.wrap(point[d]) - a.lower) / h;
            let k = (s.floor() as usize).min(a.count - 1);
            lo[d] = k;
            hi[d] = (k + 1) % a.count;
            w[d] = (s - k as f64).clamp(0.0, 1.0);
        } else {
            let x = point[d];
            // tolerate round-off at the faces
            let eps = 1e-9 * h;
            if !(x >= a.lower - eps && x <= a.upper + eps) {
                return Err(Error::OutOfBounds { point: point.to_vec(), dim: d });
            }
            let s = ((x - a.lower) / h).clamp(0.0, (a.count - 1) as f64);
            let k = (s.floor() as usize).min(a.count - 2);
            lo[d] = k;
            hi[d] = k + 1;
            w[d] = s - k as f64;
        }
    }
    let strides = grid.strides();
    let values = field.values();
    let mut acc = 0.0;
    for corner in 0..(1usize << n) {
        let mut weight = 1.0;
        let mut idx = 0;
        for d in 0..n {
            if corner >> d & 1 == 1 {
                weight *= w[d];
                idx += hi[d] * strides[d];
            } else {
                weight *= 1.0 - w[d];
                idx += lo[d] * strides[d];
            }
        }
        if weight != 0.0 {
            acc += weight * values[idx];
        }
    }
    Ok(acc)
}
