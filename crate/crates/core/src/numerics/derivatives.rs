use rayon::prelude::*;

use super::config::SchemeOrder;
use crate::error::{Error, Result};
use crate::geom::{Grid, ScalarField};

/// Backward (`left`) and forward (`right`) one-sided derivatives along `dim`.
#[derive(Clone, Debug)]
pub struct DerivativePair {
    pub left: ScalarField,
    pub right: ScalarField,
    pub dim: usize,
}

/// Reads a line of nodes along one dimension, extending it past the ends by
/// periodic wrap or linear extrapolation.
struct Line<'a> {
    values: &'a [f64],
    base: usize,
    stride: usize,
    count: usize,
    periodic: bool,
}

impl Line<'_> {
    #[inline]
    fn raw(&self, k: usize) -> f64 {
        self.values[self.base + k * self.stride]
    }

    #[inline]
    fn at(&self, k: isize) -> f64 {
        let n = self.count as isize;
        if (0..n).contains(&k) {
            return self.raw(k as usize);
        }
        if self.periodic {
            return self.raw(k.rem_euclid(n) as usize);
        }
        if k < 0 {
            let (f0, f1) = (self.raw(0), self.raw(1));
            f0 + k as f64 * (f1 - f0)
        } else {
            let (a, b) = (self.raw(self.count - 2), self.raw(self.count - 1));
            b + (k - n + 1) as f64 * (b - a)
        }
    }
}

#[inline]
fn smaller_magnitude(a: f64, b: f64) -> f64 {
    if a.abs() <= b.abs() {
        a
    } else {
        b
    }
}

/// One-sided derivative approximations of `field` along `dim`.
///
/// Periodic dimensions wrap their stencils; other boundaries extrapolate the
/// field linearly, so left and right agree at the outermost nodes.
pub fn one_sided_derivatives(field: &ScalarField, dim: usize, order: SchemeOrder) -> Result<DerivativePair> {
    let grid: &Grid = field.grid();
    if dim >= grid.ndim() {
        return Err(Error::DimensionMismatch { expected: grid.ndim(), got: dim + 1 });
    }
    let axis = grid.axis(dim);
    if axis.count < order.min_nodes() {
        return Err(Error::InsufficientNodes { dim, count: axis.count, needed: order.min_nodes() });
    }
    let h = axis.spacing();
    let stride = grid.strides()[dim];
    let values = field.values();

    let (left, right): (Vec<f64>, Vec<f64>) = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let k = grid.index_along(idx, dim);
            let line = Line { values, base: idx - k * stride, stride, count: axis.count, periodic: axis.periodic };
            let k = k as isize;
            let fm = line.at(k - 1);
            let f0 = line.at(k);
            let fp = line.at(k + 1);
            let dl = (f0 - fm) / h;
            let dr = (fp - f0) / h;
            match order {
                SchemeOrder::First => (dl, dr),
                SchemeOrder::Second => {
                    let fmm = line.at(k - 2);
                    let fpp = line.at(k + 2);
                    let h2 = h * h;
                    let d2m = (f0 - 2.0 * fm + fmm) / h2;
                    let d20 = (fp - 2.0 * f0 + fm) / h2;
                    let d2p = (fpp - 2.0 * fp + f0) / h2;
                    (dl + 0.5 * h * smaller_magnitude(d2m, d20), dr - 0.5 * h * smaller_magnitude(d20, d2p))
                }
            }
        })
        .unzip();

    Ok(DerivativePair {
        left: ScalarField::from_raw(field.grid().clone(), left),
        right: ScalarField::from_raw(field.grid().clone(), right),
        dim,
    })
}
