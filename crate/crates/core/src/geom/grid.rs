use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper limit on grid dimensionality; lets hot loops keep coordinates on the stack.
pub const MAX_DIMS: usize = 6;

/// One axis of a [`Grid`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
    pub periodic: bool,
}

impl Axis {
    pub fn new(lower: f64, upper: f64, count: usize, periodic: bool) -> Self {
        Self { lower, upper, count, periodic }
    }

    /// Node spacing. Periodic axes exclude the duplicate endpoint, so they
    /// divide the period by `count` instead of `count - 1`.
    pub fn spacing(&self) -> f64 {
        if self.periodic {
            (self.upper - self.lower) / self.count as f64
        } else {
            (self.upper - self.lower) / (self.count - 1) as f64
        }
    }

    pub fn period(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn node(&self, k: usize) -> f64 {
        self.lower + k as f64 * self.spacing()
    }

    /// Maps a periodic coordinate into `[lower, upper)`; identity otherwise.
    pub fn wrap(&self, x: f64) -> f64 {
        if !self.periodic {
            return x;
        }
        let p = self.period();
        let w = (x - self.lower).rem_euclid(p) + self.lower;
        // rem_euclid can round up to exactly `p` for tiny negative inputs
        if w >= self.upper {
            self.lower
        } else {
            w
        }
    }
}

/// Rectangular lattice. Node ordering is row-major with dimension 0 slowest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    axes: Vec<Axis>,
    strides: Vec<usize>,
}

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidGrid("grid needs at least one dimension".into()));
        }
        if axes.len() > MAX_DIMS {
            return Err(Error::InvalidGrid(format!(
                "{} dimensions requested, at most {MAX_DIMS} supported",
                axes.len()
            )));
        }
        for (d, a) in axes.iter().enumerate() {
            if a.count < 3 {
                return Err(Error::InvalidGrid(format!(
                    "dimension {d} has {} nodes, need at least 3",
                    a.count
                )));
            }
            if !(a.lower.is_finite() && a.upper.is_finite()) || a.upper <= a.lower {
                return Err(Error::InvalidGrid(format!(
                    "dimension {d} bounds [{}, {}] are not increasing",
                    a.lower, a.upper
                )));
            }
        }
        let mut strides = vec![1; axes.len()];
        for d in (0..axes.len() - 1).rev() {
            strides[d] = strides[d + 1] * axes[d + 1].count;
        }
        Ok(Self { axes, strides })
    }

    pub fn ndim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, d: usize) -> &Axis {
        &self.axes[d]
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub fn spacings(&self) -> Vec<f64> {
        self.axes.iter().map(Axis::spacing).collect()
    }

    pub fn len(&self) -> usize {
        self.strides[0] * self.axes[0].count
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Per-dimension index of node `idx`.
    pub fn multi_index(&self, mut idx: usize, out: &mut [usize]) {
        for (o, s) in out.iter_mut().zip(&self.strides) {
            *o = idx / s;
            idx %= s;
        }
    }

    pub fn linear_index(&self, multi: &[usize]) -> usize {
        multi.iter().zip(&self.strides).map(|(k, s)| k * s).sum()
    }

    /// Index of node `idx` along dimension `d`.
    #[inline]
    pub fn index_along(&self, idx: usize, d: usize) -> usize {
        (idx / self.strides[d]) % self.axes[d].count
    }

    /// Writes the coordinates of node `idx` into `out[..ndim]`.
    #[inline]
    pub fn coords_into(&self, idx: usize, out: &mut [f64]) {
        for (d, a) in self.axes.iter().enumerate() {
            out[d] = a.node(self.index_along(idx, d));
        }
    }

    pub fn coords(&self, idx: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.ndim()];
        self.coords_into(idx, &mut out);
        out
    }

    /// The grid spanned by the first `k` dimensions.
    pub fn leading(&self, k: usize) -> Result<Grid> {
        Grid::new(self.axes[..k].to_vec())
    }

    /// Same bounds, every spacing halved.
    pub fn refined(&self) -> Grid {
        let axes = self
            .axes
            .iter()
            .map(|a| Axis {
                count: if a.periodic { 2 * a.count } else { 2 * a.count - 1 },
                ..*a
            })
            .collect();
        Grid::new(axes).expect("refining a valid grid stays valid")
    }

    /// Largest node-to-node diagonal in the first `k` dimensions.
    pub fn cell_diagonal(&self, k: usize) -> f64 {
        self.axes[..k].iter().map(|a| a.spacing().powi(2)).sum::<f64>().sqrt()
    }
}

/// Builds a grid from `(lower, upper, count, periodic)` tuples.
pub fn make_grid(dims: &[(f64, f64, usize, bool)]) -> Result<Grid> {
    Grid::new(dims.iter().map(|&(l, u, n, p)| Axis::new(l, u, n, p)).collect())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn dubins_grid_spacings() {
        let g = make_grid(&[(-1.0, 1.0, 81, false), (-1.0, 1.0, 81, false), (0.0, 2.0 * PI, 50, true)])
            .unwrap();
        let s = g.spacings();
        assert!((s[0] - 0.025).abs() < 1e-15);
        assert!((s[1] - 0.025).abs() < 1e-15);
        assert!((s[2] - 2.0 * PI / 50.0).abs() < 1e-15);
        assert_eq!(g.len(), 81 * 81 * 50);
    }

    #[test]
    fn endpoint_nodes() {
        let g = make_grid(&[(0.0, 1.0, 3, false)]).unwrap();
        let nodes: Vec<f64> = (0..3).map(|k| g.axis(0).node(k)).collect();
        assert_eq!(nodes, vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn periodic_excludes_endpoint() {
        let g = make_grid(&[(0.0, 2.0 * PI, 4, true)]).unwrap();
        let nodes: Vec<f64> = (0..4).map(|k| g.axis(0).node(k)).collect();
        let want = [0.0, PI / 2.0, PI, 1.5 * PI];
        for (a, b) in nodes.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(nodes.iter().all(|&x| x < 2.0 * PI));
    }

    #[test]
    fn rejects_bad_axes() {
        assert!(make_grid(&[(0.0, 1.0, 2, false)]).is_err());
        assert!(make_grid(&[(1.0, 1.0, 5, false)]).is_err());
        assert!(make_grid(&[(2.0, 1.0, 5, false)]).is_err());
        assert!(make_grid(&[]).is_err());
    }

    #[test]
    fn row_major_dim0_slowest() {
        let g = make_grid(&[(0.0, 1.0, 3, false), (0.0, 1.0, 4, false), (0.0, 1.0, 5, false)]).unwrap();
        assert_eq!(g.strides(), &[20, 5, 1]);
        let mut m = [0; 3];
        g.multi_index(g.linear_index(&[2, 1, 3]), &mut m);
        assert_eq!(m, [2, 1, 3]);
        assert_eq!(g.index_along(27, 1), 1);
    }

    #[test]
    fn refine_halves_spacing() {
        let g = make_grid(&[(-1.0, 1.0, 41, false), (0.0, 2.0 * PI, 24, true)]).unwrap();
        let r = g.refined();
        assert_eq!(r.axis(0).count, 81);
        assert_eq!(r.axis(1).count, 48);
        for (a, b) in g.spacings().iter().zip(r.spacings()) {
            assert!((a / 2.0 - b).abs() < 1e-15);
        }
    }

    #[test]
    fn wrap_maps_into_period() {
        let a = Axis::new(0.0, 2.0 * PI, 50, true);
        assert!((a.wrap(-0.1) - (2.0 * PI - 0.1)).abs() < 1e-12);
        assert!((a.wrap(2.0 * PI + 0.3) - 0.3).abs() < 1e-12);
        assert_eq!(a.wrap(-1e-18), 0.0);
    }
}
