//! Reference computations that share no code with the solver.

/// Semi-Lagrangian dynamic programming for `x' = u`, `|u| <= speed`, on the
/// nodes `xs` (uniform). Each step takes the best of `controls` evenly spaced
/// speeds, looks the previous values up by linear interpolation (clamped at
/// the ends), then applies the reach and avoid clamps.
pub fn integrator_dp(
    xs: &[f64],
    l: &[f64],
    g: &[f64],
    speed: f64,
    controls: usize,
    dt: f64,
    steps: usize,
) -> Vec<f64> {
    let n = xs.len();
    let (lo, h) = (xs[0], xs[1] - xs[0]);
    let lookup = |w: &[f64], x: f64| {
        let s = ((x - lo) / h).clamp(0.0, (n - 1) as f64);
        let i = (s.floor() as usize).min(n - 2);
        let f = s - i as f64;
        w[i] * (1.0 - f) + w[i + 1] * f
    };
    let us: Vec<f64> = (0..controls).map(|k| -speed + 2.0 * speed * k as f64 / (controls - 1) as f64).collect();
    let mut w: Vec<f64> = (0..n).map(|i| l[i].max(g[i])).collect();
    for _ in 0..steps {
        w = (0..n)
            .map(|i| {
                let best = us.iter().map(|u| lookup(&w, xs[i] + u * dt)).fold(f64::INFINITY, f64::min);
                g[i].max(l[i].min(best))
            })
            .collect();
    }
    w
}

/// Sign changes of `v` between consecutive nodes, located by linear
/// interpolation.
pub fn zero_crossings(xs: &[f64], v: &[f64]) -> Vec<f64> {
    (0..v.len() - 1)
        .filter(|&i| (v[i] <= 0.0) != (v[i + 1] <= 0.0))
        .map(|i| xs[i] + (xs[i + 1] - xs[i]) * v[i] / (v[i] - v[i + 1]))
        .collect()
}

/// Smooth test field on (x, y, theta) that is periodic in theta.
pub fn smooth_value(x: &[f64]) -> f64 {
    x[0].sin() * x[1].cos() + 0.1 * x[2].sin()
}

pub fn smooth_gradient(x: &[f64]) -> [f64; 3] {
    [x[0].cos() * x[1].cos(), -x[0].sin() * x[1].sin(), 0.1 * x[2].cos()]
}

/// `min over |w| <= w_max` of `p . (v cos th, v sin th, w)`, written out
/// independently of the model code.
pub fn dubins_hamiltonian(x: &[f64], p: &[f64], v: f64, w_max: f64) -> f64 {
    v * (p[0] * x[2].cos() + p[1] * x[2].sin()) - w_max * p[2].abs()
}
