use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{domain, Result, VcError};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const MAX_NODES: usize = 1 << 20;
const START_NODES: usize = 16;

/// Open angular interval `(lower, upper)` with `0 <= lower < upper <= pi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularInterval {
    lower: f64,
    upper: f64,
}

impl SingularInterval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) || lower < 0.0 || upper > PI + 1e-15 {
            return domain(format!("interval ({lower}, {upper}) not inside [0, pi]"));
        }
        if lower >= upper {
            return domain(format!("empty interval ({lower}, {upper})"));
        }
        Ok(Self { lower, upper: upper.min(PI) })
    }

    /// Same as [`SingularInterval::new`] without the `[0, pi]` restriction;
    /// for integrals over plain real ranges.
    pub fn real(lower: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) || lower >= upper {
            return domain(format!("empty interval ({lower}, {upper})"));
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.upper - self.lower)
    }

    /// Strictly inside.
    pub fn contains(&self, x: f64) -> bool {
        x > self.lower && x < self.upper
    }
}

/// Midpoint nodes in `t` for `x = c + h sin t`, `t` in `(-pi/2, pi/2)`.
///
/// Returns `(x, weight)` with the Jacobian `h cos t` folded into the weight.
/// Integrands behaving like `1/sqrt` at both ends become smooth and periodic
/// in `t`, so the rule converges quickly.
pub fn sine_substitution_nodes(interval: &SingularInterval, n: usize) -> Vec<(f64, f64)> {
    let c = interval.midpoint();
    let h = interval.half_width();
    let dt = PI / n as f64;
    (0..n)
        .map(|j| {
            let t = -FRAC_PI_2 + (j as f64 + 0.5) * dt;
            let (s, co) = t.sin_cos();
            // keep nodes strictly inside even when h sin t rounds onto a border
            let x = (c + h * s).clamp(interval.lower, interval.upper);
            (x, dt * h * co)
        })
        .collect()
}

/// Integral of `f` over the interval with the default tolerance.
pub fn integrate_sqrt_singular<F: Fn(f64) -> f64>(f: F, interval: &SingularInterval) -> Result<f64> {
    integrate_sqrt_singular_tol(f, interval, DEFAULT_TOLERANCE)
}

/// Doubles the node count until two successive estimates agree to `tol`
/// (relative, or absolute when the estimate is zero).
pub fn integrate_sqrt_singular_tol<F: Fn(f64) -> f64>(f: F, interval: &SingularInterval, tol: f64) -> Result<f64> {
    let estimate = |n: usize| -> f64 { sine_substitution_nodes(interval, n).into_iter().map(|(x, w)| w * f(x)).sum() };
    let mut n = START_NODES;
    let mut prev = estimate(n);
    while n < MAX_NODES {
        n *= 2;
        let cur = estimate(n);
        if !cur.is_finite() {
            return Err(VcError::NonConvergence(format!("integrand not finite at {n} nodes")));
        }
        let diff = (cur - prev).abs();
        if diff <= tol * cur.abs() || diff == 0.0 {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(VcError::NonConvergence(format!("singular quadrature did not reach tolerance {tol} with {MAX_NODES} nodes")))
}

/// Trapezoid weights for a strictly increasing grid; a single point gets weight 1.
pub fn trapezoid_weights(grid: &[f64]) -> Result<Vec<f64>> {
    if grid.is_empty() {
        return domain("empty grid");
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return domain("grid must be strictly increasing");
    }
    if grid.len() == 1 {
        return Ok(vec![1.0]);
    }
    let n = grid.len();
    let mut w = vec![0.0; n];
    for i in 0..n - 1 {
        let h = 0.5 * (grid[i + 1] - grid[i]);
        w[i] += h;
        w[i + 1] += h;
    }
    Ok(w)
}
