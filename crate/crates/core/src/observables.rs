//! Photon polarization observables.

use rayon::prelude::*;

use crate::amplitudes::soft_g1_g2;
use crate::angular::delta_angle;
use crate::error::{domain, Result};
use crate::kinematics::overlap_interval;

/// Distance kept from the overlap-interval borders when sampling curves.
pub const BORDER_MARGIN: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarizationPoint {
    pub theta: f64,
    pub theta_g: f64,
    pub theta0: f64,
    pub m_gamma: i32,
    pub p_l: f64,
}

/// Values indexed `[theta][theta_g]`; NaN outside the overlap region.
#[derive(Clone, Debug, PartialEq)]
pub struct MapGrid {
    pub theta: Vec<f64>,
    pub theta_g: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl MapGrid {
    pub fn finite_count(&self) -> usize {
        self.values.iter().flatten().filter(|v| v.is_finite()).count()
    }
}

fn ratio(a2: f64, b2: f64, what: &str) -> Result<f64> {
    let s = a2 + b2;
    if s == 0.0 {
        return domain(format!("{what}: both amplitudes vanish"));
    }
    Ok((a2 - b2) / s)
}

/// `(g1^2 - g2^2)/(g1^2 + g2^2)`.
pub fn pl_planewave(g1: f64, g2: f64) -> Result<f64> {
    ratio(g1 * g1, g2 * g2, "linear polarization")
}

/// `P_l` of a photon with TAM `m_g` emitted by a twisted electron with
/// opening angle `theta`, soft-photon approximation.
pub fn pl_twisted(theta: f64, theta_g: f64, theta0: f64, m_g: i32) -> Result<f64> {
    let delta = delta_angle(theta, theta_g, theta0)?;
    // G2 carries sin(m_g delta) and vanishes identically
    if m_g == 0 {
        return Ok(1.0);
    }
    let (g1, g2) = soft_g1_g2(m_g, theta, theta_g, delta);
    ratio(g1 * g1, g2 * g2, "linear polarization")
}

/// `n_points` uniform samples of `theta_g` across the overlap interval,
/// [`BORDER_MARGIN`] away from both ends.
pub fn pl_curve(theta: f64, theta0: f64, m_g: i32, n_points: usize) -> Result<Vec<PolarizationPoint>> {
    if n_points < 2 {
        return domain(format!("a curve needs at least 2 points, got {n_points}"));
    }
    let iv = overlap_interval(theta, theta0)?;
    let lo = iv.lower() + BORDER_MARGIN;
    let hi = iv.upper() - BORDER_MARGIN;
    if !(hi > lo) {
        return domain("overlap interval narrower than the border margin");
    }
    let step = (hi - lo) / (n_points - 1) as f64;
    (0..n_points)
        .map(|i| {
            let theta_g = if i == n_points - 1 { hi } else { lo + i as f64 * step };
            let p_l = pl_twisted(theta, theta_g, theta0, m_g)?;
            Ok(PolarizationPoint { theta, theta_g, theta0, m_gamma: m_g, p_l })
        })
        .collect()
}

/// `P_l` over a `(theta, theta_g)` grid.
pub fn pl_map(theta0: f64, m_g: i32, theta_axis: &[f64], theta_g_axis: &[f64]) -> Result<MapGrid> {
    for (name, axis) in [("theta", theta_axis), ("theta_g", theta_g_axis)] {
        if axis.is_empty() {
            return domain(format!("{name} axis is empty"));
        }
        if axis.windows(2).any(|w| !(w[1] > w[0])) {
            return domain(format!("{name} axis must be strictly increasing"));
        }
    }
    let values = theta_axis
        .par_iter()
        .map(|&t| {
            theta_g_axis
                .iter()
                .map(|&tg| match overlap_interval(t, theta0) {
                    Ok(iv) if iv.contains(tg) => pl_twisted(t, tg, theta0, m_g).unwrap_or(f64::NAN),
                    _ => f64::NAN,
                })
                .collect()
        })
        .collect();
    Ok(MapGrid { theta: theta_axis.to_vec(), theta_g: theta_g_axis.to_vec(), values })
}

/// Mean helicity of the equivalent photon, `2 g1 g2 / (g1^2 + g2^2)`.
pub fn epa_mean_helicity(g1: f64, g2: f64) -> Result<f64> {
    let plus = (g1 + g2) * (g1 + g2);
    let minus = (g1 - g2) * (g1 - g2);
    ratio(plus, minus, "mean helicity")
}
