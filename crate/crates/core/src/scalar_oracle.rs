//! Toy model: decay of a scalar of mass `M` into scalars of masses `mu'`, `mu''`
//! with a constant coupling `lambda_c`.
//!
//! The evolved two-particle state is expanded over cylindrical modes of the
//! decay products; this is the spinless skeleton of the machinery in
//! [`crate::evolved`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::angular::weight_f;
use crate::error::{domain, Result, VcError};
use crate::evolved::SpaceTimePoint;
use crate::numerics::{bessel_j, sine_substitution_nodes, SingularInterval};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarDecayConfig {
    pub mass: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub energy: f64,
    /// Energy of the particle with mass `mu1`.
    pub e1: f64,
    pub coupling: f64,
}

impl ScalarDecayConfig {
    pub fn new(mass: f64, mu1: f64, mu2: f64, energy: f64, e1: f64, coupling: f64) -> Result<Self> {
        if !(mu1 > 0.0 && mu2 > 0.0 && mass > 0.0) {
            return domain("masses must be positive");
        }
        if mu1 + mu2 > mass {
            return domain(format!("mu1 + mu2 = {} exceeds M = {mass}", mu1 + mu2));
        }
        if energy < mass {
            return domain(format!("E = {energy} below M = {mass}"));
        }
        let cfg = Self { mass, mu1, mu2, energy, e1, coupling };
        let (lo, hi) = cfg.e1_range()?;
        if !(e1 >= lo && e1 <= hi) {
            return Err(VcError::KinematicallyForbidden(format!("E1 = {e1} outside [{lo}, {hi}]")));
        }
        Ok(cfg)
    }

    pub fn momentum(&self) -> f64 {
        (self.energy * self.energy - self.mass * self.mass).max(0.0).sqrt()
    }

    pub fn velocity(&self) -> f64 {
        self.momentum() / self.energy
    }

    pub fn p1(&self) -> f64 {
        (self.e1 * self.e1 - self.mu1 * self.mu1).max(0.0).sqrt()
    }

    fn rest_frame(&self) -> (f64, f64) {
        let m2 = self.mass * self.mass;
        let e_star = (m2 + self.mu1 * self.mu1 - self.mu2 * self.mu2) / (2.0 * self.mass);
        let p_star = (e_star * e_star - self.mu1 * self.mu1).max(0.0).sqrt();
        (e_star, p_star)
    }

    /// Range of `|p'|` over all decay directions.
    pub fn p1_range(&self) -> (f64, f64) {
        let (e_star, p_star) = self.rest_frame();
        let gamma = self.energy / self.mass;
        let gv = self.momentum() / self.mass;
        let a = gamma * p_star;
        let b = gv * e_star;
        ((b - a).abs(), a + b)
    }

    /// Range of `E1` over all decay directions.
    pub fn e1_range(&self) -> Result<(f64, f64)> {
        let (lo, hi) = self.p1_range();
        let e = |p: f64| (p * p + self.mu1 * self.mu1).sqrt();
        Ok((e(lo), e(hi)))
    }

    pub fn with_e1(&self, e1: f64) -> Self {
        Self { e1, ..*self }
    }
}

/// `cos theta0 = (1 - (M^2 + mu'^2 - mu''^2)/(2 E E'))/(v v')`.
pub fn scalar_cos_theta0(cfg: &ScalarDecayConfig) -> Result<f64> {
    let v = cfg.velocity();
    let vp = cfg.p1() / cfg.e1;
    if !(v > 0.0 && vp > 0.0) {
        return domain(format!("both particles must move, got v = {v}, v' = {vp}"));
    }
    let c = (1.0 - (cfg.mass.powi(2) + cfg.mu1.powi(2) - cfg.mu2.powi(2)) / (2.0 * cfg.energy * cfg.e1)) / (v * vp);
    if !(-1.0..=1.0).contains(&c) {
        return Err(VcError::KinematicallyForbidden(format!("cos theta0 = {c}")));
    }
    Ok(c)
}

/// `e^{-iEt} J_m(p_perp r) e^{i(m phi_r + p_z z)}` with `E^2 = p_perp^2 + p_z^2 + mass^2`.
pub fn scalar_mode(p_perp: f64, p_z: f64, mass: f64, m: i32, x: &SpaceTimePoint) -> Complex64 {
    let e = (p_perp * p_perp + p_z * p_z + mass * mass).sqrt();
    let j = bessel_j(m, p_perp * x.r_perp);
    Complex64::from_polar(j, f64::from(m) * x.phi_r + p_z * x.z - e * x.t)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarCoefficient {
    /// TAM of the particle with mass `mu1`.
    pub m1: i32,
    /// TAM of the particle with mass `mu2`.
    pub m2: i32,
    pub e1: f64,
    /// Polar angle of particle 1.
    pub theta1: f64,
    pub weight: Complex64,
    pub p1_perp: f64,
    pub p1_z: f64,
    pub p2_perp: f64,
    pub p2_z: f64,
}

fn prefactor(cfg: &ScalarDecayConfig) -> Complex64 {
    Complex64::new(0.0, -cfg.coupling / (4.0 * PI * cfg.velocity() * (2.0 * cfg.energy).powf(1.5)))
}

/// Initial particle along `z`: `m2 = -m1`, weight
/// `-i lambda_c/(4 pi v (2E)^{3/2}) (|p'|/E') (-1)^{m1}` per unit `d|p'|`.
pub fn scalar_evolved_coefficients(cfg: &ScalarDecayConfig, max_abs_m: i32) -> Result<Vec<ScalarCoefficient>> {
    if max_abs_m < 0 {
        return domain("max_abs_m must be non-negative");
    }
    let c = scalar_cos_theta0(cfg)?;
    let p1 = cfg.p1();
    let s = (1.0 - c * c).sqrt();
    let (p1_perp, p1_z) = (p1 * s, p1 * c);
    let base = prefactor(cfg) * (p1 / cfg.e1);
    Ok((-max_abs_m..=max_abs_m)
        .map(|m| ScalarCoefficient {
            m1: m,
            m2: -m,
            e1: cfg.e1,
            theta1: c.acos(),
            weight: base * if m % 2 == 0 { 1.0 } else { -1.0 },
            p1_perp,
            p1_z,
            p2_perp: p1_perp,
            p2_z: cfg.momentum() - p1_z,
        })
        .collect())
}

/// Initial twisted particle with OAM `m` on a cone of half-angle `theta`;
/// particle 1 at polar angle `theta1`. Weight per unit `d|p'| sin theta1 d theta1`:
/// `-i lambda_c/(4 pi v (2E)^{3/2}) (|p'|/E') F(theta, theta1, theta0) cos(m delta - m2 delta2)`,
/// `delta2` being the azimuth of particle 2 relative to particle 1.
pub fn scalar_twisted_coefficients(
    cfg: &ScalarDecayConfig,
    m: i32,
    theta: f64,
    theta1: f64,
    max_abs_m: i32,
) -> Result<Vec<ScalarCoefficient>> {
    let theta0 = scalar_cos_theta0(cfg)?.acos();
    let f = weight_f(theta, theta1, theta0)?;
    let delta = crate::angular::delta_angle(theta, theta1, theta0)?;
    let p = cfg.momentum();
    let p1 = cfg.p1();
    let x2 = p * theta.sin() * delta.cos() - p1 * theta1.sin();
    let y2 = p * theta.sin() * delta.sin();
    let delta2 = y2.atan2(x2);
    let p2_perp = x2.hypot(y2);
    let p2_z = p * theta.cos() - p1 * theta1.cos();
    let base = prefactor(cfg) * (p1 / cfg.e1 * f);
    Ok((-max_abs_m..=max_abs_m)
        .map(|m1| {
            let m2 = m - m1;
            let c = (f64::from(m) * delta - f64::from(m2) * delta2).cos();
            ScalarCoefficient {
                m1,
                m2,
                e1: cfg.e1,
                theta1,
                weight: base * c,
                p1_perp: p1 * theta1.sin(),
                p1_z: p1 * theta1.cos(),
                p2_perp,
                p2_z,
            }
        })
        .collect())
}

/// `sum weight * phi_{m1}(x1) phi_{m2}(x2)` for coefficients of one node.
pub fn scalar_mode_sum(
    coefficients: &[ScalarCoefficient],
    cfg: &ScalarDecayConfig,
    x1: &SpaceTimePoint,
    x2: &SpaceTimePoint,
) -> Complex64 {
    coefficients
        .iter()
        .map(|c| {
            c.weight
                * scalar_mode(c.p1_perp, c.p1_z, cfg.mu1, c.m1, x1)
                * scalar_mode(c.p2_perp, c.p2_z, cfg.mu2, c.m2, x2)
        })
        .sum()
}

/// Evolved state of a decay along `z` at `(x1, x2)`: the `|p'|` integral over
/// the full decay range with `n_nodes` sine-substitution nodes, modes up to
/// `max_abs_m`.
pub fn scalar_wavefunction(
    cfg: &ScalarDecayConfig,
    x1: &SpaceTimePoint,
    x2: &SpaceTimePoint,
    max_abs_m: i32,
    n_nodes: usize,
) -> Result<Complex64> {
    let (lo, hi) = cfg.p1_range();
    let iv = SingularInterval::real(lo, hi)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for (p1, w) in sine_substitution_nodes(&iv, n_nodes) {
        let e1 = (p1 * p1 + cfg.mu1 * cfg.mu1).sqrt();
        let node = cfg.with_e1(e1);
        let coef = match scalar_evolved_coefficients(&node, max_abs_m) {
            Ok(c) => c,
            // rounding at the range ends can push |cos theta0| past 1
            Err(VcError::KinematicallyForbidden(_)) => continue,
            Err(e) => return Err(e),
        };
        sum += scalar_mode_sum(&coef, &node, x1, x2) * w;
    }
    Ok(sum)
}
