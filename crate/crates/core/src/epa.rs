//! Equivalent (virtual) photon emission by a fast electron.
//!
//! The amplitude has the same structure as Vavilov-Cherenkov emission, with
//! ultra-relativistic coefficients and free kinematics: the photon polar
//! angle and the emission angle between `p` and `k` are inputs, and the
//! photon is off shell.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::amplitudes::{twisted_sum, Branch, HelicityLabels, PHOTON_HELICITIES};
use crate::angular::AngularGeometry;
use crate::error::{domain, Result, VcError};
use crate::evolved::{geometry_modes, EvolvedCoefficient, ModeMomenta, ModeTruncation};
use crate::kinematics::{momentum, ALPHA, ELECTRON_MASS_EV};
use crate::numerics::{i_pow, wigner_d_half, wigner_d_one, HalfInt};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VirtualPhoton {
    pub omega: f64,
    pub k_perp: f64,
    pub k_z: f64,
    pub virtuality_q2: f64,
}

impl VirtualPhoton {
    pub fn new(omega: f64, k_perp: f64, k_z: f64) -> Result<Self> {
        let q2 = omega * omega - k_perp * k_perp - k_z * k_z;
        if q2 > 0.0 {
            return domain(format!("timelike photon momentum, k^2 = {q2}"));
        }
        Ok(Self { omega, k_perp, k_z, virtuality_q2: q2 })
    }
}

/// `k^2 = -(k_perp^2 + (m omega/E)^2)/(1 - omega/E)`.
pub fn virtuality(e: f64, omega: f64, k_perp: f64, mass: f64) -> Result<f64> {
    if !(omega > 0.0 && omega < e) {
        return domain(format!("need 0 < omega < E, got omega = {omega}, E = {e}"));
    }
    let x = omega / e;
    Ok(-(k_perp * k_perp + (mass * x) * (mass * x)) / (1.0 - x))
}

/// Soft-photon approximations `(k^2, k_z) = (-k_perp^2, omega)`.
pub fn epa_soft_relations(_e: f64, omega: f64, k_perp: f64) -> (f64, f64) {
    (-k_perp * k_perp, omega)
}

/// Ultra-relativistic amplitude coefficient; zero unless `lambda' = lambda`.
pub fn epa_ultrarel_m_coefficient(
    l: &HelicityLabels,
    e: f64,
    ep: f64,
    theta: f64,
    theta_p: f64,
    theta_g: f64,
) -> Result<f64> {
    l.validate()?;
    if l.lambda_p != l.lambda {
        return Ok(0.0);
    }
    if !(e > 0.0 && ep > 0.0) {
        return domain(format!("energies must be positive, got E = {e}, E' = {ep}"));
    }
    let sign = f64::from(l.sigma.twice() * l.lambda.twice()) * 2.0;
    Ok(-(4.0 * PI * ALPHA).sqrt() * sign * (e * ep).sqrt() * angular_part(l, theta, theta_p, theta_g)?)
}

/// `d_{sigma lambda}(theta) d_{sigma - sigma_g, lambda}(theta') d1_{sigma_g lambda_g}(theta_g) (delta_0 - sqrt2 delta_2sigma)`.
fn angular_part(l: &HelicityLabels, theta: f64, theta_p: f64, theta_g: f64) -> Result<f64> {
    let k = if l.sigma_g == 0 {
        1.0
    } else if l.sigma_g == l.sigma.twice() {
        -SQRT_2
    } else {
        return Ok(0.0);
    };
    let inner = l.sigma - HalfInt::from_int(l.sigma_g);
    if !inner.is_spin_half() {
        return Ok(0.0);
    }
    Ok(k * wigner_d_half(l.sigma, l.lambda, theta)?
        * wigner_d_half(inner, l.lambda, theta_p)?
        * wigner_d_one(l.sigma_g, l.lambda_g, theta_g)?)
}

/// Kinematics of `e -> e' gamma*` with fixed emission angle `theta0` between `p` and `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpaKinematics {
    pub energy: f64,
    pub omega: f64,
    pub theta0: f64,
    /// `|k|`, the smaller root of the energy-momentum balance.
    pub k: f64,
    pub p: f64,
}

impl EpaKinematics {
    pub fn new(e: f64, omega: f64, theta0: f64) -> Result<Self> {
        if !(omega > 0.0 && omega < e - ELECTRON_MASS_EV) {
            return domain(format!("need 0 < omega < E - m_e, got omega = {omega}"));
        }
        if !(0.0..=PI).contains(&theta0) {
            return domain(format!("emission angle {theta0} outside [0, pi]"));
        }
        let p = momentum(e, ELECTRON_MASS_EV)?;
        let c = theta0.cos();
        let disc = p * p * c * c - omega * (2.0 * e - omega);
        if disc < 0.0 || c <= 0.0 {
            return Err(VcError::KinematicallyForbidden(format!(
                "no real |k| for omega = {omega} at emission angle {theta0}"
            )));
        }
        let k = omega * (2.0 * e - omega) / (p * c + disc.sqrt());
        Ok(Self { energy: e, omega, theta0, k, p })
    }

    pub fn virtuality(&self) -> f64 {
        self.omega * self.omega - self.k * self.k
    }

    /// Final electron polar angle for an initial electron along `z`.
    pub fn theta_p(&self) -> f64 {
        let (s, c) = self.theta0.sin_cos();
        (self.k * s).atan2(self.p - self.k * c)
    }

    pub fn photon(&self, theta_g: f64) -> Result<VirtualPhoton> {
        VirtualPhoton::new(self.omega, self.k * theta_g.sin(), self.k * theta_g.cos())
    }
}

/// `C` of the equivalent photon with TAM `m_g`, helicity `lambda_g`.
pub fn epa_c(lambda: HalfInt, lambda_g: i32, m: HalfInt, m_g: i32, geometry: &AngularGeometry) -> Result<f64> {
    let g = geometry;
    let s = twisted_sum(m, m_g, g, |sigma, sigma_g| {
        let l = HelicityLabels::new(lambda, lambda, lambda_g, sigma, sigma_g)?;
        Ok(f64::from(sigma.twice()) * angular_part(&l, g.theta, g.theta_p, g.theta_g)?)
    })?;
    Ok(f64::from(lambda.twice()) * s)
}

fn weight_prefactor(e: f64, omega: f64) -> f64 {
    (2.0 * PI * ALPHA / e).sqrt() * (1.0 - omega / e).sqrt()
}

/// Twisted initial electron: weight `-i sqrt(2 pi alpha/E) sqrt(1 - omega/E) F C`,
/// helicity-conserving terms only.
#[allow(clippy::too_many_arguments)]
pub fn epa_twisted_coefficients(
    e: f64,
    lambda: HalfInt,
    m: HalfInt,
    theta: f64,
    omega: f64,
    theta_g: f64,
    theta0: f64,
    truncation: &ModeTruncation,
) -> Result<Vec<EvolvedCoefficient>> {
    if !lambda.is_spin_half() {
        return domain(format!("electron helicity must be ±1/2, got {lambda}"));
    }
    let kin = EpaKinematics::new(e, omega, theta0)?;
    let g = AngularGeometry::from_momenta(kin.p, kin.k, theta, theta_g, theta0)?;
    let modes = geometry_modes(kin.p, kin.k, &g);
    let pref = Complex64::new(0.0, -weight_prefactor(e, omega) * g.weight_f);
    let mut out = Vec::new();
    for lambda_g in PHOTON_HELICITIES {
        for m_g in -truncation.max_abs_m..=truncation.max_abs_m {
            let c = epa_c(lambda, lambda_g, m, m_g, &g)?;
            out.push(EvolvedCoefficient {
                m_prime: m.sub_int(m_g),
                lambda_prime: lambda,
                m_gamma: m_g,
                lambda_gamma: lambda_g,
                omega,
                theta_g: Some(theta_g),
                weight: pref * c,
                branch: None,
                overlap_weight: g.weight_f,
                measure: 1.0,
                modes,
            });
        }
    }
    Ok(out)
}

/// Plane-wave initial electron along `z`; the photon leaves at `theta0`.
/// Weight `-i^{lambda+1} sqrt(2 pi alpha/E) sqrt(1 - omega/E) (-1)^{m_g} (D_0 - D_2lambda)`,
/// `D` being the angular part of the coefficient including `(delta_0 - sqrt2 delta_2sigma)`,
/// split over the two `phi_g` hemispheres.
pub fn epa_pw_coefficients(
    e: f64,
    lambda: HalfInt,
    omega: f64,
    theta0: f64,
    truncation: &ModeTruncation,
) -> Result<Vec<EvolvedCoefficient>> {
    if !lambda.is_spin_half() {
        return domain(format!("electron helicity must be ±1/2, got {lambda}"));
    }
    let kin = EpaKinematics::new(e, omega, theta0)?;
    let theta_p = kin.theta_p();
    let k_perp = kin.k * theta0.sin();
    let k_z = kin.k * theta0.cos();
    let modes = ModeMomenta { k_perp, k_z, p_perp: k_perp, p_z: kin.p - k_z };
    let pref = -i_pow(lambda.add_int(1)) * weight_prefactor(e, omega);
    let mut out = Vec::new();
    for lambda_g in PHOTON_HELICITIES {
        let d0 = angular_part(&HelicityLabels::new(lambda, lambda, lambda_g, lambda, 0)?, 0.0, theta_p, theta0)?;
        let d2 = angular_part(
            &HelicityLabels::new(lambda, lambda, lambda_g, lambda, lambda.twice())?,
            0.0,
            theta_p,
            theta0,
        )?;
        for m_g in -truncation.max_abs_m..=truncation.max_abs_m {
            let sign = if m_g % 2 == 0 { 1.0 } else { -1.0 };
            let weight = pref * (sign * (d0 - d2));
            for branch in [Branch::Plus, Branch::Minus] {
                out.push(EvolvedCoefficient {
                    m_prime: lambda.sub_int(m_g),
                    lambda_prime: lambda,
                    m_gamma: m_g,
                    lambda_gamma: lambda_g,
                    omega,
                    theta_g: None,
                    weight: weight * 0.5,
                    branch: Some(branch),
                    overlap_weight: 1.0,
                    measure: 1.0,
                    modes,
                });
            }
        }
    }
    Ok(out)
}
