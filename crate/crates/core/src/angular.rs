//! Cone-overlap geometry for a twisted initial electron.
//!
//! The electron's plane-wave components lie on a cone of half-angle `theta`;
//! emission at angle `theta0` from each of them reaches photon polar angles
//! `theta_g` in the overlap interval. For a given photon direction only two
//! electron azimuths contribute, `phi = phi_g ± delta`, and the matching final
//! electron azimuths are `phi' = phi_g ± delta'`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Result, VcError};
use crate::kinematics::{cherenkov_cos_angle, momentum, overlap_interval, MediumModel, ELECTRON_MASS_EV};
use crate::numerics::clamp_cos;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngularGeometry {
    pub theta: f64,
    pub theta_g: f64,
    pub theta0: f64,
    /// Polar angle of the final electron.
    pub theta_p: f64,
    /// Angle between photon and final electron momenta.
    pub theta_kpp: f64,
    pub delta: f64,
    pub delta_p: f64,
    /// Overlap weight `F(theta, theta_g, theta0)`.
    pub weight_f: f64,
}

impl AngularGeometry {
    /// Geometry for initial momentum `p` on the cone `theta` and photon momentum
    /// `k` at polar angle `theta_g`, separated by `theta0`.
    pub fn from_momenta(p: f64, k: f64, theta: f64, theta_g: f64, theta0: f64) -> Result<Self> {
        if !(p > 0.0 && k > 0.0) {
            return domain(format!("momenta must be positive, got |p| = {p}, |k| = {k}"));
        }
        let delta = delta_angle(theta, theta_g, theta0)?;
        let weight_f = weight_f(theta, theta_g, theta0)?;
        let (st, ct) = theta.sin_cos();
        let (sg, cg) = theta_g.sin_cos();
        let (sd, cd) = delta.sin_cos();
        // frame with phi_g = 0 and phi = delta
        let px = p * st * cd - k * sg;
        let py = p * st * sd;
        let pz = p * ct - k * cg;
        let pperp = px.hypot(py);
        let pp = (pperp * pperp + pz * pz).sqrt();
        if pp == 0.0 {
            return domain("final electron at rest; its direction is undefined");
        }
        let theta_p = pperp.atan2(pz);
        let cos_kpp = clamp_cos((p * theta0.cos() - k) / pp)
            .ok_or_else(|| VcError::Domain("inconsistent momenta: |cos theta_kp'| > 1".into()))?;
        let theta_kpp = cos_kpp.acos();
        let delta_p = delta_prime(theta_p, theta_g, theta_kpp)?;
        Ok(Self { theta, theta_g, theta0, theta_p, theta_kpp, delta, delta_p, weight_f })
    }

    /// Vavilov-Cherenkov geometry: `theta0` from the cone condition, `|k| = omega n`.
    pub fn vc(energy: f64, omega: f64, medium: &MediumModel, theta: f64, theta_g: f64) -> Result<Self> {
        let theta0 = cherenkov_cos_angle(energy, omega, medium)?.acos();
        let p = momentum(energy, ELECTRON_MASS_EV)?;
        let k = omega * medium.n(omega)?;
        Self::from_momenta(p, k, theta, theta_g, theta0)
    }

    /// Soft-photon geometry: the final electron keeps the initial direction,
    /// `theta' = theta`, `delta' = delta`.
    pub fn soft(theta: f64, theta_g: f64, theta0: f64) -> Result<Self> {
        let delta = delta_angle(theta, theta_g, theta0)?;
        let weight_f = weight_f(theta, theta_g, theta0)?;
        Ok(Self { theta, theta_g, theta0, theta_p: theta, theta_kpp: theta0, delta, delta_p: delta, weight_f })
    }

    /// The two contributing `(phi, phi')` pairs for photon azimuth `phi_g`.
    pub fn stationary_points(&self, phi_g: f64) -> [(f64, f64); 2] {
        [(phi_g + self.delta, phi_g + self.delta_p), (phi_g - self.delta, phi_g - self.delta_p)]
    }
}

fn outside(theta_g: f64, a: f64, b: f64) -> VcError {
    match overlap_interval(a, b) {
        Ok(iv) => VcError::OutsideOverlap { theta_g, lower: iv.lower(), upper: iv.upper() },
        Err(_) => VcError::OutsideOverlap { theta_g, lower: f64::NAN, upper: f64::NAN },
    }
}

/// `a + b + c` with the rounding error of the two additions compensated, so
/// that small gaps between O(1) angles keep their relative accuracy.
fn sum3(a: f64, b: f64, c: f64) -> f64 {
    fn two_sum(x: f64, y: f64) -> (f64, f64) {
        let s = x + y;
        let v = s - x;
        (s, (x - (s - v)) + (y - v))
    }
    let (s1, e1) = two_sum(a, b);
    let (s2, e2) = two_sum(s1, c);
    s2 + (e1 + e2)
}

fn spherical_angle(a: f64, theta_g: f64, b: f64) -> Result<f64> {
    let den = theta_g.sin() * a.sin();
    if den == 0.0 {
        return domain(format!("degenerate spherical triangle: sin({theta_g}) sin({a}) = 0"));
    }
    let c = (b.cos() - theta_g.cos() * a.cos()) / den;
    let c = clamp_cos(c).ok_or_else(|| outside(theta_g, a, b))?;
    // half-angle form, free of cancellation near the borders
    let num = (0.5 * sum3(-a, theta_g, b)).sin() * (0.5 * sum3(a, -theta_g, b)).sin();
    let den = (0.5 * sum3(a, theta_g, b)).sin() * (0.5 * sum3(a, theta_g, -b)).sin();
    if num >= 0.0 && den > 0.0 {
        Ok(2.0 * (num / den).sqrt().atan())
    } else {
        Ok(c.acos())
    }
}

/// `delta = arccos[(cos theta0 - cos theta_g cos theta)/(sin theta_g sin theta)]`, in `[0, pi]`.
pub fn delta_angle(theta: f64, theta_g: f64, theta0: f64) -> Result<f64> {
    spherical_angle(theta, theta_g, theta0)
}

/// Same construction for the final electron: `theta'`, `theta_g` and the
/// angle `theta_kp'` between photon and final electron.
pub fn delta_prime(theta_p: f64, theta_g: f64, theta_kpp: f64) -> Result<f64> {
    spherical_angle(theta_p, theta_g, theta_kpp)
}

/// `F = (1/pi) {[cos theta_g - cos(theta + theta0)][cos(theta - theta0) - cos theta_g]}^{-1/2}`.
pub fn weight_f(theta: f64, theta_g: f64, theta0: f64) -> Result<f64> {
    // cos x - cos y = 2 sin((y + x)/2) sin((y - x)/2)
    let upper = 2.0 * (0.5 * sum3(theta, theta0, theta_g)).sin() * (0.5 * sum3(theta, theta0, -theta_g)).sin();
    let lower = 2.0 * (0.5 * sum3(theta_g, theta, -theta0)).sin() * (0.5 * sum3(theta_g, -theta, theta0)).sin();
    let prod = upper * lower;
    if !(prod > 0.0) || !(0.0..=PI).contains(&theta_g) {
        return Err(outside(theta_g, theta, theta0));
    }
    Ok(1.0 / (PI * prod.sqrt()))
}

/// `F = 1/(pi sin theta_g sin theta |sin delta|)`.
pub fn weight_f_via_delta(theta: f64, theta_g: f64, theta0: f64) -> Result<f64> {
    let d = delta_angle(theta, theta_g, theta0)?;
    let den = PI * theta_g.sin() * theta.sin() * d.sin().abs();
    if !(den > 0.0) {
        return Err(outside(theta_g, theta, theta0));
    }
    Ok(1.0 / den)
}

/// `½ [f(phi_g + delta, phi_g + delta') + f(phi_g - delta, phi_g - delta')] F`.
pub fn azimuthal_average<F: Fn(f64, f64) -> Complex64>(f: F, geometry: &AngularGeometry, phi_g: f64) -> Complex64 {
    let [(a, ap), (b, bp)] = geometry.stationary_points(phi_g);
    (f(a, ap) + f(b, bp)) * (0.5 * geometry.weight_f)
}
