//! Brute-force cross-checks of the closed forms, usable at run time.
//!
//! Each oracle evaluates the same quantity as a library routine by a
//! different route (direct integration, root finding, explicit sums) and
//! reports the largest discrepancy.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::amplitudes::{
    back_to_back_difference, helicity_sum_s, m_coefficient, twisted_c, Branch, HelicityLabels, SpinorPolarization,
    PHOTON_HELICITIES, SPINS,
};
use crate::angular::{azimuthal_average, AngularGeometry};
use crate::error::{domain, Result};
use crate::evolved::{electron_bessel_mode, photon_bessel_mode, SpaceTimePoint};
use crate::kinematics::{momentum, MediumModel, ELECTRON_MASS_EV};
use crate::numerics::{i_pow, HalfInt};
use crate::scalar_oracle::{scalar_mode, scalar_wavefunction, ScalarDecayConfig};
use crate::spin_basis::{electron_planewave_spinor, outer, photon_polarization_vector, unit_vector, Bispinor};

#[derive(Clone, Debug, PartialEq)]
pub struct OracleCheck {
    pub name: String,
    pub max_error: f64,
    pub tolerance: f64,
}

impl OracleCheck {
    pub fn new(name: impl Into<String>, max_error: f64, tolerance: f64) -> Self {
        Self { name: name.into(), max_error, tolerance }
    }

    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance
    }
}

/// Labels and kinematics of one twisted-amplitude check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwistedCase {
    pub lambda: HalfInt,
    pub lambda_p: HalfInt,
    pub lambda_g: i32,
    pub m: HalfInt,
    pub m_g: i32,
    pub energy: f64,
    pub omega: f64,
    pub theta: f64,
    pub theta_g: f64,
    pub phi_g: f64,
}

struct Integrand<'a> {
    case: &'a TwistedCase,
    p: f64,
    k: f64,
}

impl Integrand<'_> {
    fn final_momentum(&self, phi: f64) -> [f64; 3] {
        let c = self.case;
        let pv = unit_vector(c.theta, phi);
        let kv = unit_vector(c.theta_g, c.phi_g);
        [0, 1, 2].map(|i| self.p * pv[i] - self.k * kv[i])
    }

    /// `E - omega - E'(phi)`.
    fn mismatch(&self, phi: f64) -> f64 {
        let pp = self.final_momentum(phi);
        let ep = (pp.iter().map(|x| x * x).sum::<f64>() + ELECTRON_MASS_EV * ELECTRON_MASS_EV).sqrt();
        self.case.energy - self.case.omega - ep
    }

    /// `e^{i m phi} M_fi e^{-i m' phi' - i m_g phi_g}` at the electron azimuth `phi`.
    fn value(&self, phi: f64) -> Result<Complex64> {
        let c = self.case;
        let pp = self.final_momentum(phi);
        let theta_p = pp[0].hypot(pp[1]).atan2(pp[2]);
        let phi_p = pp[1].atan2(pp[0]);
        let m_p = (c.m - HalfInt::from_int(c.m_g)).value();
        let mut sum = Complex64::new(0.0, 0.0);
        for sigma in SPINS {
            for sigma_g in [0, sigma.twice()] {
                let l = HelicityLabels::new(c.lambda, c.lambda_p, c.lambda_g, sigma, sigma_g)?;
                let mc = m_coefficient(&l, c.energy, c.omega, c.theta, theta_p, c.theta_g)?;
                let arg = c.m.value() * phi + sigma.value() * (phi_p - phi)
                    - f64::from(sigma_g) * (phi_p - c.phi_g)
                    - m_p * phi_p
                    - f64::from(c.m_g) * c.phi_g;
                sum += Complex64::from_polar(mc, arg);
            }
        }
        Ok(sum)
    }

    /// `|p| |k| / E'`, converting `delta(E - omega - E')` into `delta(cos theta_kp - cos theta0)`.
    fn jacobian(&self) -> f64 {
        self.p * self.k / (self.case.energy - self.case.omega)
    }

    /// `F * sum |M|`, the scale errors are measured against.
    fn scale(&self, geometry: &AngularGeometry) -> Result<f64> {
        let c = self.case;
        let g = geometry;
        let mut s = 0.0;
        for sigma in SPINS {
            for sigma_g in [0, sigma.twice()] {
                let l = HelicityLabels::new(c.lambda, c.lambda_p, c.lambda_g, sigma, sigma_g)?;
                s += m_coefficient(&l, c.energy, c.omega, g.theta, g.theta_p, g.theta_g)?.abs();
            }
        }
        Ok(s * g.weight_f)
    }
}

fn setup<'a>(case: &'a TwistedCase, medium: &MediumModel) -> Result<(Integrand<'a>, AngularGeometry, f64)> {
    let p = momentum(case.energy, ELECTRON_MASS_EV)?;
    let k = case.omega * medium.n(case.omega)?;
    let g = AngularGeometry::vc(case.energy, case.omega, medium, case.theta, case.theta_g)?;
    let c = twisted_c(case.lambda, case.lambda_p, case.lambda_g, case.m, case.m_g, case.energy, case.omega, &g)?;
    Ok((Integrand { case, p, k }, g, c * g.weight_f))
}

const SCAN_POINTS: usize = 4096;

/// `F C` from the exact delta function: roots of the energy mismatch in the
/// electron azimuth found by bisection, with numerically differentiated
/// Jacobians. Returns `(oracle, closed form, scale)`.
pub fn twisted_c_root_oracle(case: &TwistedCase, medium: &MediumModel) -> Result<(Complex64, f64, f64)> {
    let (it, g, closed) = setup(case, medium)?;
    let dphi = 2.0 * PI / SCAN_POINTS as f64;
    let mut total = Complex64::new(0.0, 0.0);
    let mut roots = 0;
    let mut a = 0.0;
    let mut fa = it.mismatch(a);
    for i in 1..=SCAN_POINTS {
        let b = i as f64 * dphi;
        let fb = it.mismatch(b);
        if fa == 0.0 || fa.signum() != fb.signum() {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = it.mismatch(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-15 {
                    break;
                }
            }
            let root = 0.5 * (lo + hi);
            let h = 1e-4;
            let slope = (it.mismatch(root + h) - it.mismatch(root - h)) / (2.0 * h);
            total += it.value(root)? / (2.0 * PI * slope.abs());
            roots += 1;
        }
        a = b;
        fa = fb;
    }
    if roots != 2 {
        return domain(format!("expected two stationary azimuths, found {roots}"));
    }
    Ok((total * it.jacobian(), closed, it.scale(&g)?))
}

/// `F C` with the delta function replaced by a Gaussian of width `rel_width`
/// times the full swing of the energy mismatch.
pub fn twisted_c_regularized_oracle(
    case: &TwistedCase,
    medium: &MediumModel,
    rel_width: f64,
) -> Result<(Complex64, f64, f64)> {
    let (it, g, closed) = setup(case, medium)?;
    let n = 1usize << 17;
    let dphi = 2.0 * PI / n as f64;
    let mis: Vec<f64> = (0..n).map(|i| it.mismatch(i as f64 * dphi)).collect();
    let (lo, hi) = mis.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
    let eps = rel_width * (hi - lo);
    let norm = 1.0 / ((2.0 * PI).sqrt() * eps);
    let mut total = Complex64::new(0.0, 0.0);
    for (i, &x) in mis.iter().enumerate() {
        let u = x / eps;
        if u.abs() > 9.0 {
            continue;
        }
        total += it.value(i as f64 * dphi)? * (norm * (-0.5 * u * u).exp());
    }
    Ok((total * (dphi / (2.0 * PI)) * it.jacobian(), closed, it.scale(&g)?))
}

/// Two-point average of `i^{-m} e^{i m phi - i s' phi' + i s (phi' - phi) - i s_g (phi' - phi_g)}`
/// against `i^{-m} e^{i(m - s')phi_g} F cos[(m - s) delta + (s - s' - s_g) delta']`.
pub fn two_point_identity_error(
    m: HalfInt,
    sigma: HalfInt,
    sigma_p: HalfInt,
    sigma_g: i32,
    geometry: &AngularGeometry,
    phi_g: f64,
) -> f64 {
    let (mv, s, sp, sg) = (m.value(), sigma.value(), sigma_p.value(), f64::from(sigma_g));
    let lead = i_pow(-m);
    let f = |phi: f64, phi_p: f64| {
        lead * Complex64::from_polar(1.0, mv * phi - sp * phi_p + s * (phi_p - phi) - sg * (phi_p - phi_g))
    };
    let avg = azimuthal_average(f, geometry, phi_g);
    let want = lead
        * Complex64::from_polar(
            geometry.weight_f * ((mv - s) * geometry.delta + (s - sp - sg) * geometry.delta_p).cos(),
            (mv - sp) * phi_g,
        );
    (avg - want).norm() / geometry.weight_f
}

/// `sum_{lambda' lambda_g} u (x) e (M_{lambda,0} - M_{lambda,2lambda})` term by term.
pub fn helicity_sum_brute(
    lambda: HalfInt,
    e: f64,
    ep: f64,
    theta_p: f64,
    theta_g: f64,
    phi_g: f64,
) -> Result<SpinorPolarization> {
    let phi_p = Branch::for_photon_azimuth(phi_g).final_azimuth(phi_g);
    let mut out = [[Complex64::new(0.0, 0.0); 3]; 4];
    for lambda_p in SPINS {
        let u = electron_planewave_spinor(theta_p, phi_p, ep, lambda_p)?;
        for lambda_g in PHOTON_HELICITIES {
            let pol = photon_polarization_vector(theta_g, phi_g, lambda_g)?;
            let d = back_to_back_difference(lambda, lambda_p, lambda_g, e, ep, theta_p, theta_g)?;
            let o = outer(&u, &pol);
            for r in 0..4 {
                for c in 0..3 {
                    out[r][c] += o[r][c] * d;
                }
            }
        }
    }
    Ok(out)
}

/// Largest component difference between the closed-form and brute-force sums,
/// relative to the largest component.
pub fn helicity_sum_error(lambda: HalfInt, e: f64, ep: f64, theta_p: f64, theta_g: f64, phi_g: f64) -> Result<f64> {
    let a = helicity_sum_s(lambda, e, ep, theta_p, theta_g, phi_g)?;
    let b = helicity_sum_brute(lambda, e, ep, theta_p, theta_g, phi_g)?;
    Ok(relative_difference(&a, &b))
}

pub fn relative_difference(a: &SpinorPolarization, b: &SpinorPolarization) -> f64 {
    let scale = a.iter().flatten().chain(b.iter().flatten()).map(|v| v.norm()).fold(0.0, f64::max);
    let diff = a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

/// Evolved state of the scalar decay by direct integration over the decay
/// surface: for each direction of particle 1 the momentum is found by
/// bisection on energy conservation, with a numerically differentiated Jacobian.
pub fn scalar_direct_quadrature(
    cfg: &ScalarDecayConfig,
    x1: &SpaceTimePoint,
    x2: &SpaceTimePoint,
    n_theta: usize,
    n_phi: usize,
) -> Result<Complex64> {
    let p = cfg.momentum();
    let e = cfg.energy;
    let energy_out = |q: f64, c: f64| {
        let e1 = (q * q + cfg.mu1 * cfg.mu1).sqrt();
        let q2 = p * p + q * q - 2.0 * p * q * c;
        e1 + (q2 + cfg.mu2 * cfg.mu2).sqrt()
    };
    let (_, pmax) = cfg.p1_range();
    let plane = |k: [f64; 3], en: f64, x: &SpaceTimePoint| {
        let r = x.cartesian();
        Complex64::from_polar(1.0, k[0] * r[0] + k[1] * r[1] + k[2] * r[2] - en * x.t)
    };
    let dth = PI / n_theta as f64;
    let dph = 2.0 * PI / n_phi as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..n_theta {
        let th = (i as f64 + 0.5) * dth;
        let c = th.cos();
        // energy_out grows with |p'| along any direction once past its minimum;
        // this configuration has a single root per direction
        let (mut lo, mut hi) = (0.0, 2.0 * pmax);
        if (energy_out(lo, c) - e) * (energy_out(hi, c) - e) > 0.0 {
            return domain("decay surface has two sheets; pick a smaller boost");
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (energy_out(mid, c) - e) * (energy_out(lo, c) - e) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let q = 0.5 * (lo + hi);
        let h = 1e-6 * pmax;
        let slope = (energy_out(q + h, c) - energy_out(q - h, c)) / (2.0 * h);
        let e1 = (q * q + cfg.mu1 * cfg.mu1).sqrt();
        let e2 = e - e1;
        let w = q * q * th.sin() * dth * dph / (4.0 * e1 * e2 * slope.abs());
        for j in 0..n_phi {
            let ph = j as f64 * dph;
            let dir = unit_vector(th, ph);
            let k1 = dir.map(|d| q * d);
            let k2 = [-k1[0], -k1[1], p - k1[2]];
            sum += plane(k1, e1, x1) * plane(k2, e2, x2) * w;
        }
    }
    let pref = Complex64::new(0.0, -cfg.coupling / ((2.0 * e).sqrt() * 4.0 * PI * PI));
    Ok(sum * pref)
}

/// Relative difference between the mode sum and direct quadrature of the scalar decay.
pub fn scalar_mode_sum_error(cfg: &ScalarDecayConfig, x1: &SpaceTimePoint, x2: &SpaceTimePoint) -> Result<f64> {
    let a = scalar_wavefunction(cfg, x1, x2, 40, 4000)?;
    let b = scalar_direct_quadrature(cfg, x1, x2, 1000, 256)?;
    Ok((a - b).norm() / b.norm())
}

/// `max |sum_{|m|<=M} i^m e^{-i m phi} phi_m(x) - e^{-i p x}|` over sample points.
pub fn jacobi_anger_error(p_perp: f64, p_z: f64, mass: f64, phi_p: f64, points: &[SpaceTimePoint], max_m: i32) -> f64 {
    let e = (p_perp * p_perp + p_z * p_z + mass * mass).sqrt();
    points
        .iter()
        .map(|x| {
            let sum: Complex64 = (-max_m..=max_m)
                .map(|m| {
                    i_pow(HalfInt::from_int(m))
                        * Complex64::from_polar(1.0, -f64::from(m) * phi_p)
                        * scalar_mode(p_perp, p_z, mass, m, x)
                })
                .sum();
            let r = x.cartesian();
            let want =
                Complex64::from_polar(1.0, p_perp * (phi_p.cos() * r[0] + phi_p.sin() * r[1]) + p_z * r[2] - e * x.t);
            (sum - want).norm()
        })
        .fold(0.0, f64::max)
}

/// Same reconstruction for the electron: `sum i^{m'} e^{-i m' phi'} psi_{m'} = u e^{-ip'x}`,
/// error relative to `|u|`.
pub fn electron_completeness_error(
    p_perp: f64,
    p_z: f64,
    lambda_p: HalfInt,
    phi_p: f64,
    points: &[SpaceTimePoint],
    max_m: i32,
) -> Result<f64> {
    let e = (p_perp * p_perp + p_z * p_z + ELECTRON_MASS_EV * ELECTRON_MASS_EV).sqrt();
    let theta_p = p_perp.atan2(p_z);
    let u = electron_planewave_spinor(theta_p, phi_p, e, lambda_p)?;
    let scale = u.norm_sqr().sqrt();
    let mut worst = 0.0f64;
    for x in points {
        let mut sum = Bispinor::zero();
        let mut mt = -2 * max_m - 1;
        while mt <= 2 * max_m + 1 {
            let m = HalfInt::from_twice(mt);
            let c = i_pow(m) * Complex64::from_polar(1.0, -m.value() * phi_p);
            sum = sum + electron_bessel_mode(p_perp, p_z, m, lambda_p, x)? * c;
            mt += 2;
        }
        let r = x.cartesian();
        let ph = Complex64::from_polar(1.0, p_perp * (phi_p.cos() * r[0] + phi_p.sin() * r[1]) + p_z * r[2] - e * x.t);
        worst = worst.max(sum.max_abs_diff(&(u * ph)) / scale);
    }
    Ok(worst)
}

/// Photon version: `sum i^m e^{-i m phi_g} A_m = e_{k lambda_g} e^{-ikx}`.
pub fn photon_completeness_error(
    omega: f64,
    k_perp: f64,
    k_z: f64,
    lambda_g: i32,
    phi_g: f64,
    points: &[SpaceTimePoint],
    max_m: i32,
) -> Result<f64> {
    let theta_g = k_perp.atan2(k_z);
    let e = photon_polarization_vector(theta_g, phi_g, lambda_g)?;
    let mut worst = 0.0f64;
    for x in points {
        let mut sum = crate::spin_basis::PolVector3::zero();
        for m in -max_m..=max_m {
            let c = i_pow(HalfInt::from_int(m)) * Complex64::from_polar(1.0, -f64::from(m) * phi_g);
            sum = sum + photon_bessel_mode(omega, k_perp, k_z, m, lambda_g, x)? * c;
        }
        let r = x.cartesian();
        let ph =
            Complex64::from_polar(1.0, k_perp * (phi_g.cos() * r[0] + phi_g.sin() * r[1]) + k_z * r[2] - omega * x.t);
        worst = worst.max(sum.max_abs_diff(&(e * ph)));
    }
    Ok(worst)
}

/// Random twisted cases away from the overlap-interval borders.
pub fn random_twisted_cases(count: usize, seed: u64, medium: &MediumModel) -> Result<Vec<TwistedCase>> {
    let mut rng = StdRng::seed_from_u64(seed);
    let e = 300e3 + ELECTRON_MASS_EV;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let omega = rng.gen_range(1.0..5e4);
        let theta = rng.gen_range(2f64.to_radians()..40f64.to_radians());
        let theta0 = match crate::kinematics::cherenkov_cos_angle(e, omega, medium) {
            Ok(c) => c.acos(),
            Err(_) => continue,
        };
        let iv = crate::kinematics::overlap_interval(theta, theta0)?;
        let theta_g = iv.lower() + rng.gen_range(0.15..0.85) * (iv.upper() - iv.lower());
        let pick = |r: f64| if r < 0.5 { HalfInt::HALF } else { HalfInt::MINUS_HALF };
        let lambda = pick(rng.gen::<f64>());
        let lambda_p = pick(rng.gen::<f64>());
        let lambda_g = if rng.gen::<f64>() < 0.5 { 1 } else { -1 };
        let m = HalfInt::from_twice(2 * rng.gen_range(-3..4) + 1);
        let m_g = rng.gen_range(-4..5);
        let phi_g = rng.gen_range(0.0..2.0 * PI);
        out.push(TwistedCase { lambda, lambda_p, lambda_g, m, m_g, energy: e, omega, theta, theta_g, phi_g });
    }
    Ok(out)
}

/// The scalar-model and azimuthal-integration suites.
pub fn run_oracle_suite() -> Result<Vec<OracleCheck>> {
    let mut out = Vec::new();

    let cfg = ScalarDecayConfig::new(3.0, 1.0, 1.0, 3.3, 1.65, 1.0)?;
    let x1 = SpaceTimePoint::new(0.4, 0.8, 0.3, 0.5)?;
    let x2 = SpaceTimePoint::new(0.4, 0.6, 2.0, -0.3)?;
    out.push(OracleCheck::new("scalar mode sum vs direct quadrature", scalar_mode_sum_error(&cfg, &x1, &x2)?, 1e-4));

    let pts: Vec<SpaceTimePoint> = (0..8)
        .map(|i| SpaceTimePoint {
            t: 0.1 * f64::from(i),
            r_perp: 1.25 * f64::from(i),
            phi_r: 0.7 * f64::from(i),
            z: 0.3,
        })
        .collect();
    out.push(OracleCheck::new("Jacobi-Anger reconstruction", jacobi_anger_error(1.0, 0.5, 1.0, 0.4, &pts, 40), 1e-10));

    let medium = MediumModel::constant(1.5)?;
    let cases = random_twisted_cases(20, 7, &medium)?;
    let mut root = 0.0f64;
    let mut reg = 0.0f64;
    for c in &cases {
        let (o, closed, scale) = twisted_c_root_oracle(c, &medium)?;
        root = root.max((o - closed).norm() / scale);
        let (o, closed, scale) = twisted_c_regularized_oracle(c, &medium, 1e-4)?;
        reg = reg.max((o - closed).norm() / scale);
    }
    out.push(OracleCheck::new("twisted C vs root-finding azimuthal integral", root, 1e-8));
    out.push(OracleCheck::new("twisted C vs regularized-delta azimuthal integral", reg, 1e-4));

    let mut ident = 0.0f64;
    for c in &cases {
        let g = AngularGeometry::vc(c.energy, c.omega, &medium, c.theta, c.theta_g)?;
        for s in SPINS {
            for sp in SPINS {
                for sg in -1..=1 {
                    ident = ident.max(two_point_identity_error(c.m, s, sp, sg, &g, c.phi_g));
                }
            }
        }
    }
    out.push(OracleCheck::new("two-point azimuthal formula vs cosine identity", ident, 1e-10));
    Ok(out)
}
