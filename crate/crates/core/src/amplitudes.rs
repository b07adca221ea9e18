//! Helicity amplitudes for `e -> e' gamma` in a medium.
//!
//! `M_fi` is expanded over the spin projections `sigma` (initial electron)
//! and `sigma_g` (photon) on the `z` axis; the coefficients
//! `M^{lambda lambda' lambda_g}_{sigma sigma_g}` depend only on polar angles,
//! and all azimuthal dependence sits in explicit phases.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::angular::AngularGeometry;
use crate::error::{domain, Result};
use crate::kinematics::{ALPHA, ELECTRON_MASS_EV};
use crate::numerics::{wigner_d_half, wigner_d_one, HalfInt};
use crate::spin_basis::{electron_planewave_spinor, linear_polarizations, outer};

pub const SPINS: [HalfInt; 2] = [HalfInt::HALF, HalfInt::MINUS_HALF];
pub const PHOTON_HELICITIES: [i32; 2] = [1, -1];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HelicityLabels {
    pub lambda: HalfInt,
    pub lambda_p: HalfInt,
    pub lambda_g: i32,
    pub sigma: HalfInt,
    pub sigma_g: i32,
}

impl HelicityLabels {
    pub fn new(lambda: HalfInt, lambda_p: HalfInt, lambda_g: i32, sigma: HalfInt, sigma_g: i32) -> Result<Self> {
        let l = Self { lambda, lambda_p, lambda_g, sigma, sigma_g };
        l.validate()?;
        Ok(l)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_spin_half() && self.lambda_p.is_spin_half() && self.sigma.is_spin_half()) {
            return domain(format!(
                "electron labels must be ±1/2: lambda = {}, lambda' = {}, sigma = {}",
                self.lambda, self.lambda_p, self.sigma
            ));
        }
        if self.lambda_g != 1 && self.lambda_g != -1 {
            return domain(format!("photon helicity must be ±1, got {}", self.lambda_g));
        }
        if !(-1..=1).contains(&self.sigma_g) {
            return domain(format!("photon spin projection must be in {{-1, 0, 1}}, got {}", self.sigma_g));
        }
        Ok(())
    }

    /// Same labels with every helicity and projection reversed.
    pub fn flipped(&self) -> Self {
        Self {
            lambda: -self.lambda,
            lambda_p: -self.lambda_p,
            lambda_g: -self.lambda_g,
            sigma: -self.sigma,
            sigma_g: -self.sigma_g,
        }
    }
}

/// `E_{lambda lambda'} = sqrt((E - m)(E' + m)) + 4 lambda lambda' sqrt((E' - m)(E + m))`.
pub fn energy_factor(e: f64, ep: f64, lambda: HalfInt, lambda_p: HalfInt, mass: f64) -> Result<f64> {
    if !(e >= mass && ep >= mass) {
        return domain(format!("energies must be at least m = {mass}: E = {e}, E' = {ep}"));
    }
    if !(lambda.is_spin_half() && lambda_p.is_spin_half()) {
        return domain(format!("helicities must be ±1/2, got ({lambda}, {lambda_p})"));
    }
    let s = f64::from(lambda.twice() * lambda_p.twice());
    Ok(((e - mass) * (ep + mass)).sqrt() + s * ((ep - mass) * (e + mass)).sqrt())
}

/// Angular structure shared by the exact and ultra-relativistic coefficients:
/// `2 sigma d^{1/2}_{sigma lambda}(theta) d^{1/2}_{sigma - sigma_g, lambda'}(theta')
/// d^1_{sigma_g lambda_g}(theta_g) (delta_{0 sigma_g} - sqrt2 delta_{2 sigma, sigma_g})`.
pub(crate) fn angular_factor(l: &HelicityLabels, theta: f64, theta_p: f64, theta_g: f64) -> Result<f64> {
    l.validate()?;
    let kron = if l.sigma_g == 0 {
        1.0
    } else if l.sigma_g == l.sigma.twice() {
        -SQRT_2
    } else {
        return Ok(0.0);
    };
    // sigma - sigma_g is ±1/2 whenever the Kronecker factor is nonzero
    let s_out = l.sigma.sub_int(l.sigma_g);
    debug_assert!(s_out.is_spin_half());
    let d = wigner_d_half(l.sigma, l.lambda, theta)?
        * wigner_d_half(s_out, l.lambda_p, theta_p)?
        * wigner_d_one(l.sigma_g, l.lambda_g, theta_g)?;
    Ok(f64::from(l.sigma.twice()) * d * kron)
}

/// `M^{lambda lambda' lambda_g}_{sigma sigma_g}` with `E' = E - omega`.
pub fn m_coefficient(l: &HelicityLabels, e: f64, omega: f64, theta: f64, theta_p: f64, theta_g: f64) -> Result<f64> {
    m_coefficient_ee(l, e, e - omega, theta, theta_p, theta_g)
}

/// `M^{lambda lambda' lambda_g}_{sigma sigma_g}` given both electron energies.
pub fn m_coefficient_ee(l: &HelicityLabels, e: f64, ep: f64, theta: f64, theta_p: f64, theta_g: f64) -> Result<f64> {
    let ang = angular_factor(l, theta, theta_p, theta_g)?;
    let ef = energy_factor(e, ep, l.lambda, l.lambda_p, ELECTRON_MASS_EV)?;
    Ok(-(4.0 * PI * ALPHA).sqrt() * f64::from(l.lambda.twice()) * ef * ang)
}

/// Which of the two back-to-back solutions `phi' = phi_g ± pi` is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    /// `phi' = phi_g + pi` for `phi_g` in `[0, pi)`, `phi_g - pi` otherwise.
    pub fn for_photon_azimuth(phi_g: f64) -> Self {
        if phi_g.rem_euclid(2.0 * PI) < PI {
            Branch::Plus
        } else {
            Branch::Minus
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }

    pub fn final_azimuth(self, phi_g: f64) -> f64 {
        phi_g + self.sign() * PI
    }
}

/// Full amplitude for arbitrary directions of all three momenta.
#[allow(clippy::too_many_arguments)]
pub fn mfi_general(
    lambda: HalfInt,
    lambda_p: HalfInt,
    lambda_g: i32,
    e: f64,
    omega: f64,
    (theta, theta_p, theta_g): (f64, f64, f64),
    (phi, phi_p, phi_g): (f64, f64, f64),
) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for sigma in SPINS {
        for sigma_g in [0, sigma.twice()] {
            let l = HelicityLabels::new(lambda, lambda_p, lambda_g, sigma, sigma_g)?;
            let m = m_coefficient(&l, e, omega, theta, theta_p, theta_g)?;
            let arg = sigma.value() * (phi_p - phi) - f64::from(sigma_g) * (phi_p - phi_g);
            sum += Complex64::from_polar(m, arg);
        }
    }
    Ok(sum)
}

/// Amplitude for an initial electron along `z`.
#[allow(clippy::too_many_arguments)]
pub fn mfi_planewave(
    lambda: HalfInt,
    lambda_p: HalfInt,
    lambda_g: i32,
    e: f64,
    omega: f64,
    theta_p: f64,
    theta_g: f64,
    phi_p: f64,
    phi_g: f64,
) -> Result<Complex64> {
    let m0 =
        m_coefficient(&HelicityLabels::new(lambda, lambda_p, lambda_g, lambda, 0)?, e, omega, 0.0, theta_p, theta_g)?;
    let m2 = m_coefficient(
        &HelicityLabels::new(lambda, lambda_p, lambda_g, lambda, lambda.twice())?,
        e,
        omega,
        0.0,
        theta_p,
        theta_g,
    )?;
    let l = lambda.value();
    Ok(Complex64::from_polar(m0, l * phi_p) + Complex64::from_polar(m2, -l * phi_p + 2.0 * l * phi_g))
}

/// `M_{lambda,0} - M_{lambda,2 lambda}` at `theta = 0`.
pub fn back_to_back_difference(
    lambda: HalfInt,
    lambda_p: HalfInt,
    lambda_g: i32,
    e: f64,
    ep: f64,
    theta_p: f64,
    theta_g: f64,
) -> Result<f64> {
    let m0 =
        m_coefficient_ee(&HelicityLabels::new(lambda, lambda_p, lambda_g, lambda, 0)?, e, ep, 0.0, theta_p, theta_g)?;
    let m2 = m_coefficient_ee(
        &HelicityLabels::new(lambda, lambda_p, lambda_g, lambda, lambda.twice())?,
        e,
        ep,
        0.0,
        theta_p,
        theta_g,
    )?;
    Ok(m0 - m2)
}

/// Plane-wave amplitude on the back-to-back solution, `e^{i lambda (phi_g ± pi)}(M_{lambda,0} - M_{lambda,2lambda})`.
#[allow(clippy::too_many_arguments)]
pub fn mfi_back_to_back(
    lambda: HalfInt,
    lambda_p: HalfInt,
    lambda_g: i32,
    e: f64,
    omega: f64,
    theta_p: f64,
    theta_g: f64,
    phi_g: f64,
    branch: Branch,
) -> Result<Complex64> {
    let diff = back_to_back_difference(lambda, lambda_p, lambda_g, e, e - omega, theta_p, theta_g)?;
    Ok(Complex64::from_polar(diff, lambda.value() * branch.final_azimuth(phi_g)))
}

/// Ultra-relativistic amplitudes: `g1 = sin(theta_g + theta'/2)`, `g2 = 2 lambda sin(theta'/2)`.
pub fn ultrarel_g1_g2(lambda: HalfInt, theta_p: f64, theta_g: f64) -> (f64, f64) {
    ((theta_g + 0.5 * theta_p).sin(), f64::from(lambda.sign()) * (0.5 * theta_p).sin())
}

/// `sum_{sigma sigma_g} coef(sigma, sigma_g) cos[(m - sigma)(delta - delta') + (m_g - sigma_g) delta']`.
pub(crate) fn twisted_sum<C>(m: HalfInt, m_g: i32, geometry: &AngularGeometry, coef: C) -> Result<f64>
where
    C: Fn(HalfInt, i32) -> Result<f64>,
{
    if !m.is_half_odd() {
        return domain(format!("electron TAM must be half-integer, got {m}"));
    }
    let (d, dp) = (geometry.delta, geometry.delta_p);
    let mut sum = 0.0;
    for sigma in SPINS {
        for sigma_g in [0, sigma.twice()] {
            let c = coef(sigma, sigma_g)?;
            if c == 0.0 {
                continue;
            }
            let orbital = f64::from((m - sigma).twice() / 2);
            sum += c * (orbital * (d - dp) + f64::from(m_g - sigma_g) * dp).cos();
        }
    }
    Ok(sum)
}

/// Coefficient `C` of a twisted initial electron with TAM `m`, final photon TAM `m_g`.
#[allow(clippy::too_many_arguments)]
pub fn twisted_c(
    lambda: HalfInt,
    lambda_p: HalfInt,
    lambda_g: i32,
    m: HalfInt,
    m_g: i32,
    e: f64,
    omega: f64,
    geometry: &AngularGeometry,
) -> Result<f64> {
    let g = geometry;
    twisted_sum(m, m_g, g, |sigma, sigma_g| {
        let l = HelicityLabels::new(lambda, lambda_p, lambda_g, sigma, sigma_g)?;
        m_coefficient(&l, e, omega, g.theta, g.theta_p, g.theta_g)
    })
}

/// Soft-photon amplitudes of the twisted case,
/// `G1 = [cos theta sin theta_g - sin theta cos theta_g cos delta] cos(m_g delta)`,
/// `G2 = -sin theta sin delta sin(m_g delta)`.
pub fn soft_g1_g2(m_g: i32, theta: f64, theta_g: f64, delta: f64) -> (f64, f64) {
    let mg = f64::from(m_g);
    let g1 = (theta.cos() * theta_g.sin() - theta.sin() * theta_g.cos() * delta.cos()) * (mg * delta).cos();
    let g2 = -theta.sin() * delta.sin() * (mg * delta).sin();
    (g1, g2)
}

pub type SpinorPolarization = [[Complex64; 3]; 4];

/// Closed-form `sum_{lambda' lambda_g} u_{p' lambda'} (x) e_{k lambda_g} (M_{lambda,0} - M_{lambda,2lambda})`
/// for back-to-back transverse kinematics, with the final electron at
/// `phi' = phi_g ± pi` per [`Branch::for_photon_azimuth`].
pub fn helicity_sum_s(
    lambda: HalfInt,
    e: f64,
    ep: f64,
    theta_p: f64,
    theta_g: f64,
    phi_g: f64,
) -> Result<SpinorPolarization> {
    let phi_p = Branch::for_photon_azimuth(phi_g).final_azimuth(phi_g);
    let (par, perp) = linear_polarizations(theta_g, phi_g);
    let l2 = f64::from(lambda.twice());
    let i = Complex64::new(0.0, 1.0);
    let e_same = energy_factor(e, ep, lambda, lambda, ELECTRON_MASS_EV)?;
    let e_flip = energy_factor(e, ep, lambda, -lambda, ELECTRON_MASS_EV)?;
    let u_same = electron_planewave_spinor(theta_p, phi_p, ep, lambda)?;
    let u_flip = electron_planewave_spinor(theta_p, phi_p, ep, -lambda)?;
    let a = theta_g + 0.5 * theta_p;
    let pol_same = par * a.sin() + perp * (i * l2 * (0.5 * theta_p).sin());
    let pol_flip = par * (l2 * a.cos()) + perp * (i * (0.5 * theta_p).cos());
    let norm = (4.0 * PI * ALPHA).sqrt();
    let s1 = outer(&u_same, &pol_same);
    let s2 = outer(&u_flip, &pol_flip);
    let mut out = [[Complex64::new(0.0, 0.0); 3]; 4];
    for r in 0..4 {
        for c in 0..3 {
            out[r][c] = norm * (e_same * s1[r][c] + e_flip * s2[r][c]);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AmplitudeKey {
    pub lambda_p: HalfInt,
    pub lambda_g: i32,
    /// Photon TAM, twisted tables only.
    pub m_g: Option<i32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeTable {
    pub entries: Vec<(AmplitudeKey, Complex64)>,
}

impl AmplitudeTable {
    /// `M_fi` for every `(lambda', lambda_g)` at the given final-state directions.
    #[allow(clippy::too_many_arguments)]
    pub fn planewave(
        lambda: HalfInt,
        e: f64,
        omega: f64,
        theta_p: f64,
        theta_g: f64,
        phi_p: f64,
        phi_g: f64,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(4);
        for lambda_p in SPINS {
            for lambda_g in PHOTON_HELICITIES {
                let v = mfi_planewave(lambda, lambda_p, lambda_g, e, omega, theta_p, theta_g, phi_p, phi_g)?;
                entries.push((AmplitudeKey { lambda_p, lambda_g, m_g: None }, v));
            }
        }
        Ok(Self { entries })
    }

    /// `C` for every `(lambda', lambda_g, m_g)` with `|m_g| <= max_abs_m_g`.
    pub fn twisted(
        lambda: HalfInt,
        m: HalfInt,
        e: f64,
        omega: f64,
        geometry: &AngularGeometry,
        max_abs_m_g: i32,
    ) -> Result<Self> {
        let mut entries = Vec::new();
        for lambda_p in SPINS {
            for lambda_g in PHOTON_HELICITIES {
                for m_g in -max_abs_m_g..=max_abs_m_g {
                    let v = twisted_c(lambda, lambda_p, lambda_g, m, m_g, e, omega, geometry)?;
                    entries.push((AmplitudeKey { lambda_p, lambda_g, m_g: Some(m_g) }, Complex64::new(v, 0.0)));
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn get(&self, lambda_p: HalfInt, lambda_g: i32, m_g: Option<i32>) -> Option<Complex64> {
        let key = AmplitudeKey { lambda_p, lambda_g, m_g };
        self.entries.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }
}
