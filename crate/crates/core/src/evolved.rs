//! Evolved electron-photon states.
//!
//! The final state is expanded over Bessel modes of the electron
//! (`psi_{p'_perp p'_z m' lambda'}`) and of the photon
//! (`A_{k_perp k_z m_g lambda_g}`). Each [`EvolvedCoefficient`] is one term of
//! that expansion; a table of them, together with the quadrature measure of
//! each node, assembles the space-time wave function.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::amplitudes::{
    back_to_back_difference, helicity_sum_s, m_coefficient, twisted_c, Branch, HelicityLabels, SpinorPolarization,
    PHOTON_HELICITIES, SPINS,
};
use crate::angular::AngularGeometry;
use crate::error::{domain, Result, VcError};
use crate::kinematics::{cherenkov_cos_angle, momentum, overlap_interval, velocity, MediumModel, ELECTRON_MASS_EV};
use crate::numerics::{
    bessel_j, i_pow, sine_substitution_nodes, trapezoid_weights, wigner_d_half, wigner_d_one, HalfInt,
};
use crate::spin_basis::{basis_bispinor, chi, outer, Bispinor, PolVector3};

/// Default `|m_g|` cutoff of the mode sums.
pub const DEFAULT_MAX_ABS_M: i32 = 32;
/// Relative size of the truncation tail above which a sample is flagged.
pub const TAIL_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct SpaceTimePoint {
    pub t: f64,
    pub r_perp: f64,
    pub phi_r: f64,
    pub z: f64,
}

impl SpaceTimePoint {
    pub fn new(t: f64, r_perp: f64, phi_r: f64, z: f64) -> Result<Self> {
        if !(r_perp >= 0.0) {
            return domain(format!("r_perp must be non-negative, got {r_perp}"));
        }
        Ok(Self { t, r_perp, phi_r, z })
    }

    pub fn cartesian(&self) -> [f64; 3] {
        [self.r_perp * self.phi_r.cos(), self.r_perp * self.phi_r.sin(), self.z]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModeTruncation {
    pub max_abs_m: i32,
    pub omega_grid: Vec<f64>,
    pub theta_grid_size: usize,
}

impl ModeTruncation {
    pub fn new(max_abs_m: i32, omega_grid: Vec<f64>, theta_grid_size: usize) -> Result<Self> {
        if max_abs_m < 1 {
            return domain(format!("max_abs_m must be at least 1, got {max_abs_m}"));
        }
        if theta_grid_size < 1 {
            return domain("theta_grid_size must be at least 1");
        }
        trapezoid_weights(&omega_grid)?;
        Ok(Self { max_abs_m, omega_grid, theta_grid_size })
    }

    /// One frequency, default cutoffs.
    pub fn single(omega: f64) -> Self {
        Self { max_abs_m: DEFAULT_MAX_ABS_M, omega_grid: vec![omega], theta_grid_size: 64 }
    }
}

/// Transverse and longitudinal momenta carried by the two Bessel modes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeMomenta {
    pub k_perp: f64,
    pub k_z: f64,
    pub p_perp: f64,
    pub p_z: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolvedCoefficient {
    pub m_prime: HalfInt,
    pub lambda_prime: HalfInt,
    pub m_gamma: i32,
    pub lambda_gamma: i32,
    pub omega: f64,
    /// Photon polar angle; twisted initial electron only.
    pub theta_g: Option<f64>,
    pub weight: Complex64,
    /// Hemisphere of `phi_g` the term belongs to; plane-wave initial electron only.
    pub branch: Option<Branch>,
    /// `F(theta, theta_g, theta0)` already included in `weight`; 1 for a plane wave.
    pub overlap_weight: f64,
    /// Quadrature weight of this node (includes `d(omega n)/n` and `sin theta_g d theta_g`).
    pub measure: f64,
    pub modes: ModeMomenta,
}

fn on_shell_energy(p_perp: f64, p_z: f64) -> f64 {
    (p_perp * p_perp + p_z * p_z + ELECTRON_MASS_EV * ELECTRON_MASS_EV).sqrt()
}

/// Electron Bessel mode with TAM `m'` and helicity `lambda'`.
pub fn electron_bessel_mode(
    p_perp: f64,
    p_z: f64,
    m_prime: HalfInt,
    lambda_prime: HalfInt,
    x: &SpaceTimePoint,
) -> Result<Bispinor> {
    if !m_prime.is_half_odd() {
        return domain(format!("electron TAM must be half-integer, got {m_prime}"));
    }
    if !(p_perp >= 0.0) {
        return domain(format!("p_perp must be non-negative, got {p_perp}"));
    }
    let e = on_shell_energy(p_perp, p_z);
    let theta = p_perp.atan2(p_z);
    let phase = Complex64::from_polar(1.0, -(e * x.t - p_z * x.z));
    let rho = p_perp * x.r_perp;
    let mut out = Bispinor::zero();
    for sigma in SPINS {
        let d = wigner_d_half(sigma, lambda_prime, theta)?;
        if d == 0.0 {
            continue;
        }
        let order = (m_prime - sigma).twice() / 2;
        let j = bessel_j(order, rho);
        if j == 0.0 {
            continue;
        }
        let c = i_pow(-sigma) * Complex64::from_polar(d * j, f64::from(order) * x.phi_r);
        out = out + basis_bispinor(sigma, e, lambda_prime, ELECTRON_MASS_EV)? * c;
    }
    Ok(out * phase)
}

/// Photon Bessel mode with TAM `m` and helicity `lambda_g`.
pub fn photon_bessel_mode(
    omega: f64,
    k_perp: f64,
    k_z: f64,
    m: i32,
    lambda_g: i32,
    x: &SpaceTimePoint,
) -> Result<PolVector3> {
    if lambda_g != 1 && lambda_g != -1 {
        return domain(format!("photon helicity must be ±1, got {lambda_g}"));
    }
    let theta_g = k_perp.atan2(k_z);
    let phase = Complex64::from_polar(1.0, -(omega * x.t - k_z * x.z));
    let rho = k_perp * x.r_perp;
    let mut out = PolVector3::zero();
    for sg in -1..=1 {
        let d = wigner_d_one(sg, lambda_g, theta_g)?;
        if d == 0.0 {
            continue;
        }
        let order = m - sg;
        let j = bessel_j(order, rho);
        let c = i_pow(HalfInt::from_int(-sg)) * Complex64::from_polar(d * j, f64::from(order) * x.phi_r);
        out = out + chi(sg)? * c;
    }
    Ok(out * phase)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinearPol {
    Parallel,
    Perp,
}

/// Linearly polarized photon Bessel mode: `-(A_+ - A_-)/sqrt2` or `i(A_+ + A_-)/sqrt2`.
pub fn photon_linear_mode(
    omega: f64,
    k_perp: f64,
    k_z: f64,
    m: i32,
    pol: LinearPol,
    x: &SpaceTimePoint,
) -> Result<PolVector3> {
    let ap = photon_bessel_mode(omega, k_perp, k_z, m, 1, x)?;
    let am = photon_bessel_mode(omega, k_perp, k_z, m, -1, x)?;
    Ok(match pol {
        LinearPol::Parallel => (ap - am) * (-FRAC_1_SQRT_2),
        LinearPol::Perp => (ap + am) * Complex64::new(0.0, FRAC_1_SQRT_2),
    })
}

fn check_cone_electron(lambda: HalfInt) -> Result<()> {
    if lambda.is_spin_half() {
        Ok(())
    } else {
        domain(format!("electron helicity must be ±1/2, got {lambda}"))
    }
}

/// Plane-wave initial electron along `z`: all terms at one frequency.
///
/// Every label carries two rows, one per `phi_g` hemisphere, each with half
/// of the hemisphere-summed weight
/// `i^{lambda+1} (-1)^{m_g} (M_{lambda,0} - M_{lambda,2lambda}) / (v (2E)^{3/2})`.
pub fn evolved_pw_coefficients(
    e: f64,
    lambda: HalfInt,
    medium: &MediumModel,
    omega: f64,
    truncation: &ModeTruncation,
) -> Result<Vec<EvolvedCoefficient>> {
    check_cone_electron(lambda)?;
    let cos0 = cherenkov_cos_angle(e, omega, medium)?;
    let theta0 = cos0.acos();
    let v = velocity(e, ELECTRON_MASS_EV)?;
    let p = momentum(e, ELECTRON_MASS_EV)?;
    let k = omega * medium.n(omega)?;
    let modes = ModeMomenta { k_perp: k * theta0.sin(), k_z: k * cos0, p_perp: k * theta0.sin(), p_z: p - k * cos0 };
    let theta_p = modes.p_perp.atan2(modes.p_z);
    let ep = e - omega;
    let pref = i_pow(lambda.add_int(1)) / (v * (2.0 * e).powf(1.5));
    let mut out = Vec::new();
    for lambda_p in SPINS {
        for lambda_g in PHOTON_HELICITIES {
            let diff = back_to_back_difference(lambda, lambda_p, lambda_g, e, ep, theta_p, theta0)?;
            for m_g in -truncation.max_abs_m..=truncation.max_abs_m {
                let sign = if m_g % 2 == 0 { 1.0 } else { -1.0 };
                let weight = pref * (sign * diff);
                for branch in [Branch::Plus, Branch::Minus] {
                    out.push(EvolvedCoefficient {
                        m_prime: lambda.sub_int(m_g),
                        lambda_prime: lambda_p,
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
    }
    Ok(out)
}

pub(crate) fn geometry_modes(p: f64, k: f64, g: &AngularGeometry) -> ModeMomenta {
    let pz = p * g.theta.cos() - k * g.theta_g.cos();
    ModeMomenta { k_perp: k * g.theta_g.sin(), k_z: k * g.theta_g.cos(), p_perp: pz * g.theta_p.tan(), p_z: pz }
        .fix_perp(p, k, g)
}

impl ModeMomenta {
    // tan breaks down at theta' = pi/2; recompute p'_perp from the vector sum
    fn fix_perp(mut self, p: f64, k: f64, g: &AngularGeometry) -> Self {
        let px = p * g.theta.sin() * g.delta.cos() - k * g.theta_g.sin();
        let py = p * g.theta.sin() * g.delta.sin();
        self.p_perp = px.hypot(py);
        self
    }
}

/// Twisted initial electron (TAM `m`, cone angle `theta`): all terms at one
/// `(omega, theta_g)` node; weight `i F C / (v (2E)^{3/2})`.
#[allow(clippy::too_many_arguments)]
pub fn evolved_tw_coefficients(
    e: f64,
    lambda: HalfInt,
    m: HalfInt,
    theta: f64,
    medium: &MediumModel,
    omega: f64,
    theta_g: f64,
    truncation: &ModeTruncation,
) -> Result<Vec<EvolvedCoefficient>> {
    check_cone_electron(lambda)?;
    if !m.is_half_odd() {
        return domain(format!("electron TAM must be half-integer, got {m}"));
    }
    let g = AngularGeometry::vc(e, omega, medium, theta, theta_g)?;
    let v = velocity(e, ELECTRON_MASS_EV)?;
    let p = momentum(e, ELECTRON_MASS_EV)?;
    let k = omega * medium.n(omega)?;
    let modes = geometry_modes(p, k, &g);
    let pref = Complex64::new(0.0, g.weight_f / (v * (2.0 * e).powf(1.5)));
    let mut out = Vec::new();
    for lambda_p in SPINS {
        for lambda_g in PHOTON_HELICITIES {
            for m_g in -truncation.max_abs_m..=truncation.max_abs_m {
                let c = twisted_c(lambda, lambda_p, lambda_g, m, m_g, e, omega, &g)?;
                out.push(EvolvedCoefficient {
                    m_prime: m.sub_int(m_g),
                    lambda_prime: lambda_p,
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
    }
    Ok(out)
}

/// Frequencies of the grid with Cherenkov emission, and their trapezoid weights.
fn emitting_grid(e: f64, medium: &MediumModel, grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    let mut kept = Vec::new();
    let mut last_err = None;
    for &w in grid {
        match cherenkov_cos_angle(e, w, medium) {
            Ok(_) => kept.push(w),
            Err(err @ (VcError::NoCherenkovEmission { .. } | VcError::Domain(_))) => last_err = Some(err),
            Err(err) => return Err(err),
        }
    }
    if kept.is_empty() {
        return Err(last_err.unwrap_or_else(|| VcError::Domain("empty frequency grid".into())));
    }
    let w = trapezoid_weights(&kept)?;
    Ok(kept.into_iter().zip(w).collect())
}

/// Plane-wave table over the frequency grid, with `d(omega n)/n` folded into `measure`.
pub fn evolved_pw_table(
    e: f64,
    lambda: HalfInt,
    medium: &MediumModel,
    truncation: &ModeTruncation,
) -> Result<Vec<EvolvedCoefficient>> {
    let grid = emitting_grid(e, medium, &truncation.omega_grid)?;
    let chunks: Result<Vec<Vec<EvolvedCoefficient>>> = grid
        .par_iter()
        .map(|&(w, tw)| {
            let jac = medium.d_omega_n(w)? / medium.n(w)?;
            let mut c = evolved_pw_coefficients(e, lambda, medium, w, truncation)?;
            c.iter_mut().for_each(|x| x.measure = tw * jac);
            Ok(c)
        })
        .collect();
    Ok(chunks?.into_iter().flatten().collect())
}

/// Twisted table over the frequency grid and `theta_grid_size` sine-substitution
/// nodes of the overlap interval at each frequency.
pub fn evolved_tw_table(
    e: f64,
    lambda: HalfInt,
    m: HalfInt,
    theta: f64,
    medium: &MediumModel,
    truncation: &ModeTruncation,
) -> Result<Vec<EvolvedCoefficient>> {
    let grid = emitting_grid(e, medium, &truncation.omega_grid)?;
    let mut nodes = Vec::new();
    for &(w, tw) in &grid {
        let theta0 = cherenkov_cos_angle(e, w, medium)?.acos();
        let jac = medium.d_omega_n(w)? / medium.n(w)?;
        let iv = overlap_interval(theta, theta0)?;
        for (tg, wg) in sine_substitution_nodes(&iv, truncation.theta_grid_size) {
            if iv.contains(tg) {
                nodes.push((w, tg, tw * jac * wg * tg.sin()));
            }
        }
    }
    let chunks: Result<Vec<Vec<EvolvedCoefficient>>> = nodes
        .par_iter()
        .map(|&(w, tg, meas)| {
            let mut c = evolved_tw_coefficients(e, lambda, m, theta, medium, w, tg, truncation)?;
            c.iter_mut().for_each(|x| x.measure = meas);
            Ok(c)
        })
        .collect();
    Ok(chunks?.into_iter().flatten().collect())
}

/// Sum the two hemisphere rows of each label into one row with `branch = None`.
pub fn merge_branches(coefficients: &[EvolvedCoefficient]) -> Vec<EvolvedCoefficient> {
    let mut out: Vec<EvolvedCoefficient> = Vec::new();
    for c in coefficients {
        let same = |o: &EvolvedCoefficient| {
            o.m_prime == c.m_prime
                && o.lambda_prime == c.lambda_prime
                && o.m_gamma == c.m_gamma
                && o.lambda_gamma == c.lambda_gamma
                && o.omega == c.omega
                && o.theta_g == c.theta_g
        };
        if c.branch.is_some() {
            if let Some(o) = out.iter_mut().rev().find(|o| same(o)) {
                o.weight += c.weight;
                continue;
            }
        }
        let mut n = *c;
        n.branch = None;
        out.push(n);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialElectron {
    PlaneWave { energy: f64, lambda: HalfInt },
    Twisted { energy: f64, lambda: HalfInt, m: HalfInt, theta: f64 },
}

/// Relative residuals of the conservation laws for the supplied momenta.
#[derive(Clone, Debug, PartialEq)]
pub struct ConservationReport {
    /// Named residuals, each divided by `|p|`.
    pub residuals: Vec<(&'static str, f64)>,
    pub on_shell: bool,
}

impl ConservationReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|(_, r)| r.abs()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentumCoefficient {
    /// Bispinor (rows) times polarization vector (columns); zero off shell.
    pub value: SpinorPolarization,
    pub branch: Option<Branch>,
    pub report: ConservationReport,
}

/// Relative tolerance on conservation residuals.
pub const CONSERVATION_TOLERANCE: f64 = 1e-9;

fn norm_factor(e: f64, ep: f64, omega: f64, n: f64) -> f64 {
    (4.0 * PI / (2.0 * e * 2.0 * ep * 2.0 * omega * n * n)).sqrt()
}

fn spherical(v: [f64; 3]) -> (f64, f64, f64) {
    let perp = v[0].hypot(v[1]);
    let mag = perp.hypot(v[2]);
    (mag, perp.atan2(v[2]), v[1].atan2(v[0]).rem_euclid(2.0 * PI))
}

/// Momentum-space evolved state: the factor multiplying `(2 pi)^4 delta(...)`.
pub fn momentum_rep_coefficient(
    initial: InitialElectron,
    p_prime: [f64; 3],
    k: [f64; 3],
    medium: &MediumModel,
) -> Result<MomentumCoefficient> {
    let zero = [[Complex64::new(0.0, 0.0); 3]; 4];
    let (e, lambda) = match initial {
        InitialElectron::PlaneWave { energy, lambda } | InitialElectron::Twisted { energy, lambda, .. } => {
            (energy, lambda)
        }
    };
    check_cone_electron(lambda)?;
    let p = momentum(e, ELECTRON_MASS_EV)?;
    let (pp, theta_p, _) = spherical(p_prime);
    let (kk, theta_g, phi_g) = spherical(k);
    let ep = on_shell_energy(0.0, pp);
    let omega = e - ep;
    let mut residuals = Vec::new();
    let shell = if omega > 0.0 {
        match medium.n(omega) {
            Ok(n) => (kk - omega * n) / p,
            Err(_) => f64::INFINITY,
        }
    } else {
        f64::INFINITY
    };
    residuals.push(("photon_shell", shell));
    match initial {
        InitialElectron::PlaneWave { .. } => {
            residuals.push(("p_x", (p_prime[0] + k[0]) / p));
            residuals.push(("p_y", (p_prime[1] + k[1]) / p));
            residuals.push(("p_z", (p_prime[2] + k[2] - p) / p));
        }
        InitialElectron::Twisted { theta, .. } => {
            let sx = p_prime[0] + k[0];
            let sy = p_prime[1] + k[1];
            residuals.push(("p_z", (p_prime[2] + k[2] - p * theta.cos()) / p));
            residuals.push(("p_perp", (sx.hypot(sy) - p * theta.sin()) / p));
        }
    }
    let on_shell = residuals.iter().all(|(_, r)| r.abs() <= CONSERVATION_TOLERANCE);
    let mut report = ConservationReport { residuals, on_shell };
    if !on_shell {
        return Ok(MomentumCoefficient { value: zero, branch: None, report });
    }
    let n = medium.n(omega)?;
    let nf = norm_factor(e, ep, omega, n);
    match initial {
        InitialElectron::PlaneWave { .. } => {
            let branch = Branch::for_photon_azimuth(phi_g);
            let s = helicity_sum_s(lambda, e, ep, theta_p, theta_g, phi_g)?;
            let c = Complex64::new(0.0, nf) * Complex64::from_polar(1.0, lambda.value() * branch.final_azimuth(phi_g));
            let value = s.map(|row| row.map(|x| c * x));
            Ok(MomentumCoefficient { value, branch: Some(branch), report })
        }
        InitialElectron::Twisted { m, theta, .. } => {
            if !m.is_half_odd() {
                return domain(format!("electron TAM must be half-integer, got {m}"));
            }
            let theta0 = cherenkov_cos_angle(e, omega, medium)?.acos();
            let g = match AngularGeometry::from_momenta(p, kk, theta, theta_g, theta0) {
                Ok(g) => g,
                Err(VcError::OutsideOverlap { .. }) => {
                    report.on_shell = false;
                    return Ok(MomentumCoefficient { value: zero, branch: None, report });
                }
                Err(err) => return Err(err),
            };
            let v = velocity(e, ELECTRON_MASS_EV)?;
            let pref = i_pow(HalfInt::from_int(1) - m) * ((e - omega) * nf / (v * e * omega * n) * g.weight_f);
            let mut value = zero;
            for lambda_p in SPINS {
                for lambda_g in PHOTON_HELICITIES {
                    let pol = crate::spin_basis::photon_polarization_vector(theta_g, phi_g, lambda_g)?;
                    for sigma_p in SPINS {
                        let dp = wigner_d_half(sigma_p, lambda_p, g.theta_p)?;
                        let u = basis_bispinor(sigma_p, ep, lambda_p, ELECTRON_MASS_EV)?;
                        let mut amp = 0.0;
                        for sigma in SPINS {
                            for sigma_g in [0, sigma.twice()] {
                                let l = HelicityLabels::new(lambda, lambda_p, lambda_g, sigma, sigma_g)?;
                                let mc = m_coefficient(&l, e, omega, g.theta, g.theta_p, g.theta_g)?;
                                let a = f64::from((m - sigma).twice() / 2) * g.delta
                                    + f64::from((sigma - sigma_p).twice() / 2 - sigma_g) * g.delta_p;
                                amp += mc * a.cos();
                            }
                        }
                        let ph = Complex64::from_polar(dp * amp, f64::from((m - sigma_p).twice() / 2) * phi_g);
                        let o = outer(&u, &pol);
                        for r in 0..4 {
                            for c in 0..3 {
                                value[r][c] += pref * ph * o[r][c];
                            }
                        }
                    }
                }
            }
            Ok(MomentumCoefficient { value, branch: None, report })
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WavefunctionSample {
    /// Electron bispinor index (rows) by photon vector index (columns).
    pub value: SpinorPolarization,
    /// Bound on the omitted `|m_g| > max_abs_m` terms.
    pub tail_bound: f64,
    pub truncation_warning: bool,
}

/// `ln((x/2)^n / n!)`, the log of a bound on `|J_n(x)|`.
fn ln_bessel_bound(n: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0.0 { 0.0 } else { f64::NEG_INFINITY };
    }
    let mut lnfact = 0.0;
    let mut k = 2.0;
    while k <= n {
        lnfact += f64::ln(k);
        k += 1.0;
    }
    n * (0.5 * x).ln() - lnfact
}

fn bessel_bound(n: i32, x: f64) -> f64 {
    if n <= 0 {
        1.0
    } else {
        ln_bessel_bound(f64::from(n), x).exp().min(1.0)
    }
}

/// `sum measure * weight * psi(x_e) (x) A(x_g)` over the coefficients.
pub fn sample_wavefunction(
    coefficients: &[EvolvedCoefficient],
    x_e: &SpaceTimePoint,
    x_g: &SpaceTimePoint,
    truncation: &ModeTruncation,
) -> Result<WavefunctionSample> {
    let parts: Result<Vec<SpinorPolarization>> = coefficients
        .par_iter()
        .map(|c| {
            let psi = electron_bessel_mode(c.modes.p_perp, c.modes.p_z, c.m_prime, c.lambda_prime, x_e)?;
            let a = photon_bessel_mode(c.omega, c.modes.k_perp, c.modes.k_z, c.m_gamma, c.lambda_gamma, x_g)?;
            let w = c.weight * c.measure;
            Ok(outer(&psi, &a).map(|row| row.map(|v| v * w)))
        })
        .collect();
    let mut value = [[Complex64::new(0.0, 0.0); 3]; 4];
    for p in parts? {
        for r in 0..4 {
            for c in 0..3 {
                value[r][c] += p[r][c];
            }
        }
    }

    // Omitted terms have |m_g| > M, so Bessel orders at least M - 1 in the
    // photon mode and M - 3/2 rounded up in the electron mode.
    let m = truncation.max_abs_m;
    let mut tail = 0.0;
    let mut largest = 0.0f64;
    for c in coefficients {
        let w = (c.weight * c.measure).norm();
        largest = largest.max(w);
        if c.m_gamma.abs() != m {
            continue;
        }
        let xg = c.modes.k_perp * x_g.r_perp;
        let xe = c.modes.p_perp * x_e.r_perp;
        let ep = on_shell_energy(c.modes.p_perp, c.modes.p_z);
        let mut s = 0.0;
        for extra in 1..=60 {
            let mg = m + extra;
            s += 3.0 * bessel_bound(mg - 1, xg) * 2.0 * bessel_bound(mg - 2, xe);
        }
        tail += w * (2.0 * ep).sqrt() * s;
    }
    let scale = value.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    let reference = if scale > 0.0 { scale } else { largest };
    let truncation_warning = tail > TAIL_TOLERANCE * reference;
    Ok(WavefunctionSample { value, tail_bound: tail, truncation_warning })
}

#[cfg(test)]
mod tests {
    use super::*;

    const H: HalfInt = HalfInt::HALF;

    #[test]
    fn electron_mode_on_axis() {
        let x = SpaceTimePoint::new(0.0, 0.0, 0.3, 0.0).unwrap();
        for mt in [-3, -1, 1, 3] {
            let mp = HalfInt::from_twice(mt);
            let psi = electron_bessel_mode(2e4, 6e5, mp, H, &x).unwrap();
            if mp.is_spin_half() {
                assert!(psi.norm_sqr() > 0.0);
            } else {
                assert_eq!(psi.norm_sqr(), 0.0);
            }
        }
    }

    #[test]
    fn electron_mode_plane_wave_limit() {
        let (pz, t, z) = (6e5, 1e-6, 3e-6);
        let x = SpaceTimePoint::new(t, 0.0, 0.0, z).unwrap();
        let e = on_shell_energy(0.0, pz);
        for l in SPINS {
            let psi = electron_bessel_mode(0.0, pz, l, l, &x).unwrap();
            let want = basis_bispinor(l, e, l, ELECTRON_MASS_EV).unwrap()
                * (i_pow(-l) * Complex64::from_polar(1.0, -(e * t - pz * z)));
            assert!(psi.max_abs_diff(&want) < 1e-9 * want.norm_sqr().sqrt());
            assert_eq!(electron_bessel_mode(0.0, pz, -l, l, &x).unwrap().norm_sqr(), 0.0);
        }
    }

    #[test]
    fn photon_mode_plane_wave_limit() {
        let x = SpaceTimePoint::new(0.4, 0.0, 0.0, 0.2).unwrap();
        for l in PHOTON_HELICITIES {
            let a = photon_bessel_mode(2.0, 0.0, 2.6, l, l, &x).unwrap();
            let want = chi(l).unwrap() * (i_pow(HalfInt::from_int(-l)) * Complex64::from_polar(1.0, -(0.8 - 0.52)));
            assert!(a.max_abs_diff(&want) < 1e-14);
        }
        assert!(photon_bessel_mode(2.0, 1.0, 2.6, 0, 0, &x).is_err());
    }

    #[test]
    fn tam_bookkeeping() {
        let m = MediumModel::constant(1.33).unwrap();
        let e = 300e3 + ELECTRON_MASS_EV;
        let tr = ModeTruncation::single(2.25);
        let pw = evolved_pw_coefficients(e, H, &m, 2.25, &tr).unwrap();
        assert_eq!(pw.len(), 4 * (2 * 32 + 1) * 2);
        assert!(pw.iter().all(|c| c.m_prime.add_int(c.m_gamma) == H));
        let tw = evolved_tw_coefficients(e, H, HalfInt::from_twice(5), 0.2, &m, 2.25, 0.25, &tr).unwrap();
        assert!(tw.iter().all(|c| c.m_prime.add_int(c.m_gamma) == HalfInt::from_twice(5)));
    }

    #[test]
    fn merge_sums_hemispheres() {
        let m = MediumModel::constant(1.33).unwrap();
        let e = 300e3 + ELECTRON_MASS_EV;
        let tr = ModeTruncation::new(2, vec![2.25], 4).unwrap();
        let pw = evolved_pw_coefficients(e, H, &m, 2.25, &tr).unwrap();
        let merged = merge_branches(&pw);
        assert_eq!(merged.len(), pw.len() / 2);
        for (i, c) in merged.iter().enumerate() {
            assert_eq!(c.weight, pw[2 * i].weight + pw[2 * i + 1].weight);
            assert!(c.branch.is_none());
        }
    }

    #[test]
    fn bessel_bound_is_a_bound() {
        for n in 1..30 {
            for &x in &[0.5, 3.0, 10.0, 25.0] {
                assert!(bessel_j(n, x).abs() <= bessel_bound(n, x) + 1e-15);
            }
        }
    }
}
