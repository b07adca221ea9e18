//! Medium model, particle kinematics, Cherenkov cone and cone-overlap interval.

use std::f64::consts::PI;
use std::path::Path;

use crate::error::{domain, Result, VcError};
use crate::numerics::{HalfInt, SingularInterval};

/// Electron mass, eV.
pub const ELECTRON_MASS_EV: f64 = 510_998.95;
/// Fine-structure constant.
pub const ALPHA: f64 = 1.0 / 137.035_999;

#[derive(Clone, Debug, PartialEq)]
pub enum RefractiveIndex {
    Constant(f64),
    /// `(omega_eV, n)` pairs, omega strictly increasing; linear interpolation.
    Tabulated(Vec<(f64, f64)>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct MediumModel {
    pub index: RefractiveIndex,
    /// Treat `d(omega n) = n d(omega)`.
    pub weak_dispersion: bool,
}

impl MediumModel {
    pub fn constant(n: f64) -> Result<Self> {
        if !(n.is_finite() && n > 0.0) {
            return domain(format!("refractive index must be positive, got {n}"));
        }
        Ok(Self { index: RefractiveIndex::Constant(n), weak_dispersion: true })
    }

    pub fn tabulated(table: Vec<(f64, f64)>) -> Result<Self> {
        if table.len() < 2 {
            return domain("refractive-index table needs at least two rows");
        }
        if table.iter().any(|&(w, n)| !(w.is_finite() && n.is_finite() && n > 0.0)) {
            return domain("refractive-index table has a non-positive or non-finite entry");
        }
        if table.windows(2).any(|p| !(p[1].0 > p[0].0)) {
            return domain("refractive-index table: omega must be strictly increasing");
        }
        Ok(Self { index: RefractiveIndex::Tabulated(table), weak_dispersion: false })
    }

    pub fn with_weak_dispersion(mut self, weak: bool) -> Self {
        self.weak_dispersion = weak;
        self
    }

    /// Parse a two-column `omega_eV n` table; `#` starts a comment, commas
    /// and whitespace both separate columns.
    pub fn parse_table(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> =
                line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
            if cols.len() != 2 {
                return domain(format!("medium table line {}: expected 2 columns", lineno + 1));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| VcError::Domain(format!("medium table line {}: bad number {s:?}", lineno + 1)))
            };
            rows.push((parse(cols[0])?, parse(cols[1])?));
        }
        Self::tabulated(rows)
    }

    pub fn load_table(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| VcError::Domain(format!("cannot read medium table {}: {e}", path.display())))?;
        Self::parse_table(&text)
    }

    pub fn n(&self, omega: f64) -> Result<f64> {
        match &self.index {
            RefractiveIndex::Constant(n) => Ok(*n),
            RefractiveIndex::Tabulated(t) => {
                let (w0, wn) = (t[0].0, t[t.len() - 1].0);
                if !(omega >= w0 && omega <= wn) {
                    return domain(format!("omega = {omega} eV outside the table range [{w0}, {wn}]"));
                }
                let i = t.partition_point(|&(w, _)| w <= omega).clamp(1, t.len() - 1);
                let (a, b) = (t[i - 1], t[i]);
                let s = (omega - a.0) / (b.0 - a.0);
                Ok(a.1 + s * (b.1 - a.1))
            }
        }
    }

    /// `d(omega n)/d omega`; `n` itself under weak dispersion.
    pub fn d_omega_n(&self, omega: f64) -> Result<f64> {
        let n = self.n(omega)?;
        match &self.index {
            RefractiveIndex::Constant(_) => Ok(n),
            RefractiveIndex::Tabulated(_) if self.weak_dispersion => Ok(n),
            RefractiveIndex::Tabulated(t) => {
                let (w0, wn) = (t[0].0, t[t.len() - 1].0);
                let h = 1e-6 * omega.abs().max(wn - w0);
                let lo = (omega - h).max(w0);
                let hi = (omega + h).min(wn);
                Ok((hi * self.n(hi)? - lo * self.n(lo)?) / (hi - lo))
            }
        }
    }
}

/// `v = |p|/E`.
pub fn velocity(energy: f64, mass: f64) -> Result<f64> {
    if !(mass > 0.0 && energy >= mass) {
        return domain(format!("need E >= m > 0, got E = {energy}, m = {mass}"));
    }
    Ok(((energy - mass) * (energy + mass)).sqrt() / energy)
}

/// `|p| = sqrt(E^2 - m^2)`.
pub fn momentum(energy: f64, mass: f64) -> Result<f64> {
    if !(mass >= 0.0 && energy >= mass) {
        return domain(format!("need E >= m >= 0, got E = {energy}, m = {mass}"));
    }
    Ok(((energy - mass) * (energy + mass)).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ElectronShape {
    PlaneWave,
    Bessel { p_perp: f64, p_z: f64, tam: HalfInt },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElectronState {
    pub energy: f64,
    pub mass: f64,
    pub helicity: HalfInt,
    pub shape: ElectronShape,
}

impl ElectronState {
    /// Plane wave along `z`.
    pub fn plane_wave(energy: f64, helicity: HalfInt) -> Result<Self> {
        check_helicity(helicity)?;
        velocity(energy, ELECTRON_MASS_EV)?;
        Ok(Self { energy, mass: ELECTRON_MASS_EV, helicity, shape: ElectronShape::PlaneWave })
    }

    pub fn from_kinetic(kinetic: f64, helicity: HalfInt) -> Result<Self> {
        if !(kinetic >= 0.0) {
            return domain(format!("kinetic energy must be non-negative, got {kinetic}"));
        }
        Self::plane_wave(kinetic + ELECTRON_MASS_EV, helicity)
    }

    /// Bessel state with opening angle `theta` and TAM projection `tam`.
    pub fn bessel(energy: f64, theta: f64, tam: HalfInt, helicity: HalfInt) -> Result<Self> {
        check_helicity(helicity)?;
        if !tam.is_half_odd() {
            return domain(format!("electron TAM must be half-integer, got {tam}"));
        }
        if !(0.0..PI).contains(&theta) {
            return domain(format!("opening angle {theta} outside [0, pi)"));
        }
        let p = momentum(energy, ELECTRON_MASS_EV)?;
        Ok(Self {
            energy,
            mass: ELECTRON_MASS_EV,
            helicity,
            shape: ElectronShape::Bessel { p_perp: p * theta.sin(), p_z: p * theta.cos(), tam },
        })
    }

    pub fn velocity(&self) -> f64 {
        ((self.energy - self.mass) * (self.energy + self.mass)).sqrt() / self.energy
    }

    pub fn momentum(&self) -> f64 {
        ((self.energy - self.mass) * (self.energy + self.mass)).sqrt()
    }

    pub fn opening_angle(&self) -> f64 {
        match self.shape {
            ElectronShape::PlaneWave => 0.0,
            ElectronShape::Bessel { p_perp, p_z, .. } => p_perp.atan2(p_z),
        }
    }

    /// TAM projection; for a plane wave along `z` it equals the helicity.
    pub fn tam(&self) -> HalfInt {
        match self.shape {
            ElectronShape::PlaneWave => self.helicity,
            ElectronShape::Bessel { tam, .. } => tam,
        }
    }
}

fn check_helicity(h: HalfInt) -> Result<()> {
    if h.is_spin_half() {
        Ok(())
    } else {
        domain(format!("electron helicity must be ±1/2, got {h}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhotonPolarization {
    Helicity(i32),
    LinearParallel,
    LinearPerp,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhotonMode {
    pub omega: f64,
    pub k_perp: f64,
    pub k_z: f64,
    pub tam: i32,
    pub pol: PhotonPolarization,
}

impl PhotonMode {
    pub fn new(omega: f64, theta_g: f64, tam: i32, pol: PhotonPolarization, medium: &MediumModel) -> Result<Self> {
        if !(omega > 0.0) {
            return domain(format!("photon energy must be positive, got {omega}"));
        }
        if !(theta_g > 0.0 && theta_g < PI) {
            return domain(format!("photon polar angle {theta_g} outside (0, pi)"));
        }
        if let PhotonPolarization::Helicity(l) = pol {
            if l != 1 && l != -1 {
                return domain(format!("photon helicity must be ±1, got {l}"));
            }
        }
        let k = omega * medium.n(omega)?;
        Ok(Self { omega, k_perp: k * theta_g.sin(), k_z: k * theta_g.cos(), tam, pol })
    }

    pub fn theta_g(&self) -> f64 {
        self.k_perp.atan2(self.k_z)
    }

    pub fn k(&self) -> f64 {
        self.k_perp.hypot(self.k_z)
    }
}

/// `cos theta_kp = 1/(vn) + (omega/2E)(n^2 - 1)/(vn)`, required to lie in (0, 1).
pub fn cherenkov_cos_angle(energy: f64, omega: f64, medium: &MediumModel) -> Result<f64> {
    if !(omega > 0.0 && omega < energy - ELECTRON_MASS_EV) {
        return domain(format!("photon energy {omega} eV outside (0, E - m_e) = (0, {})", energy - ELECTRON_MASS_EV));
    }
    let v = velocity(energy, ELECTRON_MASS_EV)?;
    let n = medium.n(omega)?;
    let vn = v * n;
    let c = 1.0 / vn + omega / (2.0 * energy) * (n * n - 1.0) / vn;
    if c > 0.0 && c < 1.0 {
        Ok(c)
    } else {
        Err(VcError::NoCherenkovEmission { cos_theta: c })
    }
}

/// Photon polar-angle range reachable from an electron cone of half-angle
/// `theta` with emission angle `theta0`.
///
/// The upper end is `theta + theta0` unless the emission cone wraps around
/// the `-z` axis, in which case it is `2 pi - theta - theta0`.
pub fn overlap_interval(theta: f64, theta0: f64) -> Result<SingularInterval> {
    for (name, a) in [("theta", theta), ("theta0", theta0)] {
        if !(0.0..=PI).contains(&a) {
            return domain(format!("{name} = {a} outside [0, pi]"));
        }
    }
    if theta == 0.0 && theta0 == 0.0 {
        return domain("degenerate cone overlap: theta = theta0 = 0");
    }
    let lower = (theta - theta0).abs();
    let upper = (theta + theta0).min(2.0 * PI - theta - theta0);
    SingularInterval::new(lower, upper)
        .map_err(|_| VcError::Domain(format!("empty cone overlap for theta = {theta}, theta0 = {theta0}")))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConeGeometry {
    pub theta0: f64,
    pub theta: f64,
    pub interval: SingularInterval,
}

impl ConeGeometry {
    pub fn new(theta: f64, theta0: f64) -> Result<Self> {
        Ok(Self { theta0, theta, interval: overlap_interval(theta, theta0)? })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseSpaceWeight {
    /// `(E - omega) omega n / (v E)`, per `d(omega n)`.
    pub per_d_omega_n: f64,
    /// `d(omega n)/d omega`.
    pub jacobian: f64,
}

impl PhaseSpaceWeight {
    pub fn per_d_omega(&self) -> f64 {
        self.per_d_omega_n * self.jacobian
    }
}

pub fn phase_space_weight(energy: f64, omega: f64, medium: &MediumModel) -> Result<PhaseSpaceWeight> {
    if !(omega > 0.0 && omega < energy - ELECTRON_MASS_EV) {
        return domain(format!("photon energy {omega} eV outside (0, E - m_e) = (0, {})", energy - ELECTRON_MASS_EV));
    }
    let v = velocity(energy, ELECTRON_MASS_EV)?;
    let n = medium.n(omega)?;
    Ok(PhaseSpaceWeight {
        per_d_omega_n: (energy - omega) * omega * n / (v * energy),
        jacobian: medium.d_omega_n(omega)?,
    })
}

/// Classical cone: `sin theta0 = sqrt(1 - 1/(vn)^2)`.
pub fn sin_theta0_soft(v: f64, n: f64) -> Result<f64> {
    let vn = v * n;
    if !(vn > 1.0) {
        return Err(VcError::NoCherenkovEmission { cos_theta: 1.0 / vn });
    }
    Ok((1.0 - 1.0 / (vn * vn)).sqrt())
}
