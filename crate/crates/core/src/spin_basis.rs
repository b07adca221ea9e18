//! Basis bispinors, photon polarization vectors and their linear combinations.

use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::{Add, Index, Mul, Sub};

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::kinematics::ELECTRON_MASS_EV;
use crate::numerics::{wigner_d_half, wigner_d_one, HalfInt};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bispinor(pub [Complex64; 4]);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolVector3(pub [Complex64; 3]);

macro_rules! vector_ops {
    ($t:ident, $n:expr) => {
        impl $t {
            pub const fn zero() -> Self {
                $t([ZERO; $n])
            }

            /// `self^dagger . other`
            pub fn inner(&self, other: &Self) -> Complex64 {
                self.0.iter().zip(other.0.iter()).map(|(a, b)| a.conj() * b).sum()
            }

            pub fn norm_sqr(&self) -> f64 {
                self.0.iter().map(|a| a.norm_sqr()).sum()
            }

            pub fn scale(&self, c: Complex64) -> Self {
                $t(self.0.map(|a| a * c))
            }

            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
            }
        }

        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                let mut out = self.0;
                for (o, r) in out.iter_mut().zip(rhs.0.iter()) {
                    *o += r;
                }
                $t(out)
            }
        }

        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                let mut out = self.0;
                for (o, r) in out.iter_mut().zip(rhs.0.iter()) {
                    *o -= r;
                }
                $t(out)
            }
        }

        impl Mul<Complex64> for $t {
            type Output = $t;
            fn mul(self, c: Complex64) -> $t {
                self.scale(c)
            }
        }

        impl Mul<f64> for $t {
            type Output = $t;
            fn mul(self, c: f64) -> $t {
                $t(self.0.map(|a| a * c))
            }
        }

        impl Index<usize> for $t {
            type Output = Complex64;
            fn index(&self, i: usize) -> &Complex64 {
                &self.0[i]
            }
        }
    };
}

vector_ops!(Bispinor, 4);
vector_ops!(PolVector3, 3);

impl PolVector3 {
    pub fn real(x: f64, y: f64, z: f64) -> Self {
        PolVector3([Complex64::new(x, 0.0), Complex64::new(y, 0.0), Complex64::new(z, 0.0)])
    }

    /// `self^dagger . k` for a real vector `k`.
    pub fn dot_real(&self, k: [f64; 3]) -> Complex64 {
        self.0.iter().zip(k.iter()).map(|(a, &b)| a.conj() * b).sum()
    }
}

/// Outer product `psi (x) a` as a 4x3 array.
pub fn outer(psi: &Bispinor, a: &PolVector3) -> [[Complex64; 3]; 4] {
    let mut out = [[ZERO; 3]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = psi.0[i] * a.0[j];
        }
    }
    out
}

/// Two-spinor `w^(sigma)`: (1, 0) for +1/2, (0, 1) for -1/2.
fn w(sigma: HalfInt) -> [f64; 2] {
    if sigma.twice() > 0 {
        [1.0, 0.0]
    } else {
        [0.0, 1.0]
    }
}

/// `U^(sigma)(E, lambda) = (sqrt(E + m) w, 2 lambda sqrt(E - m) w)`.
pub fn basis_bispinor(sigma: HalfInt, energy: f64, lambda: HalfInt, mass: f64) -> Result<Bispinor> {
    if !sigma.is_spin_half() || !lambda.is_spin_half() {
        return domain(format!("spin labels must be ±1/2, got sigma = {sigma}, lambda = {lambda}"));
    }
    if !(energy >= mass && mass >= 0.0) {
        return domain(format!("need E >= m, got E = {energy}, m = {mass}"));
    }
    let up = (energy + mass).sqrt();
    let down = f64::from(lambda.twice()) * (energy - mass).sqrt();
    let ws = w(sigma);
    Ok(Bispinor([
        Complex64::new(up * ws[0], 0.0),
        Complex64::new(up * ws[1], 0.0),
        Complex64::new(down * ws[0], 0.0),
        Complex64::new(down * ws[1], 0.0),
    ]))
}

/// Helicity plane-wave bispinor `u_{p' lambda'}` for an electron of energy `E'`
/// moving along `(theta', phi')`.
pub fn electron_planewave_spinor(theta_p: f64, phi_p: f64, energy_p: f64, lambda_p: HalfInt) -> Result<Bispinor> {
    let mut u = Bispinor::zero();
    for sigma in [HalfInt::HALF, HalfInt::MINUS_HALF] {
        let d = wigner_d_half(sigma, lambda_p, theta_p)?;
        let phase = Complex64::from_polar(1.0, -sigma.value() * phi_p);
        u = u + basis_bispinor(sigma, energy_p, lambda_p, ELECTRON_MASS_EV)? * (phase * d);
    }
    Ok(u)
}

/// Spherical basis `chi_0 = (0,0,1)`, `chi_{±1} = ∓(1, ±i, 0)/sqrt2`.
pub fn chi(sigma_g: i32) -> Result<PolVector3> {
    let h = FRAC_1_SQRT_2;
    Ok(match sigma_g {
        0 => PolVector3::real(0.0, 0.0, 1.0),
        1 => PolVector3([Complex64::new(-h, 0.0), Complex64::new(0.0, -h), ZERO]),
        -1 => PolVector3([Complex64::new(h, 0.0), Complex64::new(0.0, -h), ZERO]),
        _ => return domain(format!("spherical index must be in {{-1, 0, 1}}, got {sigma_g}")),
    })
}

/// Helicity polarization vector `e_{k lambda_g}` for a photon along `(theta_g, phi_g)`.
pub fn photon_polarization_vector(theta_g: f64, phi_g: f64, lambda_g: i32) -> Result<PolVector3> {
    if lambda_g != 1 && lambda_g != -1 {
        return domain(format!("photon helicity must be ±1, got {lambda_g}"));
    }
    let mut e = PolVector3::zero();
    for sg in -1..=1 {
        let d = wigner_d_one(sg, lambda_g, theta_g)?;
        let phase = Complex64::from_polar(1.0, -f64::from(sg) * phi_g);
        e = e + chi(sg)? * (phase * d);
    }
    Ok(e)
}

/// `(e_par, e_perp)`: in the plane of `k` and `z`, and orthogonal to it.
pub fn linear_polarizations(theta_g: f64, phi_g: f64) -> (PolVector3, PolVector3) {
    let (st, ct) = theta_g.sin_cos();
    let (sp, cp) = phi_g.sin_cos();
    (PolVector3::real(ct * cp, ct * sp, -st), PolVector3::real(-sp, cp, 0.0))
}

/// Unit vector along `(theta, phi)`.
pub fn unit_vector(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

#[cfg(test)]
mod tests {
    use super::*;

    const H: HalfInt = HalfInt::HALF;
    const MH: HalfInt = HalfInt::MINUS_HALF;
    const M: f64 = ELECTRON_MASS_EV;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bispinor_at_rest() {
        for l in [H, MH] {
            let u = basis_bispinor(H, M, l, M).unwrap();
            assert_eq!(u.0, [c((2.0 * M).sqrt(), 0.0), ZERO, ZERO, ZERO]);
        }
    }

    #[test]
    fn bispinor_norm_and_orthogonality() {
        let e = 811e3;
        for l in [H, MH] {
            for s in [H, MH] {
                let u = basis_bispinor(s, e, l, M).unwrap();
                assert!((u.norm_sqr() - 2.0 * e).abs() < 1e-9 * e);
            }
            let a = basis_bispinor(H, e, l, M).unwrap();
            let b = basis_bispinor(MH, e, l, M).unwrap();
            assert_eq!(a.inner(&b), ZERO);
        }
        assert!(basis_bispinor(H, M - 1.0, H, M).is_err());
    }

    #[test]
    fn planewave_spinor_special_angles() {
        let e = 700e3;
        for l in [H, MH] {
            let u = electron_planewave_spinor(0.0, 0.9, e, l).unwrap();
            let want = basis_bispinor(l, e, l, M).unwrap();
            let phase = Complex64::from_polar(1.0, -l.value() * 0.9);
            assert!(u.max_abs_diff(&(want * phase)) < 1e-9);
        }
        // theta' = pi, lambda' = 1/2: d_{-1/2,1/2}(pi) = +1, so only U^(-1/2) e^{+i phi'/2}
        let phi = 0.7;
        let u = electron_planewave_spinor(std::f64::consts::PI, phi, e, H).unwrap();
        let want = basis_bispinor(MH, e, H, M).unwrap() * Complex64::from_polar(1.0, 0.5 * phi);
        assert!(u.max_abs_diff(&want) < 1e-9);
    }

    #[test]
    fn planewave_spinor_norm() {
        let e = 700e3;
        for &(th, ph) in &[(0.1, 0.2), (1.3, -2.0), (2.9, 4.0)] {
            for l in [H, MH] {
                let u = electron_planewave_spinor(th, ph, e, l).unwrap();
                assert!((u.norm_sqr() - 2.0 * e).abs() < 1e-9 * e);
            }
        }
    }

    // Helicity: (sigma . n) acting on the upper two-spinor gives 2 lambda.
    #[test]
    fn planewave_spinor_helicity() {
        let (th, ph) = (1.1, 0.4);
        let n = unit_vector(th, ph);
        for l in [H, MH] {
            let u = electron_planewave_spinor(th, ph, 700e3, l).unwrap();
            let (a, b) = (u.0[0], u.0[1]);
            // sigma.n = [[nz, nx - i ny], [nx + i ny, -nz]]
            let sa = a * n[2] + b * c(n[0], -n[1]);
            let sb = a * c(n[0], n[1]) - b * n[2];
            let l2 = f64::from(l.twice());
            assert!((sa - a * l2).norm() < 1e-9 && (sb - b * l2).norm() < 1e-9);
        }
    }

    #[test]
    fn chi_orthonormal() {
        for a in -1..=1 {
            for b in -1..=1 {
                let ip = chi(a).unwrap().inner(&chi(b).unwrap());
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((ip - c(want, 0.0)).norm() < 1e-15);
            }
        }
        assert!(chi(2).is_err());
    }

    #[test]
    fn polarization_vector_properties() {
        for l in [-1, 1] {
            let e = photon_polarization_vector(0.0, 0.0, l).unwrap();
            assert!(e.max_abs_diff(&chi(l).unwrap()) < 1e-15);
            let e = photon_polarization_vector(0.3, 1.1, l).unwrap();
            assert!((e.norm_sqr() - 1.0).abs() < 1e-14);
            assert!(e.dot_real(unit_vector(0.3, 1.1)).norm() < 1e-14);
        }
        assert!(photon_polarization_vector(0.3, 1.1, 0).is_err());
    }

    #[test]
    fn linear_from_helicity() {
        let (e0, f0) = linear_polarizations(0.0, 0.0);
        assert_eq!(e0, PolVector3::real(1.0, 0.0, 0.0));
        assert_eq!(f0, PolVector3::real(0.0, 1.0, 0.0));
        for &(th, ph) in &[(0.3, 1.1), (2.0, -0.5), (1.0, 3.0)] {
            let ep = photon_polarization_vector(th, ph, 1).unwrap();
            let em = photon_polarization_vector(th, ph, -1).unwrap();
            let (par, perp) = linear_polarizations(th, ph);
            let s2 = 2f64.sqrt();
            assert!((ep - em).max_abs_diff(&(par * -s2)) < 1e-14);
            assert!((ep + em).max_abs_diff(&(perp * c(0.0, -s2))) < 1e-14);
            assert!(par.inner(&perp).norm() < 1e-15);
            assert!(par.dot_real(unit_vector(th, ph)).norm() < 1e-15);
            assert!(perp.dot_real(unit_vector(th, ph)).norm() < 1e-15);
        }
    }

    // (-i d/dphi + S_z)[e(theta, phi) e^{i m phi}] = m e e^{i m phi}
    #[test]
    fn tam_eigenvalue() {
        let (th, ph, h) = (0.8, 0.6, 1e-5);
        for l in [-1, 1] {
            for m in -3..=3 {
                let f = |p: f64| {
                    photon_polarization_vector(th, p, l).unwrap() * Complex64::from_polar(1.0, f64::from(m) * p)
                };
                let v = f(ph);
                let deriv = (f(ph + h) - f(ph - h)) * (1.0 / (2.0 * h));
                let orbital = deriv * c(0.0, -1.0);
                let spin = PolVector3([c(0.0, -1.0) * v[1], c(0.0, 1.0) * v[0], ZERO]);
                let lhs = orbital + spin;
                assert!(lhs.max_abs_diff(&(v * f64::from(m))) < 1e-8, "l = {l}, m = {m}");
            }
        }
    }
}
