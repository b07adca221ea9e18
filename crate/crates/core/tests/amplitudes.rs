// reference values are quoted with every digit of their source
#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use vc_twist_core::amplitudes::*;
use vc_twist_core::angular::AngularGeometry;
use vc_twist_core::epa::epa_ultrarel_m_coefficient;
use vc_twist_core::kinematics::*;
use vc_twist_core::numerics::HalfInt;
use vc_twist_core::oracles::{helicity_sum_brute, relative_difference};
use vc_twist_core::spin_basis::{electron_planewave_spinor, linear_polarizations, outer};
use vc_twist_core::Complex64;

const H: HalfInt = HalfInt::HALF;
const MH: HalfInt = HalfInt::MINUS_HALF;
const M: f64 = ELECTRON_MASS_EV;
const T300: f64 = 300e3 + ELECTRON_MASS_EV;

fn water() -> MediumModel {
    MediumModel::constant(1.33).unwrap()
}

/// Final-electron polar angle for a plane-wave initial electron along `z`.
fn final_theta(e: f64, omega: f64, n: f64) -> (f64, f64) {
    let cos0 = cherenkov_cos_angle(e, omega, &MediumModel::constant(n).unwrap()).unwrap();
    let k = omega * n;
    let p = momentum(e, M).unwrap();
    let s0 = (1.0 - cos0 * cos0).sqrt();
    ((k * s0).atan2(p - k * cos0), cos0.acos())
}

#[test]
fn soft_planewave_amplitude() {
    let w = 2.25;
    let (tp, t0) = final_theta(T300, w, 1.33);
    let ve = momentum(T300, M).unwrap();
    for lambda in SPINS {
        for lg in PHOTON_HELICITIES {
            for phi_g in [0.4, 3.9] {
                let branch = Branch::for_photon_azimuth(phi_g);
                let a = mfi_back_to_back(lambda, lambda, lg, T300, w, tp, t0, phi_g, branch).unwrap();
                let want = Complex64::from_polar(
                    -f64::from(lg) * (8.0 * PI * ALPHA).sqrt() * ve * t0.sin(),
                    lambda.value() * branch.final_azimuth(phi_g),
                );
                assert!((a - want).norm() < 1e-3 * want.norm());
                let flip = mfi_back_to_back(lambda, -lambda, lg, T300, w, tp, t0, phi_g, branch).unwrap();
                assert!(flip.norm() < 1e-3 * want.norm());
            }
        }
    }
}

#[test]
fn back_to_back_matches_general_amplitude() {
    let (e, w) = (T300, 5e3);
    let (tp, t0) = final_theta(e, w, 1.33);
    for lambda in SPINS {
        for lp in SPINS {
            for lg in PHOTON_HELICITIES {
                for phi_g in [0.3, 2.0, 4.4] {
                    let branch = Branch::for_photon_azimuth(phi_g);
                    let phi_p = branch.final_azimuth(phi_g);
                    let a = mfi_planewave(lambda, lp, lg, e, w, tp, t0, phi_p, phi_g).unwrap();
                    let b = mfi_back_to_back(lambda, lp, lg, e, w, tp, t0, phi_g, branch).unwrap();
                    let c = mfi_general(lambda, lp, lg, e, w, (0.0, tp, t0), (0.0, phi_p, phi_g)).unwrap();
                    assert!((a - b).norm() < 1e-12 * a.norm().max(1.0));
                    assert!((a - c).norm() < 1e-12 * a.norm().max(1.0));
                    let rot = mfi_planewave(lambda, lp, lg, e, w, tp, t0, phi_p + 0.77, phi_g + 0.77).unwrap();
                    assert!((rot.norm() - a.norm()).abs() < 1e-12 * a.norm().max(1.0));
                }
            }
        }
    }
}

/// Soft twisted `C` in units of `-sqrt(8 pi alpha) (lambda_g G1 + G2)`, with the
/// worst relative deviation from `reference` over a sweep of geometries and labels.
fn soft_c_deviation(w: f64, reference: f64) -> f64 {
    let t0 = cherenkov_cos_angle(T300, w, &water()).unwrap().acos();
    let e_flip = energy_factor(T300, T300 - w, H, MH, M).unwrap().abs();
    let mut worst = 0.0f64;
    for theta_deg in [6.0, 12.0, 18.0] {
        let th = f64::to_radians(theta_deg);
        let iv = overlap_interval(th, t0).unwrap();
        for frac in [0.2, 0.5, 0.8] {
            let tg = iv.lower() + frac * (iv.upper() - iv.lower());
            let g = AngularGeometry::soft(th, tg, t0).unwrap();
            for lambda in SPINS {
                for mt in [-3, -1, 1, 5] {
                    let m = HalfInt::from_twice(mt);
                    for m_g in -4..=4 {
                        let (g1, g2) = soft_g1_g2(m_g, th, tg, g.delta);
                        for lg in PHOTON_HELICITIES {
                            let c = twisted_c(lambda, lambda, lg, m, m_g, T300, w, &g).unwrap();
                            let want = -(8.0 * PI * ALPHA).sqrt() * reference * (f64::from(lg) * g1 + g2);
                            let scale = (8.0 * PI * ALPHA).sqrt() * reference * th.sin().max(tg.sin());
                            worst = worst.max((c - want).abs() / scale);
                            // four terms, each at most sqrt(4 pi alpha) sqrt2 |E_{lambda,-lambda}|
                            let flip = twisted_c(lambda, -lambda, lg, m, m_g, T300, w, &g).unwrap();
                            assert!(flip.abs() <= 4.0 * (8.0 * PI * ALPHA).sqrt() * e_flip);
                        }
                    }
                }
            }
        }
    }
    worst
}

#[test]
fn soft_twisted_c_matches_g1_g2() {
    let ve = momentum(T300, M).unwrap();
    // with the exact energy factor the reduction is an identity
    for w in [0.5, 2.25] {
        let e_same = energy_factor(T300, T300 - w, H, H, M).unwrap();
        assert!(soft_c_deviation(w, 0.5 * e_same) < 1e-10);
    }
    assert!(soft_c_deviation(0.5, ve) < 1e-6);
    // E_{lambda lambda} = 2 vE (1 - omega E / (2 p^2)) + O(omega^2)
    let w = 2.25;
    let shift = w * T300 / (2.0 * ve * ve);
    assert!(shift > 1e-6);
    assert!(soft_c_deviation(w, ve * (1.0 - shift)) < 1e-9);
}

#[test]
fn twisted_c_small_cone_limit() {
    let w = 2.25;
    let m = water();
    let t0 = cherenkov_cos_angle(T300, w, &m).unwrap().acos();
    let ve = momentum(T300, M).unwrap();
    let th = 1e-4;
    let iv = overlap_interval(th, t0).unwrap();
    let tg = iv.midpoint();
    let g = AngularGeometry::vc(T300, w, &m, th, tg).unwrap();
    for lambda in SPINS {
        for lg in PHOTON_HELICITIES {
            let c = twisted_c(lambda, lambda, lg, lambda, 0, T300, w, &g).unwrap();
            let want = -(2.0 * PI * ALPHA).sqrt() * 2.0 * ve * f64::from(lg) * t0.sin();
            assert!((c - want).abs() < 1e-3 * want.abs(), "{c} vs {want}");
            let flip = twisted_c(lambda, -lambda, lg, lambda, 0, T300, w, &g).unwrap();
            assert!(flip.abs() < 1e-3 * want.abs());
        }
    }
}

#[test]
fn ultrarelativistic_coefficient_ratio() {
    let e = 1e4 * M;
    let w = 0.01 * e;
    let (t, tp, tg) = (0.05, 0.02, 0.3);
    let mut checked = 0;
    for lambda in SPINS {
        for lg in PHOTON_HELICITIES {
            for sigma in SPINS {
                for sg in [0, sigma.twice()] {
                    let l = HelicityLabels::new(lambda, lambda, lg, sigma, sg).unwrap();
                    let full = m_coefficient(&l, e, w, t, tp, tg).unwrap();
                    let ur = epa_ultrarel_m_coefficient(&l, e, e - w, t, tp, tg).unwrap();
                    if full.abs() < 1e-12 {
                        continue;
                    }
                    assert!((ur / full - 1.0).abs() < 1e-3, "{}", ur / full);
                    checked += 1;
                    let flip = HelicityLabels::new(lambda, -lambda, lg, sigma, sg).unwrap();
                    assert_eq!(epa_ultrarel_m_coefficient(&flip, e, e - w, t, tp, tg).unwrap(), 0.0);
                }
            }
        }
    }
    assert!(checked >= 8);
}

#[test]
fn helicity_sum_limits() {
    let rel = |a: &SpinorPolarization, b: &SpinorPolarization| relative_difference(a, b);

    // soft: E' ~ E, theta' ~ 0
    let w = 0.1;
    let (tp, t0) = final_theta(T300, w, 1.33);
    let ve = momentum(T300, M).unwrap();
    for lambda in SPINS {
        for phi_g in [0.5, 4.0] {
            let s = helicity_sum_s(lambda, T300, T300 - w, tp, t0, phi_g).unwrap();
            let phi_p = Branch::for_photon_azimuth(phi_g).final_azimuth(phi_g);
            let u = electron_planewave_spinor(tp, phi_p, T300 - w, lambda).unwrap();
            let (par, _) = linear_polarizations(t0, phi_g);
            let want = outer(&u, &(par * (4.0 * (PI * ALPHA).sqrt() * ve * t0.sin())));
            assert!(rel(&s, &want) < 1e-6, "{}", rel(&s, &want));
        }
    }

    // ultra-relativistic
    let e = 1e5 * M;
    let (w, tp, tg) = (0.02 * e, 0.01, 0.4);
    for lambda in SPINS {
        let phi_g = 1.2;
        let s = helicity_sum_s(lambda, e, e - w, tp, tg, phi_g).unwrap();
        let phi_p = Branch::for_photon_azimuth(phi_g).final_azimuth(phi_g);
        let u = electron_planewave_spinor(tp, phi_p, e - w, lambda).unwrap();
        let (par, perp) = linear_polarizations(tg, phi_g);
        let (g1, g2) = ultrarel_g1_g2(lambda, tp, tg);
        let pol = par * g1 + perp * Complex64::new(0.0, g2);
        let want = outer(&u, &(pol * (4.0 * (PI * ALPHA * e * (e - w)).sqrt())));
        assert!(rel(&s, &want) < 1e-6, "{}", rel(&s, &want));
    }
}

#[test]
fn helicity_sum_matches_brute_force() {
    for (lambda, e, w, tp, tg, phi_g) in
        [(H, T300, 2e4, 0.03, 0.5, 0.3), (MH, 2e6, 3e5, 0.2, 1.1, 4.0), (H, 6e5, 1e4, 1.3, 0.2, 2.9)]
    {
        let s = helicity_sum_s(lambda, e, e - w, tp, tg, phi_g).unwrap();
        let b = helicity_sum_brute(lambda, e, e - w, tp, tg, phi_g).unwrap();
        assert!(relative_difference(&s, &b) < 1e-10);
    }
}

// Frozen components of S at (lambda = 1/2, E = 811 keV, E' = 791 keV,
// theta' = 0.1, theta_g = 0.6, phi_g = 0.9). They pin the phase
// conventions of the spinors and polarization vectors.
const S_FROZEN: [((usize, usize), (f64, f64)); 4] = [
    ((0, 0), (-7.223_611_892_629_388e7, -1.117_435_595_089_147e8)),
    ((1, 2), (4.284_111_557_439_123e6, -8.868_785_077_268_202e6)),
    ((2, 1), (-2.802_609_331_439_940e7, -7.230_648_091_924_223e7)),
    ((3, 0), (-2.382_974_800_730_342e6, 1.051_860_266_700_884e6)),
];

#[test]
fn helicity_sum_phase_regression() {
    let s = helicity_sum_s(H, 811e3, 791e3, 0.1, 0.6, 0.9).unwrap();
    for ((r, c), (re, im)) in S_FROZEN {
        let v = s[r][c];
        assert!((v - Complex64::new(re, im)).norm() < 1e-9 * (1.0 + v.norm()), "[{r}][{c}] = {v}");
    }
}

#[test]
fn parity_flip_preserves_magnitudes() {
    let (e, w) = (T300, 3e4);
    let m = MediumModel::constant(1.6).unwrap();
    let (t, tp, tg) = (0.3, 0.25, 0.7);
    for lambda in SPINS {
        for lp in SPINS {
            for lg in PHOTON_HELICITIES {
                for sigma in SPINS {
                    for sg in -1..=1 {
                        let l = HelicityLabels::new(lambda, lp, lg, sigma, sg).unwrap();
                        let a = m_coefficient(&l, e, w, t, tp, tg).unwrap();
                        let b = m_coefficient(&l.flipped(), e, w, t, tp, tg).unwrap();
                        assert!((a.abs() - b.abs()).abs() < 1e-12 * (1.0 + a.abs()));
                    }
                }
                let a = mfi_planewave(lambda, lp, lg, e, w, tp, tg, 0.4, 2.0).unwrap();
                let b = mfi_planewave(-lambda, -lp, -lg, e, w, tp, tg, 0.4, 2.0).unwrap();
                assert!((a.norm() - b.norm()).abs() < 1e-9 * (1.0 + a.norm()));
            }
        }
    }
    let t0 = cherenkov_cos_angle(e, w, &m).unwrap().acos();
    let iv = overlap_interval(0.2, t0).unwrap();
    let g = AngularGeometry::vc(e, w, &m, 0.2, iv.midpoint()).unwrap();
    for lambda in SPINS {
        for lp in SPINS {
            for lg in PHOTON_HELICITIES {
                for mt in [-3, 1, 5] {
                    let mm = HalfInt::from_twice(mt);
                    for m_g in [-2, 0, 3] {
                        let a = twisted_c(lambda, lp, lg, mm, m_g, e, w, &g).unwrap();
                        let b = twisted_c(-lambda, -lp, -lg, -mm, -m_g, e, w, &g).unwrap();
                        assert!((a.abs() - b.abs()).abs() < 1e-9 * (1.0 + a.abs()));
                    }
                }
            }
        }
    }
}

#[test]
fn amplitude_tables_complete() {
    let t = AmplitudeTable::planewave(H, T300, 2.25, 1e-6, 0.25, 0.3 + PI, 0.3).unwrap();
    assert_eq!(t.entries.len(), 4);
    for lp in SPINS {
        for lg in PHOTON_HELICITIES {
            assert!(t.get(lp, lg, None).unwrap().norm().is_finite());
        }
    }
    let m = water();
    let g = AngularGeometry::vc(T300, 2.25, &m, 0.2, 0.25).unwrap();
    let tw = AmplitudeTable::twisted(H, HalfInt::from_twice(3), T300, 2.25, &g, 3).unwrap();
    assert_eq!(tw.entries.len(), 4 * 7);
    assert!(tw.get(MH, -1, Some(-3)).is_some());
    assert!(tw.get(MH, -1, Some(4)).is_none());
}
