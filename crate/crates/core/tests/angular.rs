use std::f64::consts::PI;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use vc_twist_core::angular::*;
use vc_twist_core::kinematics::{overlap_interval, MediumModel, ELECTRON_MASS_EV};
use vc_twist_core::numerics::{i_pow, integrate_sqrt_singular, HalfInt};
use vc_twist_core::{Complex64, VcError};

fn deg(x: f64) -> f64 {
    x.to_radians()
}

#[test]
fn delta_examples() {
    let d = delta_angle(deg(12.0), deg(26.5) - 1e-13, deg(14.5)).unwrap();
    assert!(d.abs() < 1e-5, "{d}");
    let d = delta_angle(deg(12.0), deg(26.5), deg(14.5)).unwrap();
    assert!(d.abs() < 1e-6);
    let t = deg(30.0);
    let d = delta_angle(t, t, t).unwrap();
    assert!((d.cos() - 0.464_101_6).abs() < 1e-7);
    assert!((d - 1.088).abs() < 1e-3);
    assert!(matches!(delta_angle(deg(12.0), deg(27.0), deg(14.5)), Err(VcError::OutsideOverlap { .. })));
    assert!(matches!(delta_angle(deg(12.0), deg(2.0), deg(14.5)), Err(VcError::OutsideOverlap { .. })));
}

#[test]
fn delta_prime_examples() {
    let (t, tg, t0) = (0.3, 0.35, 0.25);
    assert_eq!(delta_prime(t, tg, t0).unwrap(), delta_angle(t, tg, t0).unwrap());
    assert!(delta_prime(0.0, tg, t0).is_err());
    let g = AngularGeometry::soft(t, tg, t0).unwrap();
    assert_eq!(g.delta, g.delta_p);
    assert_eq!(g.theta_p, g.theta);
}

#[test]
fn weight_examples() {
    let t = deg(30.0);
    let f = weight_f(t, t, t).unwrap();
    assert!((f - 1.437_42).abs() < 1e-5, "{f}");
    assert!((weight_f_via_delta(t, t, t).unwrap() - f).abs() < 1e-5);
    for (a, g, b) in [(0.2, 0.3, 0.25), (1.0, 0.9, 0.4), (0.1, 0.12, 0.05)] {
        assert!((weight_f(a, g, b).unwrap() - weight_f(b, g, a).unwrap()).abs() < 1e-12 * weight_f(a, g, b).unwrap());
    }
    assert!(weight_f(deg(12.0), deg(12.0) + deg(14.5), deg(14.5)).is_err());
    assert!(weight_f(deg(12.0), deg(30.0), deg(14.5)).is_err());
}

#[test]
fn closed_forms_agree_off_border_strip() {
    let mut worst = 0.0f64;
    for i in 1..30 {
        for j in 1..30 {
            let (t, t0) = (deg(2.0 * f64::from(i)), deg(2.0 * f64::from(j)) + 0.01);
            let iv = overlap_interval(t, t0).unwrap();
            for k in 0..=40 {
                let tg = iv.lower() + 1e-6 + (iv.upper() - iv.lower() - 2e-6) * f64::from(k) / 40.0;
                let a = weight_f(t, tg, t0).unwrap();
                let b = weight_f_via_delta(t, tg, t0).unwrap();
                worst = worst.max((a - b).abs() / a);
            }
        }
    }
    assert!(worst < 1e-10, "{worst}");
}

#[test]
fn weight_normalized_random_pairs() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..100 {
        let t = deg(rng.gen_range(1.0..60.0));
        let t0 = deg(rng.gen_range(1.0..60.0));
        let iv = overlap_interval(t, t0).unwrap();
        let v = integrate_sqrt_singular(|tg| weight_f(t, tg, t0).unwrap() * tg.sin(), &iv).unwrap();
        assert!((v - 1.0).abs() < 1e-6, "{t} {t0} {v}");
    }
}

#[test]
fn delta_is_a_spherical_azimuth() {
    // rotating the cone direction by delta about z puts it at angle theta0 from k
    for (t, tg, t0) in [(0.2, 0.3, 0.25), (1.1, 0.8, 0.6), (0.05, 0.07, 0.04)] {
        let d = delta_angle(t, tg, t0).unwrap();
        let p = [t.sin() * d.cos(), t.sin() * d.sin(), t.cos()];
        let k = [tg.sin(), 0.0, tg.cos()];
        let c = p[0] * k[0] + p[1] * k[1] + p[2] * k[2];
        assert!((c - t0.cos()).abs() < 1e-13);
        assert!((0.0..=PI).contains(&d));
    }
}

#[test]
fn average_of_constant() {
    let m = MediumModel::constant(1.5).unwrap();
    let e = 1e6;
    let g = AngularGeometry::vc(e, 5e3, &m, 0.4, 0.6).unwrap();
    let v = azimuthal_average(|_, _| Complex64::new(2.5, -1.0), &g, 0.7);
    assert!((v - Complex64::new(2.5, -1.0) * g.weight_f).norm() < 1e-12 * g.weight_f);
    assert!(e > ELECTRON_MASS_EV);
}

#[test]
fn average_of_phase_product() {
    let m = MediumModel::constant(1.5).unwrap();
    let g = AngularGeometry::vc(1e6, 5e3, &m, 0.4, 0.6).unwrap();
    let phi_g = 1.3;
    for mt in [-3, 1, 5] {
        let mm = f64::from(mt) / 2.0;
        for s in [0.5, -0.5] {
            for sp in [0.5, -0.5] {
                for sg in -1..=1 {
                    let sg = f64::from(sg);
                    let f = |phi: f64, phip: f64| {
                        i_pow(-HalfInt::from_twice(mt))
                            * Complex64::from_polar(1.0, mm * phi - sp * phip + s * (phip - phi) - sg * (phip - phi_g))
                    };
                    let got = azimuthal_average(f, &g, phi_g);
                    let want = i_pow(-HalfInt::from_twice(mt))
                        * Complex64::from_polar(g.weight_f, (mm - sp) * phi_g)
                        * ((mm - s) * g.delta + (s - sp - sg) * g.delta_p).cos();
                    assert!((got - want).norm() < 1e-12 * g.weight_f);
                }
            }
        }
    }
}

#[test]
fn vc_geometry_consistent() {
    let m = MediumModel::constant(2.0).unwrap();
    let e = 300e3 + ELECTRON_MASS_EV;
    let w = 1e5;
    let g = AngularGeometry::vc(e, w, &m, 0.3, 0.5).unwrap();
    assert!(g.weight_f > 0.0);
    assert!((0.0..=PI).contains(&g.delta) && (0.0..=PI).contains(&g.delta_p));
    // final electron direction from p - k
    let p = (e * e - ELECTRON_MASS_EV * ELECTRON_MASS_EV).sqrt();
    let k = 2.0 * w;
    let pv = [p * 0.3f64.sin() * g.delta.cos(), p * 0.3f64.sin() * g.delta.sin(), p * 0.3f64.cos()];
    let kv = [k * 0.5f64.sin(), 0.0, k * 0.5f64.cos()];
    let q = [pv[0] - kv[0], pv[1] - kv[1], pv[2] - kv[2]];
    let qn = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
    assert!((q[0].hypot(q[1]).atan2(q[2]) - g.theta_p).abs() < 1e-12);
    let c = (q[0] * kv[0] + q[2] * kv[2]) / (qn * k);
    assert!((c - g.theta_kpp.cos()).abs() < 1e-12);
    // the final electron sits at azimuth +delta' relative to the photon
    assert!((q[1].atan2(q[0]) - g.delta_p).abs() < 1e-9);
}
