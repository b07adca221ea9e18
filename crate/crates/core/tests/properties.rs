use proptest::prelude::*;

use vc_twist_core::amplitudes::{m_coefficient, mfi_general, twisted_c, HelicityLabels, SPINS};
use vc_twist_core::angular::{azimuthal_average, delta_angle, weight_f, AngularGeometry};
use vc_twist_core::epa::virtuality;
use vc_twist_core::evolved::{evolved_pw_coefficients, evolved_tw_coefficients, ModeTruncation};
use vc_twist_core::kinematics::*;
use vc_twist_core::numerics::{bessel_j, wigner_d_half, wigner_d_one, HalfInt};
use vc_twist_core::observables::{pl_planewave, pl_twisted};
use vc_twist_core::scalar_oracle::{scalar_cos_theta0, scalar_evolved_coefficients, ScalarDecayConfig};
use vc_twist_core::Complex64;

const H: HalfInt = HalfInt::HALF;
const M: f64 = ELECTRON_MASS_EV;

fn spin() -> impl Strategy<Value = HalfInt> {
    prop_oneof![Just(H), Just(-H)]
}

fn helicity() -> impl Strategy<Value = i32> {
    prop_oneof![Just(1), Just(-1)]
}

/// `(theta, theta_g, theta0)` with `theta_g` strictly inside the overlap interval.
fn inside_geometry() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.02f64..1.2, 0.02f64..1.2, 0.01f64..0.99).prop_map(|(t, t0, f)| {
        let iv = overlap_interval(t, t0).unwrap();
        (t, iv.lower() + f * (iv.upper() - iv.lower()), t0)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn wigner_rows_orthonormal(theta in 0.0f64..std::f64::consts::PI) {
        for a in SPINS {
            for b in SPINS {
                let s: f64 = SPINS.iter().map(|&l| wigner_d_half(a, l, theta).unwrap() * wigner_d_half(b, l, theta).unwrap()).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                prop_assert!((s - want).abs() < 1e-14);
            }
        }
        for a in -1..=1 {
            for b in -1..=1 {
                let s: f64 = (-1..=1).map(|l| wigner_d_one(a, l, theta).unwrap() * wigner_d_one(b, l, theta).unwrap()).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                prop_assert!((s - want).abs() < 1e-14);
                prop_assert_eq!(wigner_d_one(a, b, 0.0).unwrap(), if a == b { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn bessel_recurrence(n in -60i32..60, x in 0.05f64..80.0) {
        let lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x);
        let rhs = 2.0 * f64::from(n) / x * bessel_j(n, x);
        prop_assert!((lhs - rhs).abs() < 1e-9);
    }

    #[test]
    fn overlap_symmetric(t in 0.0f64..3.1, t0 in 0.0f64..3.1) {
        prop_assume!((t - t0).abs() > 1e-9);
        let (a, b) = (overlap_interval(t, t0), overlap_interval(t0, t));
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert!((a.lower() - b.lower()).abs() < 1e-15 && (a.upper() - b.upper()).abs() < 1e-15);
            prop_assert!(0.0 <= a.lower() && a.lower() < a.upper() && a.upper() <= std::f64::consts::PI);
        }
    }

    #[test]
    fn cone_angle_soft_limit(t in 1e4f64..5e6, n in 1.05f64..2.5) {
        let e = M + t;
        let medium = MediumModel::constant(n).unwrap();
        let v = velocity(e, M).unwrap();
        prop_assume!(v * n > 1.0 + 1e-6);
        let c = cherenkov_cos_angle(e, 1e-3, &medium).unwrap();
        prop_assert!((c - 1.0 / (v * n)).abs() < 1e-6);
    }

    #[test]
    fn photon_mode_on_shell(w in 0.1f64..1e5, tg in 0.01f64..3.1, n in 1.0f64..2.5, m in -10i32..10) {
        let medium = MediumModel::constant(n).unwrap();
        let p = PhotonMode::new(w, tg, m, PhotonPolarization::Helicity(1), &medium).unwrap();
        let k = w * n;
        prop_assert!(((p.k_perp.powi(2) + p.k_z.powi(2)) / (k * k) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kronecker_structure(l in spin(), lp in spin(), lg in helicity(), s in spin(), sg in -1i32..=1,
                           tp in 0.0f64..3.0, tg in 0.01f64..3.0) {
        let labels = HelicityLabels::new(l, lp, lg, s, sg).unwrap();
        let v = m_coefficient(&labels, 811e3, 2e4, 0.3, tp, tg).unwrap();
        if sg != 0 && sg != s.twice() {
            prop_assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn parity_flip_magnitudes(l in spin(), lp in spin(), lg in helicity(),
                              t in 0.0f64..3.0, tp in 0.0f64..3.0, tg in 0.01f64..3.0,
                              phi in 0.0f64..6.3, phip in 0.0f64..6.3, phig in 0.0f64..6.3) {
        let a = mfi_general(l, lp, lg, 811e3, 2e4, (t, tp, tg), (phi, phip, phig)).unwrap();
        let b = mfi_general(-l, -lp, -lg, 811e3, 2e4, (t, tp, tg), (phi, phip, phig)).unwrap();
        prop_assert!((a.norm() - b.norm()).abs() < 1e-9 * a.norm().max(b.norm()).max(1.0));
    }

    #[test]
    fn twisted_c_parity(l in spin(), lp in spin(), lg in helicity(), mt in -4i32..4, mg in -5i32..5,
                        t in 0.05f64..0.9, f in 0.02f64..0.98) {
        let m = HalfInt::from_twice(2 * mt + 1);
        let medium = MediumModel::constant(1.5).unwrap();
        let e = 811e3;
        let w = 3e4;
        let t0 = cherenkov_cos_angle(e, w, &medium).unwrap().acos();
        let iv = overlap_interval(t, t0).unwrap();
        let g = AngularGeometry::vc(e, w, &medium, t, iv.lower() + f * (iv.upper() - iv.lower())).unwrap();
        let a = twisted_c(l, lp, lg, m, mg, e, w, &g).unwrap();
        let b = twisted_c(-l, -lp, -lg, -m, -mg, e, w, &g).unwrap();
        prop_assert!((a.abs() - b.abs()).abs() < 1e-9 * a.abs().max(b.abs()).max(1.0));
    }

    #[test]
    fn delta_and_weight((t, tg, t0) in inside_geometry()) {
        let d = delta_angle(t, tg, t0).unwrap();
        prop_assert!((0.0..=std::f64::consts::PI).contains(&d));
        prop_assert!(d.sin() >= 0.0);
        let c = (t0.cos() - t.cos() * tg.cos()) / (t.sin() * tg.sin());
        prop_assert!((d.sin() - (1.0 - c * c).max(0.0).sqrt()).abs() < 1e-6);
        prop_assert!(weight_f(t, tg, t0).unwrap() > 0.0);
    }

    #[test]
    fn average_of_constant(t in 0.05f64..0.9, f in 0.02f64..0.98, re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let medium = MediumModel::constant(1.5).unwrap();
        let e = 811e3;
        let t0 = cherenkov_cos_angle(e, 5e3, &medium).unwrap().acos();
        let iv = overlap_interval(t, t0).unwrap();
        let g = AngularGeometry::vc(e, 5e3, &medium, t, iv.lower() + f * (iv.upper() - iv.lower())).unwrap();
        let c = Complex64::new(re, im);
        let v = azimuthal_average(|_, _| c, &g, 0.4);
        prop_assert!((v - c * g.weight_f).norm() <= 1e-12 * g.weight_f * c.norm().max(1.0));
    }

    #[test]
    fn tam_bookkeeping(l in spin(), mt in -5i32..5, t in 0.05f64..0.6, f in 0.02f64..0.98, w in 10.0f64..1e4) {
        let medium = MediumModel::constant(1.4).unwrap();
        let e = M + 4e5;
        let tr = ModeTruncation::new(4, vec![w], 1).unwrap();
        for c in evolved_pw_coefficients(e, l, &medium, w, &tr).unwrap() {
            prop_assert_eq!(c.m_prime.add_int(c.m_gamma), l);
        }
        let m = HalfInt::from_twice(2 * mt + 1);
        let t0 = cherenkov_cos_angle(e, w, &medium).unwrap().acos();
        let iv = overlap_interval(t, t0).unwrap();
        let tg = iv.lower() + f * (iv.upper() - iv.lower());
        for c in evolved_tw_coefficients(e, l, m, t, &medium, w, tg, &tr).unwrap() {
            prop_assert_eq!(c.m_prime.add_int(c.m_gamma), m);
        }
    }

    #[test]
    fn twisted_degree_bounded_and_even((t, tg, t0) in inside_geometry(), mg in 0i32..8) {
        if let Ok(p) = pl_twisted(t, tg, t0, mg) {
            prop_assert!((-1.0..=1.0).contains(&p));
            prop_assert_eq!(p, pl_twisted(t, tg, t0, -mg).unwrap());
            if mg == 0 {
                prop_assert_eq!(p, 1.0);
            }
        }
    }

    #[test]
    fn planewave_degree_scaling(g1 in -5.0f64..5.0, g2 in -5.0f64..5.0, c in prop_oneof![-1e3f64..-1e-3, 1e-3f64..1e3]) {
        prop_assume!(g1.abs() + g2.abs() > 1e-6);
        let p = pl_planewave(g1, g2).unwrap();
        prop_assert!((-1.0..=1.0).contains(&p));
        prop_assert!((pl_planewave(c * g1, c * g2).unwrap() - p).abs() < 1e-12);
    }

    #[test]
    fn virtuality_negative(ratio in 1.5f64..1e4, x in 1e-6f64..0.99, kp in 0.0f64..1e6) {
        let e = ratio * M;
        prop_assert!(virtuality(e, x * e, kp, M).unwrap() < 0.0);
    }

    #[test]
    fn scalar_closure_and_alternation(mass in 1.0f64..10.0, f1 in 0.0f64..0.45, f2 in 0.0f64..0.45,
                                      boost in 1.01f64..4.0, u in 0.05f64..0.95) {
        let (mu1, mu2, energy) = (f1 * mass, f2 * mass, boost * mass);
        let e1_star = (mass * mass + mu1 * mu1 - mu2 * mu2) / (2.0 * mass);
        let base = ScalarDecayConfig::new(mass, mu1, mu2, energy, e1_star * boost, 1.0).unwrap();
        let (lo, hi) = base.e1_range().unwrap();
        let cfg = base.with_e1(lo + u * (hi - lo));
        let c = scalar_cos_theta0(&cfg).unwrap();
        let (p, p1) = (cfg.momentum(), cfg.p1());
        let e2 = (p * p + p1 * p1 - 2.0 * p * p1 * c + mu2 * mu2).sqrt();
        prop_assert!((e2 - (energy - cfg.e1)).abs() < 1e-12 * energy);
        let coef = scalar_evolved_coefficients(&cfg, 6).unwrap();
        let w0 = coef[6].weight;
        for x in &coef {
            prop_assert_eq!(x.weight, if x.m1 % 2 == 0 { w0 } else { -w0 });
        }
    }
}
