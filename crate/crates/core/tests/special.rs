use std::f64::consts::PI;

use khavinson_core::special::{hyp2f1_quadratic_lhs_rhs, pochhammer, surface_area};
use khavinson_core::{gamma_fn, hyp2f1, Error, HypMethod, HypParams};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn gamma_half_integers() {
    // Γ(k + 1/2) = (2k)! √π / (4^k k!)
    let mut fact = [1.0f64; 41];
    for i in 1..41 {
        fact[i] = fact[i - 1] * i as f64;
    }
    for k in 0..20 {
        let want = fact[2 * k] * PI.sqrt() / (4f64.powi(k as i32) * fact[k]);
        let got = gamma_fn(k as f64 + 0.5).unwrap();
        assert!(rel(got, want) < 1e-13, "k={k}: {got} vs {want}");
    }
}

#[test]
fn gamma_rejects_poles() {
    for x in [0.0, -1.0, -7.0] {
        assert!(matches!(gamma_fn(x), Err(Error::Domain(_))), "x={x}");
    }
}

#[test]
fn hyp2f1_elementary_cases() {
    for method in [HypMethod::Series, HypMethod::EulerIntegral] {
        for z in [-0.8, -0.3, 0.1, 0.5, 0.85] {
            // 2F1(a, b; b; z) = (1 − z)^{−a}; Euler needs c > b, so series only
            let w = hyp2f1(&HypParams::new(1.7, 1.6, 1.6, z), HypMethod::Series).unwrap();
            assert!(rel(w, (1.0 - z).powf(-1.7)) < 1e-12);
            // 2F1(1, 1; 2; z) = −ln(1 − z)/z
            let l = hyp2f1(&HypParams::new(1.0, 1.0, 2.0, z), method).unwrap();
            assert!(rel(l, -(1.0 - z).ln() / z) < 1e-10, "{method:?} z={z}");
            // 2F1(1/2, 1/2; 3/2; x²) = arcsin(x)/x
            let x = z.abs().sqrt();
            let s = hyp2f1(&HypParams::new(0.5, 0.5, 1.5, x * x), method).unwrap();
            assert!(rel(s, x.asin() / x) < 1e-10, "{method:?} x={x}");
        }
    }
}

#[test]
fn hyp2f1_terminating() {
    // 2F1(−2, b; c; z) = 1 − 2bz/c + b(b+1)z²/(c(c+1))
    let (b, c, z) = (0.7, 2.3, -0.6);
    let want = 1.0 - 2.0 * b * z / c + b * (b + 1.0) * z * z / (c * (c + 1.0));
    let got = hyp2f1(&HypParams::new(-2.0, b, c, z), HypMethod::Series).unwrap();
    assert!(rel(got, want) < 1e-15);
}

#[test]
fn hyp2f1_domain() {
    assert!(hyp2f1(&HypParams::new(1.0, 1.0, 2.0, 1.0), HypMethod::Series).is_err());
    assert!(hyp2f1(&HypParams::new(1.0, 1.0, -2.0, 0.5), HypMethod::Series).is_err());
    assert!(hyp2f1(&HypParams::new(1.0, 2.0, 1.5, 0.5), HypMethod::EulerIntegral).is_err());
}

#[test]
fn surface_areas() {
    assert!(rel(surface_area(2).unwrap(), 2.0 * PI) < 1e-14);
    assert!(rel(surface_area(3).unwrap(), 4.0 * PI) < 1e-14);
    assert!(rel(surface_area(4).unwrap(), 2.0 * PI * PI) < 1e-14);
    for n in 1..30 {
        // ω_{n+2} = 2π ω_n / n
        let lhs = surface_area(n + 2).unwrap();
        let rhs = 2.0 * PI * surface_area(n).unwrap() / n as f64;
        assert!(rel(lhs, rhs) < 1e-12, "n={n}");
    }
}

proptest! {
    #[test]
    fn gamma_reflection(x in 0.02f64..0.98) {
        let lhs = gamma_fn(x).unwrap() * gamma_fn(1.0 - x).unwrap();
        prop_assert!(rel(lhs, PI / (PI * x).sin()) < 1e-12);
    }

    #[test]
    fn gamma_recurrence(x in 0.05f64..60.0) {
        prop_assert!(rel(gamma_fn(x + 1.0).unwrap(), x * gamma_fn(x).unwrap()) < 1e-12);
    }

    #[test]
    fn pochhammer_matches_gamma(a in 0.1f64..5.0, k in 0u32..12) {
        let want = gamma_fn(a + k as f64).unwrap() / gamma_fn(a).unwrap();
        prop_assert!(rel(pochhammer(a, k), want) < 1e-12);
    }

    #[test]
    fn series_matches_euler(
        a in -1.0f64..3.0,
        b in 0.1f64..3.0,
        dc in 0.1f64..3.0,
        z in -0.9f64..0.9,
    ) {
        let p = HypParams::new(a, b, b + dc, z);
        let s = hyp2f1(&p, HypMethod::Series).unwrap();
        let e = hyp2f1(&p, HypMethod::EulerIntegral).unwrap();
        prop_assert!(rel(e, s) < 1e-9, "{:?}: {} vs {}", p, s, e);
    }

    #[test]
    fn quadratic_transformation(a in 1u32..=8, b in prop::sample::select(vec![-1.0, 0.0, 0.5]), z in 0.0f64..0.95) {
        let (l, r) = hyp2f1_quadratic_lhs_rhs(a as f64, b, z).unwrap();
        prop_assert!(rel(r, l) < 1e-9);
    }
}
