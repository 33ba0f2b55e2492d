use std::f64::consts::FRAC_PI_2;

use khavinson_core::kernels::{
    grad_poisson, grad_poisson_dir, kernel_q, kernel_r, kernel_s, kernel_w, kernel_z, moebius_sphere_map, p1_argument,
    p1_closed, p1_scale, p_rho, p_script, poisson_kernel,
};
use khavinson_core::{canonicalize, integrate, Error, ProblemPoint, QuadratureConfig, SphereRule};
use proptest::prelude::*;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn unit(v: Vec<f64>) -> Vec<f64> {
    let r = norm(&v);
    v.into_iter().map(|x| x / r).collect()
}

/// Nonzero vectors in R^n for n in 2..=6.
fn raw_vector() -> impl Strategy<Value = Vec<f64>> {
    (2usize..=6)
        .prop_flat_map(|n| prop::collection::vec(-1.0f64..1.0, n))
        .prop_filter("nonzero", |v| norm(v) > 0.1)
}

fn pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, f64)> {
    (2usize..=6)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(-1.0f64..1.0, n),
                prop::collection::vec(-1.0f64..1.0, n),
                0.0f64..0.95,
            )
        })
        .prop_filter("nonzero", |(a, b, _)| norm(a) > 0.1 && norm(b) > 0.1)
}

#[test]
fn problem_point_validation() {
    assert!(ProblemPoint::new(1, 0.5, 0.0).is_err());
    assert!(ProblemPoint::new(3, -0.1, 0.0).is_err());
    assert!(ProblemPoint::new(3, 1.1, 0.0).is_err());
    assert!(ProblemPoint::new(3, 0.5, 2.0).is_err());
    let pp = ProblemPoint::new(3, 0.5, FRAC_PI_2 - 1e-14).unwrap();
    assert_eq!(pp.tau(), FRAC_PI_2);
    assert!(pp.is_tangential());
}

#[test]
fn derived_parameters() {
    for n in 3..=7usize {
        for rho in [0.0, 0.2, 0.5, 0.9, 1.0] {
            let pp = ProblemPoint::new(n, rho, 0.3).unwrap();
            let nf = n as f64;
            assert!((pp.alpha() - (nf - 2.0) * rho / nf).abs() < 1e-15);
            assert!((pp.beta() - (nf - (nf - 2.0) * rho) / 2.0).abs() < 1e-15);
            assert!((pp.kappa() - (1.0 - rho) / (1.0 + rho)).abs() < 1e-15);
            // w² = (n − β)/β, which is also the positive root of Q at z = 0
            let w = pp.w_radial();
            assert!((w * w - (nf - pp.beta()) / pp.beta()).abs() < 1e-13);
            assert!(kernel_q(w, 0.0, &pp).abs() < 1e-12);
            assert!((kernel_z(0.0, &pp) - w).abs() < 1e-13);
        }
    }
}

#[test]
fn canonicalize_basic() {
    let pp = canonicalize(&[0.0, 0.6, 0.0], &[0.0, 0.0, 1.0]).unwrap();
    assert!((pp.rho() - 0.6).abs() < 1e-15);
    assert_eq!(pp.tau(), FRAC_PI_2);
    let pp = canonicalize(&[0.0, 0.0], &[0.6, 0.8]).unwrap();
    assert_eq!((pp.rho(), pp.tau()), (0.0, 0.0));
    assert!(matches!(canonicalize(&[1.0, 0.0], &[1.0, 0.0]), Err(Error::Domain(_))));
    assert!(canonicalize(&[0.1, 0.0], &[2.0, 0.0]).is_err());
    assert!(canonicalize(&[0.1, 0.0], &[1.0, 0.0, 0.0]).is_err());
}

#[test]
fn poisson_kernel_has_unit_mass() {
    let grid = SphereRule::reference_grid(3).unwrap();
    for x in [[0.0, 0.0, 0.0], [0.3, 0.1, -0.2], [0.0, 0.5, 0.0]] {
        let m = grid.estimate(|z| [poisson_kernel(&x, z)]).mean[0];
        assert!((m - 1.0).abs() < 1e-10, "{x:?}: {m}");
    }
}

#[test]
fn kernel_r_singular_only_at_the_pole() {
    let pp = ProblemPoint::new(4, 1.0, 0.0).unwrap();
    assert!(matches!(kernel_r(0.0, &pp), Err(Error::Singularity(_))));
    assert!(kernel_r(0.1, &pp).unwrap().is_finite());
}

#[test]
fn kernel_s_limit_at_boundary() {
    let pp = ProblemPoint::new(5, 1.0, 0.0).unwrap();
    let near = kernel_s(FRAC_PI_2 - 1e-7, &pp);
    assert!(near.is_finite());
    // at ρ = 1 the denominator is (2cos θ)^{n−2}, leaving sin^{n−2} θ
    let t = 0.7f64;
    assert!((kernel_s(t, &pp) - t.sin().powi(3)).abs() < 1e-15);
    // unfactored form inside the ball
    for rho in [0.0, 0.3, 0.9] {
        let pp = ProblemPoint::new(5, rho, 0.0).unwrap();
        for t in [0.1f64, 0.7, 1.4] {
            let plain = (2.0 * t).sin().powi(3) / ((1.0 + rho) * (1.0 + rho) - 4.0 * rho * t.sin().powi(2)).powf(1.5);
            assert!((kernel_s(t, &pp) - plain).abs() < 1e-13, "rho={rho} t={t}");
        }
    }
}

#[test]
fn p_rho_matches_plain_w_integral() {
    for n in [3, 4, 6] {
        for rho in [0.0, 0.4, 0.9] {
            let pp = ProblemPoint::new(n, rho, 0.0).unwrap();
            for z in [-2.0, -0.3, 0.0, 0.8, 3.0] {
                let upper = kernel_z(z, &pp);
                let plain = integrate(|w| kernel_q(w, z, &pp) * kernel_w(w, &pp), 0.0, upper, &cfg()).unwrap();
                let got = p_rho(z, &pp, &cfg()).unwrap().value;
                assert!(
                    (got - plain.value).abs() < 1e-10 * plain.value.abs().max(1e-3),
                    "n={n} rho={rho} z={z}"
                );
            }
        }
    }
}

#[test]
fn p_rho_needs_reduced_dimension() {
    let pp = ProblemPoint::new(2, 0.3, 0.0).unwrap();
    assert!(p_rho(0.0, &pp, &cfg()).is_err());
    let pp = ProblemPoint::new(3, 0.3, 0.0).unwrap();
    assert!(p_rho(f64::NAN, &pp, &cfg()).is_err());
}

proptest! {
    #[test]
    fn moebius_map_preserves_the_sphere((a, b, r) in pair()) {
        let x: Vec<f64> = unit(a).into_iter().map(|v| v * r).collect();
        let eta = unit(b);
        let t = moebius_sphere_map(&x, &eta);
        prop_assert!((norm(&t) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn moebius_map_inverts((a, b, r) in pair()) {
        let x: Vec<f64> = unit(a).into_iter().map(|v| v * r).collect();
        let eta = unit(b);
        // η − x = (1−|x|²)(ξ + x)/|ξ + x|² with ξ = T_x(η)
        let xi = moebius_sphere_map(&x, &eta);
        let s = 1.0 - r * r;
        let shifted: Vec<f64> = xi.iter().zip(&x).map(|(p, q)| p + q).collect();
        let d2 = norm(&shifted).powi(2);
        let back: Vec<f64> = shifted.iter().zip(&x).map(|(p, q)| s * p / d2 + q).collect();
        let d: f64 = back.iter().zip(&eta).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        prop_assert!(d < 1e-9);
    }

    #[test]
    fn gradient_matches_finite_differences((a, b, r) in pair(), i in 0usize..6) {
        let x: Vec<f64> = unit(a).into_iter().map(|v| v * r).collect();
        let zeta = unit(b);
        prop_assume!(x.iter().zip(&zeta).map(|(p, q)| (p - q).powi(2)).sum::<f64>() > 0.01);
        let i = i % x.len();
        let h = 1e-5;
        let (mut xp, mut xm) = (x.clone(), x.clone());
        xp[i] += h;
        xm[i] -= h;
        let fd = (poisson_kernel(&xp, &zeta) - poisson_kernel(&xm, &zeta)) / (2.0 * h);
        let g = grad_poisson(&x, &zeta);
        prop_assert!((g[i] - fd).abs() < 1e-5 * g[i].abs().max(1.0));
        let mut e = vec![0.0; x.len()];
        e[i] = 1.0;
        prop_assert!((grad_poisson_dir(&x, &zeta, &e) - g[i]).abs() < 1e-12 * g[i].abs().max(1.0));
    }

    #[test]
    fn canonicalize_invariances((a, b, r) in pair(), angle in 0.0f64..6.3, flip in any::<bool>()) {
        let x: Vec<f64> = unit(a).into_iter().map(|v| v * r).collect();
        let ell = unit(b);
        let base = canonicalize(&x, &ell).unwrap();
        // rotate the first two coordinates of both, optionally flip ℓ
        let rot = |v: &[f64]| {
            let mut w = v.to_vec();
            let (s, c) = angle.sin_cos();
            w[0] = c * v[0] - s * v[1];
            w[1] = s * v[0] + c * v[1];
            w
        };
        let mut ell2 = rot(&ell);
        if flip {
            ell2.iter_mut().for_each(|v| *v = -*v);
        }
        let moved = canonicalize(&rot(&x), &ell2).unwrap();
        prop_assert_eq!(moved.n(), base.n());
        prop_assert!((moved.rho() - base.rho()).abs() < 1e-12);
        if base.rho() > 1e-3 {
            prop_assert!((moved.tau() - base.tau()).abs() < 1e-6);
        }
    }

    #[test]
    fn z_is_the_positive_root_of_q(n in 3usize..=8, rho in 0.0f64..=1.0, z in -50.0f64..50.0) {
        let pp = ProblemPoint::new(n, rho, 0.0).unwrap();
        let w = kernel_z(z, &pp);
        prop_assert!(w > 0.0);
        // Q is quadratic with leading coefficient −β; scale the residual by its size at w
        let scale = pp.beta() * w * w + n as f64 * (1.0 + z.abs() * w);
        prop_assert!(kernel_q(w, z, &pp).abs() < 1e-12 * scale);
    }

    #[test]
    fn p_rho_positive_and_increasing(n in 3usize..=6, rho in 0.0f64..=1.0, z in -5.0f64..5.0) {
        let pp = ProblemPoint::new(n, rho, 0.0).unwrap();
        let lo = p_rho(z, &pp, &cfg()).unwrap().value;
        let hi = p_rho(z + 0.01, &pp, &cfg()).unwrap().value;
        prop_assert!(lo > 0.0);
        prop_assert!(hi > lo);
        // Lipschitz on compacts: the increment stays comparable to the step
        prop_assert!(hi - lo < 0.01 * n as f64 * (1.0 + hi));
    }

    #[test]
    fn p1_closed_form_matches_quadrature(n in 3usize..=7, z in -4.0f64..4.0) {
        let pp = ProblemPoint::new(n, 1.0, 0.0).unwrap();
        let q = p_rho(z, &pp, &cfg()).unwrap().value;
        prop_assert!((p1_closed(z, n) - q).abs() < 1e-10 * q.max(1e-6));
    }

    #[test]
    fn p1_scaling_identity(n in 3usize..=9, z in -6.0f64..6.0) {
        let lhs = p1_closed(z, n);
        let rhs = p1_scale(n) * p_script(p1_argument(z, n), n);
        prop_assert!((lhs - rhs).abs() < 1e-12 * lhs.max(1e-12));
    }

    #[test]
    fn raw_vectors_canonicalize_to_unit_ell(v in raw_vector()) {
        let ell = unit(v.clone());
        let x: Vec<f64> = v.iter().map(|c| c * 0.3).collect();
        let pp = canonicalize(&x, &ell).unwrap();
        // x is parallel to ℓ
        prop_assert!(pp.tau() < 1e-6);
    }
}
