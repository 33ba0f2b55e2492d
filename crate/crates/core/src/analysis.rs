//! Direction sweeps, the conjecture verdict, and numerical verification of the
//! identities and inequalities behind the near-boundary result.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::kernels::{p1_closed, p_rho, p_script, ProblemPoint};
use crate::quadrature::{integrate_t_weight, QuadratureConfig};
use crate::representations::{c_double1, c_double2, c_final, j_parts, zero_integral_check};
use crate::special::{gamma_fn, hyp2f1, hyp2f1_quadratic_lhs_rhs, HypMethod, HypParams};

/// Largest argmax angle still counted as radial.
pub const ANGLE_TOL: f64 = 1e-3;
/// Relative slack when comparing the maximum against the radial value.
pub const REL_TOL: f64 = 1e-7;
/// Golden-section stopping width in τ.
pub const REFINE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TauSample {
    pub tau: f64,
    pub value: f64,
}

/// Profile of `τ ↦ C(ρe₁; ℓ_τ)` with its refined maximum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub n: usize,
    pub rho: f64,
    pub samples: Vec<TauSample>,
    pub argmax_tau: f64,
    pub argmax_value: f64,
    pub radial_value: f64,
    pub tangential_value: f64,
    pub conjecture_holds: bool,
}

impl SweepReport {
    pub fn max_sample(&self) -> f64 {
        self.samples.iter().map(|s| s.value).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_sample(&self) -> f64 {
        self.samples.iter().map(|s| s.value).fold(f64::INFINITY, f64::min)
    }
}

/// Maximizes `f` on `[a, b]` by golden-section search; returns `(x, f(x))`
/// for the best point evaluated.
pub fn golden_section_max<F>(f: F, a: f64, b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a, b);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
            if fc > best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
            if fd > best.1 {
                best = (d, fd);
            }
        }
    }
    Ok(best)
}

/// Evaluates the one-dimensional representation on a uniform τ-grid over
/// `[0, π/2]` and refines the best bracket by golden-section search.
///
/// When the radial value is within [`REL_TOL`] of the maximum found, the
/// argmax is reported at `τ = 0`; this keeps flat profiles (the center of the
/// ball) from reporting a noise-driven direction.
pub fn sweep_tau(n: usize, rho: f64, grid_size: usize, cfg: &QuadratureConfig) -> Result<SweepReport> {
    if grid_size < 9 {
        return domain(format!("sweep grid needs at least 9 points, got {grid_size}"));
    }
    let base = ProblemPoint::new(n, rho, 0.0)?;
    base.require_reduced()?;
    let step = FRAC_PI_2 / (grid_size - 1) as f64;
    let taus: Vec<f64> = (0..grid_size)
        .map(|i| if i + 1 == grid_size { FRAC_PI_2 } else { i as f64 * step })
        .collect();
    let values: Vec<f64> = taus
        .par_iter()
        .map(|&t| Ok(c_final(&base.with_tau(t)?, cfg)?.value))
        .collect::<Result<_>>()?;
    let samples: Vec<TauSample> = taus
        .iter()
        .zip(&values)
        .map(|(&tau, &value)| TauSample { tau, value })
        .collect();

    let (best_i, best_v) =
        values.iter().copied().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
        );
    let lo = taus[best_i.saturating_sub(1)];
    let hi = taus[(best_i + 1).min(grid_size - 1)];
    let refined = golden_section_max(|t| Ok(c_final(&base.with_tau(t)?, cfg)?.value), lo, hi, REFINE_TOL)?;
    let (mut argmax_tau, argmax_value) = if refined.1 > best_v {
        refined
    } else {
        (taus[best_i], best_v)
    };

    let radial_value = values[0];
    let tangential_value = values[grid_size - 1];
    if radial_value * (1.0 + REL_TOL) >= argmax_value {
        argmax_tau = 0.0;
    }
    let conjecture_holds = argmax_tau <= ANGLE_TOL && argmax_value <= radial_value * (1.0 + REL_TOL);
    Ok(SweepReport {
        n,
        rho,
        samples,
        argmax_tau,
        argmax_value,
        radial_value,
        tangential_value,
        conjecture_holds,
    })
}

/// Sweeps at every listed radius and records the smallest listed `ρ` from
/// which the verdict holds for all larger listed radii.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureScan {
    pub n: usize,
    pub reports: Vec<SweepReport>,
    pub threshold: Option<f64>,
}

pub fn conjecture_scan(n: usize, rho_list: &[f64], grid_size: usize, cfg: &QuadratureConfig) -> Result<ConjectureScan> {
    let reports = rho_list
        .iter()
        .map(|&rho| sweep_tau(n, rho, grid_size, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut order: Vec<&SweepReport> = reports.iter().collect();
    order.sort_by(|a, b| a.rho.total_cmp(&b.rho));
    let mut threshold = None;
    for r in order.iter().rev() {
        if !r.conjecture_holds {
            break;
        }
        threshold = Some(r.rho);
    }
    Ok(ConjectureScan { n, reports, threshold })
}

/// One evaluated check inside a [`VerificationReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckPoint {
    pub label: String,
    pub inputs: BTreeMap<String, f64>,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckPoint {
    /// Inequality check: passes when `residual ≥ −tolerance`.
    pub fn at_least(label: &str, inputs: &[(&str, f64)], residual: f64, tolerance: f64) -> Self {
        Self::build(label, inputs, residual, tolerance, residual >= -tolerance)
    }

    /// Strict inequality: passes when `residual > 0`.
    pub fn positive(label: &str, inputs: &[(&str, f64)], residual: f64) -> Self {
        Self::build(label, inputs, residual, 0.0, residual > 0.0)
    }

    /// Identity check on `lhs − rhs`: the residual is `−|lhs − rhs|`.
    pub fn equal(label: &str, inputs: &[(&str, f64)], diff: f64, tolerance: f64) -> Self {
        Self::build(label, inputs, -diff.abs(), tolerance, diff.abs() <= tolerance)
    }

    fn build(label: &str, inputs: &[(&str, f64)], residual: f64, tolerance: f64, pass: bool) -> Self {
        Self {
            label: label.to_string(),
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            residual,
            tolerance,
            pass: pass && residual.is_finite(),
        }
    }
}

/// Residuals of one identity or inequality over a parameter grid.
/// `worst_residual` is the smallest residual; identities enter as `−|error|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub points: Vec<CheckPoint>,
    pub worst_residual: f64,
    pub all_pass: bool,
}

impl VerificationReport {
    pub fn new(name: &str, points: Vec<CheckPoint>) -> Self {
        let worst_residual = points.iter().map(|p| p.residual).fold(f64::INFINITY, f64::min);
        let all_pass = points.iter().all(|p| p.pass);
        Self {
            name: name.to_string(),
            worst_residual: if points.is_empty() { 0.0 } else { worst_residual },
            points,
            all_pass,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckPoint> {
        self.points.iter().filter(|p| !p.pass)
    }

    /// Concatenates several reports under one name.
    pub fn merge(name: &str, parts: Vec<VerificationReport>) -> Self {
        let points = parts
            .into_iter()
            .flat_map(|r| {
                let prefix = r.name;
                r.points.into_iter().map(move |mut p| {
                    p.label = format!("{prefix}/{}", p.label);
                    p
                })
            })
            .collect();
        Self::new(name, points)
    }
}

/// `g(γ) = √((aγ² + b(n−1))/((n−1)(1+γ²)))`
pub fn extremal_ratio(gamma: f64, n: usize, a: f64, b: f64) -> f64 {
    let m = n as f64 - 1.0;
    ((a * gamma * gamma + b * m) / (m * (1.0 + gamma * gamma))).sqrt()
}

/// Checks the moment integrals of the weight `(1−t²)^{(n−4)/2}`, the
/// monotonicity of [`extremal_ratio`], and the resulting bound
/// `∫₀¹ √(a(γt)² + b) (1−t²)^{(n−4)/2} dt / √(1+γ²) ≤` its value at `γ = 0`.
pub fn verify_extremal_lemma(n: usize, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<VerificationReport> {
    if n < 3 {
        return domain(format!("extremal lemma needs n >= 3, got {n}"));
    }
    if !(a > 0.0 && b > 0.0) {
        return domain(format!("extremal lemma needs a, b > 0, got a = {a}, b = {b}"));
    }
    let nf = n as f64;
    let mut pts = Vec::new();
    let mass = 0.5 * PI.sqrt() * gamma_fn((nf - 2.0) / 2.0)? / gamma_fn((nf - 1.0) / 2.0)?;
    let m0 = integrate_t_weight(|_| 1.0, n, cfg)?.value;
    let m2 = integrate_t_weight(|t| t * t, n, cfg)?.value;
    let ni = [("n", nf)];
    pts.push(CheckPoint::equal("moment0", &ni, m0 - mass, 1e-10));
    pts.push(CheckPoint::equal("moment2", &ni, m2 - mass / (nf - 1.0), 1e-10));

    let ratio = a / b;
    let gammas: Vec<f64> = (0..=200).map(|i| i as f64 * 0.1).collect();
    for w in gammas.windows(2) {
        let (g0, g1) = (w[0], w[1]);
        let drop = extremal_ratio(g0, n, a, b) - extremal_ratio(g1, n, a, b);
        let inputs = [("gamma", g0), ("a", a), ("b", b)];
        // for a/b > n − 1 the ratio increases and there is nothing to check
        if ratio < nf - 1.0 {
            pts.push(CheckPoint::positive("strictly_decreasing", &inputs, drop));
        } else if ratio == nf - 1.0 {
            pts.push(CheckPoint::equal("constant", &inputs, drop, 1e-12));
        }
    }

    let at_zero = b.sqrt() * mass;
    for &g in gammas.iter().step_by(10) {
        let v = integrate_t_weight(|t| (a * (g * t).powi(2) + b).sqrt(), n, cfg)?.value / (1.0 + g * g).sqrt();
        pts.push(CheckPoint::at_least(
            "bound_by_radial",
            &[("gamma", g)],
            at_zero - v,
            1e-10,
        ));
    }
    Ok(VerificationReport::new("extremal_lemma", pts))
}

/// `𝒫(y)² + 𝒫(−y)² ≤ (4(n−1)(3n−2)y² + 2n²)/n^n`, with equality at `y = 0`.
pub fn verify_km_inequality(n: usize, y_grid: &[f64]) -> Result<VerificationReport> {
    if n < 3 {
        return domain(format!("inequality needs n >= 3, got {n}"));
    }
    let nf = n as f64;
    let nn = nf.powi(n as i32);
    let mut pts = Vec::with_capacity(y_grid.len() + 1);
    for &y in y_grid {
        let lhs = p_script(y, n).powi(2) + p_script(-y, n).powi(2);
        let rhs = (4.0 * (nf - 1.0) * (3.0 * nf - 2.0) * y * y + 2.0 * nf * nf) / nn;
        pts.push(CheckPoint::at_least(
            "inequality",
            &[("n", nf), ("y", y)],
            rhs - lhs,
            1e-12,
        ));
    }
    let eq = 2.0 * p_script(0.0, n).powi(2) - 2.0 * nf * nf / nn;
    pts.push(CheckPoint::equal("equality_at_origin", &[("n", nf)], eq, 1e-12));
    Ok(VerificationReport::new("km_inequality", pts))
}

/// `P₁(z) + P₁(−z) ≤ 2P₁(0)√(Kz² + 1)` with `K = (3n−2)/4`; equality at
/// `z = 0` and strict inequality for `|z| ≥ 0.1`.
pub fn verify_p1_inequality(n: usize, z_grid: &[f64]) -> Result<VerificationReport> {
    if n < 3 {
        return domain(format!("inequality needs n >= 3, got {n}"));
    }
    let nf = n as f64;
    let k = (3.0 * nf - 2.0) / 4.0;
    let p0 = p1_closed(0.0, n);
    let mut pts = Vec::with_capacity(z_grid.len());
    for &z in z_grid {
        let res = 2.0 * p0 * (k * z * z + 1.0).sqrt() - (p1_closed(z, n) + p1_closed(-z, n));
        let inputs = [("n", nf), ("z", z)];
        if z == 0.0 {
            pts.push(CheckPoint::equal("equality_at_origin", &inputs, res, 1e-12));
        } else if z.abs() >= 0.1 {
            pts.push(CheckPoint::positive("strict", &inputs, res));
        } else {
            pts.push(CheckPoint::at_least("inequality", &inputs, res, 1e-12));
        }
    }
    Ok(VerificationReport::new("p1_inequality", pts))
}

/// `F(z) = (P_ρ(z) + P_ρ(−z))/(2P_ρ(0))`, by quadrature.
pub fn symmetrized_ratio(z: f64, pp: &ProblemPoint, cfg: &QuadratureConfig) -> Result<f64> {
    let p0 = p_rho(0.0, pp, cfg)?.value;
    Ok((p_rho(z, pp, cfg)?.value + p_rho(-z, pp, cfg)?.value) / (2.0 * p0))
}

/// Tolerance of the `F(z) ≤ √(Kz²+1)` check; the ratio carries quadrature
/// noise of order 1e-10.
pub const INEQ_RHO_TOL: f64 = 1e-9;

/// `F(z) ≤ √(Kz² + 1)` on a uniform grid of `[0, M]`.
pub fn verify_ineq_rho(
    n: usize,
    rho: f64,
    k: f64,
    m: f64,
    grid_size: usize,
    cfg: &QuadratureConfig,
) -> Result<VerificationReport> {
    if !(k > 0.0 && m > 0.0) {
        return domain(format!("need K > 0 and M > 0, got K = {k}, M = {m}"));
    }
    if grid_size < 2 {
        return domain("grid needs at least two points");
    }
    let pp = ProblemPoint::new(n, rho, 0.0)?;
    pp.require_reduced()?;
    let p0 = p_rho(0.0, &pp, cfg)?.value;
    let pts = (0..grid_size)
        .into_par_iter()
        .map(|i| {
            let z = m * i as f64 / (grid_size - 1) as f64;
            let f = (p_rho(z, &pp, cfg)?.value + p_rho(-z, &pp, cfg)?.value) / (2.0 * p0);
            let res = (k * z * z + 1.0).sqrt() - f;
            Ok(CheckPoint::at_least(
                "majorant",
                &[("n", n as f64), ("rho", rho), ("K", k), ("z", z)],
                res,
                INEQ_RHO_TOL,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::new("ineq_rho", pts))
}

/// `K − F″(0)` with `F″(0)` from the central second difference at `h` and
/// `h/2`, combined by Richardson extrapolation.
pub fn second_derivative_gap(n: usize, rho: f64, k: f64, h: f64) -> Result<f64> {
    if !(1e-5..=1e-2).contains(&h) {
        return domain(format!("finite-difference step must lie in [1e-5, 1e-2], got {h}"));
    }
    let pp = ProblemPoint::new(n, rho, 0.0)?;
    pp.require_reduced()?;
    let cfg = QuadratureConfig::with_tolerances(1e-13, 1e-16);
    let f0 = symmetrized_ratio(0.0, &pp, &cfg)?;
    let d2 = |step: f64| -> Result<f64> {
        let fp = symmetrized_ratio(step, &pp, &cfg)?;
        let fm = symmetrized_ratio(-step, &pp, &cfg)?;
        Ok((fp - 2.0 * f0 + fm) / (step * step))
    };
    let coarse = d2(h)?;
    let fine = d2(0.5 * h)?;
    Ok(k - (4.0 * fine - coarse) / 3.0)
}

/// Outcome of the transfer argument at one `(n, ρ, K)`: if the majorant
/// inequality holds with `K < n − 1`, the sweep must put the maximum at τ = 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferCheck {
    pub premise: bool,
    pub conclusion: bool,
    pub sound: bool,
}

pub fn majorant_transfer(
    n: usize,
    rho: f64,
    k: f64,
    m: f64,
    grid_size: usize,
    sweep_grid: usize,
    cfg: &QuadratureConfig,
) -> Result<TransferCheck> {
    let ineq = verify_ineq_rho(n, rho, k, m, grid_size, cfg)?;
    let premise = ineq.all_pass && k < n as f64 - 1.0;
    let sweep = sweep_tau(n, rho, sweep_grid, cfg)?;
    let conclusion = sweep.argmax_tau <= ANGLE_TOL;
    Ok(TransferCheck {
        premise,
        conclusion,
        sound: !premise || conclusion,
    })
}

/// Radii and directions of the standard verification grid.
pub const GRID_RHOS: [f64; 5] = [0.0, 0.3, 0.7, 0.9, 0.99];
pub const GRID_TAUS: [f64; 5] = [0.0, PI / 6.0, PI / 4.0, PI / 3.0, FRAC_PI_2];

fn grid_points(n: usize) -> Result<Vec<ProblemPoint>> {
    let mut out = Vec::new();
    for &rho in &GRID_RHOS {
        for &tau in &GRID_TAUS {
            out.push(ProblemPoint::new(n, rho, tau)?);
        }
    }
    Ok(out)
}

/// Vanishing of the signed angular integral, relative to the integral of
/// `|G| S`, over the standard grid.
pub fn verify_zero_integral(n: usize, cfg: &QuadratureConfig) -> Result<VerificationReport> {
    let pts = grid_points(n)?
        .par_iter()
        .map(|pp| {
            let z = zero_integral_check(pp, cfg)?;
            let tol = 1e-9 * z.magnitude;
            Ok(CheckPoint::equal(
                "signed_integral",
                &[("n", n as f64), ("rho", pp.rho()), ("tau", pp.tau())],
                z.signed,
                tol,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::new("zero_integral", pts))
}

/// Pairwise agreement of the two iterated and the one-dimensional
/// representations over the standard grid.
pub fn verify_cross_methods(n: usize, cfg: &QuadratureConfig) -> Result<VerificationReport> {
    let pts = grid_points(n)?
        .par_iter()
        .map(|pp| {
            let d1 = c_double1(pp, cfg)?.value;
            let d2 = c_double2(pp, cfg)?.value;
            let fi = c_final(pp, cfg)?.value;
            let inputs = [("n", n as f64), ("rho", pp.rho()), ("tau", pp.tau())];
            Ok(vec![
                CheckPoint::equal("double1_vs_double2", &inputs, d1 - d2, 1e-6),
                CheckPoint::equal("double1_vs_final", &inputs, d1 - fi, 1e-6),
                CheckPoint::equal("double2_vs_final", &inputs, d2 - fi, 1e-6),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::new(
        "cross_methods",
        pts.into_iter().flatten().collect(),
    ))
}

/// Random `(a, b, c, z)` with `c > b > 0` and `|z| ≤ 0.9`, reproducible from `seed`.
pub fn random_hyp_params(count: usize, seed: u64) -> Vec<HypParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let a = rng.random_range(-1.0..3.0);
            let b = rng.random_range(0.1..3.0);
            let c = b + rng.random_range(0.1..3.0);
            let z = rng.random_range(-0.9..=0.9);
            HypParams::new(a, b, c, z)
        })
        .collect()
}

/// Series against Euler integral on random parameters, the quadratic
/// transformation on its grid, and the J-integrals against their
/// hypergeometric and closed forms.
pub fn verify_hypergeometric(seed: u64, cfg: &QuadratureConfig) -> Result<VerificationReport> {
    let mut pts = Vec::new();
    for p in random_hyp_params(100, seed) {
        let s = hyp2f1(&p, HypMethod::Series)?;
        let e = hyp2f1(&p, HypMethod::EulerIntegral)?;
        pts.push(CheckPoint::equal(
            "series_vs_euler",
            &[("a", p.a), ("b", p.b), ("c", p.c), ("z", p.z)],
            (s - e) / s.abs(),
            1e-9,
        ));
    }
    for zi in 0..10 {
        let z = zi as f64 / 10.0;
        for a in 1..=8 {
            for b in [-1.0, 0.0, 0.5] {
                let (l, r) = hyp2f1_quadratic_lhs_rhs(a as f64, b, z)?;
                pts.push(CheckPoint::equal(
                    "quadratic_transform",
                    &[("a", a as f64), ("b", b), ("z", z)],
                    (l - r) / l.abs(),
                    1e-9,
                ));
            }
        }
    }
    for n in 3..=6usize {
        for rho in [0.25, 0.5, 0.75] {
            let j = j_parts(n, rho, cfg)?;
            let inputs = [("n", n as f64), ("rho", rho)];
            for (label, v) in [
                ("j1_quadrature", j.j1_quad),
                ("j2_quadrature", j.j2_quad),
                ("j1_hypergeometric", j.j1_hyp),
                ("j2_hypergeometric", j.j2_hyp),
            ] {
                pts.push(CheckPoint::equal(label, &inputs, v - j.closed, 1e-8));
            }
        }
    }
    Ok(VerificationReport::new("hypergeometric", pts))
}

/// Uniform grid of `count` points on `[lo, hi]`.
pub fn uniform_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| {
                let t = i as f64 / (count - 1) as f64;
                // keep the midpoint of symmetric grids exactly at zero
                let v = lo + (hi - lo) * t;
                if (2 * i + 1 == count) && lo == -hi {
                    0.0
                } else {
                    v
                }
            })
            .collect(),
    }
}
