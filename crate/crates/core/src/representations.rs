//! The optimal constant `C(x; ℓ) = (1 − |x|) 𝒞(x; ℓ)` by five independent
//! routes, the half-space constants, and the closed-form special values.
//!
//! * `SphereOracle`: `∫ |⟨∇P(x, ζ), ℓ⟩| dσ(ζ)` by sphere cubature.
//! * `MoebiusSphere`: the sphere integral after the Möbius change of variables.
//! * `Double1`, `Double2`: the two iterated angular integrals.
//! * `Final`: the one-dimensional representation through `P_ρ`.

use std::cell::Cell;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::kernels::{
    grad_poisson_dir, kernel_g, kernel_g_tilde, kernel_r, kernel_s, kernel_w, p1_closed, p_rho, poisson_kernel,
    ProblemPoint, Slope,
};
use crate::quadrature::{
    integrate, try_integrate_halfline, try_integrate_t_weight, try_integrate_with_breaks, Integral, QuadratureConfig,
    SphereRule,
};
use crate::special::{gamma_fn, hyp2f1, surface_area, HypMethod, HypParams};

/// Evaluation route for the constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    SphereOracle,
    MoebiusSphere,
    Double1,
    Double2,
    Final,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::SphereOracle,
        Method::MoebiusSphere,
        Method::Double1,
        Method::Double2,
        Method::Final,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::SphereOracle => "sphere_oracle",
            Method::MoebiusSphere => "moebius_sphere",
            Method::Double1 => "double1",
            Method::Double2 => "double2",
            Method::Final => "final",
        }
    }

    /// Whether the route integrates over the sphere and needs a [`SphereRule`].
    pub fn uses_sphere(&self) -> bool {
        matches!(self, Method::SphereOracle | Method::MoebiusSphere)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown method '{s}'")))
    }
}

/// A computed constant `C` with its provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantValue {
    pub value: f64,
    pub err_est: f64,
    pub method: Method,
    pub point: ProblemPoint,
}

impl ConstantValue {
    /// `𝒞 = C/(1 − ρ)`, defined inside the ball only.
    pub fn script(&self) -> Option<f64> {
        (self.point.rho() < 1.0).then(|| self.value / (1.0 - self.point.rho()))
    }
}

/// Evaluates `C` at `pp` by the requested route. Sphere routes need `rule`.
pub fn evaluate(
    pp: &ProblemPoint,
    method: Method,
    cfg: &QuadratureConfig,
    rule: Option<&SphereRule>,
) -> Result<ConstantValue> {
    let need_rule = || rule.ok_or_else(|| Error::Domain(format!("method {method} needs a sphere rule")));
    match method {
        Method::SphereOracle => c_sphere_oracle(pp, need_rule()?),
        Method::MoebiusSphere => c_moebius(pp, need_rule()?),
        Method::Double1 => c_double1(pp, cfg),
        Method::Double2 => c_double2(pp, cfg),
        Method::Final => c_final(pp, cfg),
    }
}

fn check_rule(pp: &ProblemPoint, rule: &SphereRule) -> Result<()> {
    if rule.dim() != pp.n() {
        return domain(format!(
            "sphere rule is for n = {}, point has n = {}",
            rule.dim(),
            pp.n()
        ));
    }
    if pp.rho() >= 1.0 {
        return domain("sphere routes need rho < 1");
    }
    Ok(())
}

/// Mean of `f` over the sphere with an error estimate: the standard error for
/// Monte Carlo, the change against the half-resolution grid for grids, and
/// zero for explicit rules.
fn sphere_mean<F>(rule: &SphereRule, f: F) -> (f64, f64)
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let est = rule.estimate(|z| [f(z)]);
    let err = match rule {
        SphereRule::MonteCarlo { .. } => est.std_err[0],
        SphereRule::Grid { n, resolution } if resolution % 4 == 0 => {
            let coarse = SphereRule::Grid {
                n: *n,
                resolution: resolution / 2,
            };
            (coarse.estimate(|z| [f(z)]).mean[0] - est.mean[0]).abs()
        }
        _ => 0.0,
    };
    (est.mean[0], err)
}

/// `C = (1 − ρ) ∫ |⟨∇P(ρe₁, ζ), ℓ_τ⟩| dσ(ζ)`.
pub fn c_sphere_oracle(pp: &ProblemPoint, rule: &SphereRule) -> Result<ConstantValue> {
    check_rule(pp, rule)?;
    let x = pp.point();
    let ell = pp.direction();
    let (mean, err) = sphere_mean(rule, |z| grad_poisson_dir(&x, z, &ell).abs());
    let s = 1.0 - pp.rho();
    Ok(ConstantValue {
        value: s * mean,
        err_est: s * err,
        method: Method::SphereOracle,
        point: *pp,
    })
}

/// `C = (n/(1+ρ)) ∫ |⟨η, ℓ_τ⟩ − α_ρ cos τ| |η − ρe₁|^{2−n} dσ(η)`.
pub fn c_moebius(pp: &ProblemPoint, rule: &SphereRule) -> Result<ConstantValue> {
    check_rule(pp, rule)?;
    let rho = pp.rho();
    let (ct, st) = (pp.tau().cos(), pp.tau().sin());
    let shift = pp.alpha() * ct;
    let power = 2.0 - pp.nf();
    let (mean, err) = sphere_mean(rule, |eta| {
        let proj = eta[0] * ct + eta[1] * st - shift;
        let d2 = 1.0 + rho * rho - 2.0 * rho * eta[0];
        proj.abs() * d2.powf(0.5 * power)
    });
    let pref = pp.nf() / (1.0 + rho);
    Ok(ConstantValue {
        value: pref * mean,
        err_est: pref * err,
        method: Method::MoebiusSphere,
        point: *pp,
    })
}

fn omega_ratio(n: usize) -> Result<f64> {
    Ok(surface_area(n - 2)? / surface_area(n)?)
}

/// Positive roots of `a w² + b w + c = 0`.
fn positive_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(2);
    if a == 0.0 {
        if b != 0.0 {
            out.push(-c / b);
        }
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc >= 0.0 {
            let q = -0.5 * (b + b.signum() * disc.sqrt());
            if q != 0.0 {
                out.push(q / a);
                out.push(c / q);
            } else {
                out.push(0.0);
            }
        }
    }
    out.retain(|w| w.is_finite() && *w > 0.0);
    out
}

/// Tracks the largest error reported by an inner integral.
struct InnerErr(Cell<f64>);

impl InnerErr {
    fn new() -> Self {
        Self(Cell::new(0.0))
    }
    fn record(&self, r: Integral) -> f64 {
        self.0.set(self.0.get().max(r.err_est));
        r.value
    }
    fn get(&self) -> f64 {
        self.0.get()
    }
}

/// First iterated representation,
/// `(2ω_{n−2}/ω_n)/(1+ρ) ∫₀^π R(θ̃) sin^{n−2}θ̃ ∫₀^π |G̃| sin^{n−3}φ dφ dθ̃`.
/// Requires `n ≥ 3` and `ρ < 1`.
pub fn c_double1(pp: &ProblemPoint, cfg: &QuadratureConfig) -> Result<ConstantValue> {
    let r = double1_at_angle(pp, pp.tau(), cfg)?;
    Ok(ConstantValue {
        value: r.value,
        err_est: r.err_est,
        method: Method::Double1,
        point: *pp,
    })
}

/// [`c_double1`] with the direction angle taken verbatim, `τ ∈ [0, 2π]`; the
/// angle stored in `pp` is ignored.
pub fn double1_at_angle(pp: &ProblemPoint, tau: f64, cfg: &QuadratureConfig) -> Result<Integral> {
    pp.require_reduced()?;
    if pp.rho() >= 1.0 {
        return domain("the first double integral is only used for rho < 1");
    }
    let n = pp.n();
    let pw = n as i32 - 3;
    let (ct, st) = (tau.cos(), tau.sin());
    let alpha = pp.alpha();
    let inner_err = InnerErr::new();

    let inner = |theta_t: f64| -> Result<f64> {
        let (s, c) = theta_t.sin_cos();
        let mut breaks = Vec::new();
        if s * st != 0.0 {
            let cphi = -(c - alpha) * ct / (s * st);
            if cphi.abs() < 1.0 {
                breaks.push(cphi.acos());
            }
        }
        let r = try_integrate_with_breaks(
            |phi: f64| Ok(kernel_g_tilde(phi, theta_t, tau, pp).abs() * phi.sin().powi(pw)),
            0.0,
            PI,
            &breaks,
            cfg,
        )?;
        Ok(inner_err.record(r))
    };

    // The inner integral has kinks where the zero set of G̃ leaves φ ∈ (0, π),
    // i.e. cos(θ̃ ∓ τ) = α cos τ, and R peaks on the scale 1 − ρ.
    let mut breaks = Vec::new();
    let a = (alpha * ct).clamp(-1.0, 1.0).acos();
    for k in -1..=1 {
        let shift = 2.0 * PI * k as f64;
        for cand in [tau + a, tau - a, -tau + a, -tau - a] {
            breaks.push(cand + shift);
        }
    }
    if pp.rho() > 0.5 {
        let gap = 1.0 - pp.rho();
        breaks.extend([gap, 8.0 * gap]);
    }
    let outer = try_integrate_with_breaks(
        |theta_t: f64| {
            let rk = kernel_r(theta_t, pp)?;
            Ok(rk * theta_t.sin().powi(n as i32 - 2) * inner(theta_t)?)
        },
        0.0,
        PI,
        &breaks,
        cfg,
    )?;
    let pref = 2.0 * omega_ratio(n)? / (1.0 + pp.rho());
    Ok(Integral {
        value: pref * outer.value,
        err_est: pref * (outer.err_est + PI * PI * inner_err.get()),
    })
}

/// Second iterated representation,
/// `(4ω_{n−2}/ω_n)/(1+ρ) ∫₀^π sin^{n−3}φ ∫₀^{π/2} |G| S dθ dφ`.
/// Requires `n ≥ 3`; `ρ = 1` is allowed.
pub fn c_double2(pp: &ProblemPoint, cfg: &QuadratureConfig) -> Result<ConstantValue> {
    let r = double2_at_angle(pp, pp.tau(), cfg)?;
    Ok(ConstantValue {
        value: r.value,
        err_est: r.err_est,
        method: Method::Double2,
        point: *pp,
    })
}

/// [`c_double2`] with the direction angle taken verbatim, `τ ∈ [0, 2π]`.
pub fn double2_at_angle(pp: &ProblemPoint, tau: f64, cfg: &QuadratureConfig) -> Result<Integral> {
    let r = double2_integral(pp, tau, cfg, true)?;
    let pref = 4.0 * omega_ratio(pp.n())? / (1.0 + pp.rho());
    Ok(r.scale(pref))
}

/// `∫₀^π sin^{n−3}φ ∫₀^{π/2} G S dθ dφ` (signed) or with `|G|`, without the
/// prefactor.
fn double2_integral(pp: &ProblemPoint, tau: f64, cfg: &QuadratureConfig, absolute: bool) -> Result<Integral> {
    pp.require_reduced()?;
    let n = pp.n();
    let nf = pp.nf();
    let pw = n as i32 - 3;
    let (ct, st) = (tau.cos(), tau.sin());
    let beta = pp.beta();
    let inner_err = InnerErr::new();

    let inner = |phi: f64| -> Result<f64> {
        // With w = tan θ, G/cos²θ = −β cos τ w² + n cos φ sin τ w + (n − β) cos τ.
        let breaks: Vec<f64> = positive_roots(-beta * ct, nf * phi.cos() * st, (nf - beta) * ct)
            .into_iter()
            .map(f64::atan)
            .collect();
        let r = try_integrate_with_breaks(
            |theta: f64| {
                let g = kernel_g(phi, theta, tau, pp);
                Ok(if absolute { g.abs() } else { g } * kernel_s(theta, pp))
            },
            0.0,
            FRAC_PI_2,
            &breaks,
            cfg,
        )?;
        Ok(inner_err.record(r))
    };

    let outer = try_integrate_with_breaks(
        |phi: f64| Ok(phi.sin().powi(pw) * inner(phi)?),
        0.0,
        PI,
        &[FRAC_PI_2],
        cfg,
    )?;
    Ok(Integral {
        value: outer.value,
        err_est: outer.err_est + PI * inner_err.get(),
    })
}

/// `(2/(1+ρ))^{n−1}`
fn boundary_factor(pp: &ProblemPoint) -> f64 {
    (2.0 / (1.0 + pp.rho())).powi(pp.n() as i32 - 1)
}

/// The one-dimensional representation. For `0 < τ < π/2`,
/// `C = (4ω_{n−2}/ω_n)(2/(1+ρ))^{n−1} cos τ ∫₀¹ [P_ρ(γt) + P_ρ(−γt)](1−t²)^{(n−4)/2} dt`
/// with `γ = tan τ`; the radial and tangential directions use their own
/// reduced formulas.
pub fn c_final(pp: &ProblemPoint, cfg: &QuadratureConfig) -> Result<ConstantValue> {
    pp.require_reduced()?;
    let nf = pp.nf();
    let bf = boundary_factor(pp);
    let r = if pp.tau() == 0.0 {
        let wr = pp.w_radial();
        let beta = pp.beta();
        let core = integrate(|w| beta * (wr * wr - w * w) * kernel_w(w, pp), 0.0, wr, cfg)?;
        let pref = 4.0 / PI.sqrt() * gamma_fn(nf / 2.0)? / gamma_fn((nf - 1.0) / 2.0)? * bf;
        core.scale(pref)
    } else {
        match pp.slope() {
            Slope::Infinite => {
                let core = try_integrate_halfline(|w| Ok(w * kernel_w(w, pp)), cfg)?;
                core.scale(2.0 * nf / PI * bf)
            }
            Slope::Finite(gamma) => {
                let inner_err = InnerErr::new();
                let core = try_integrate_t_weight(
                    |t| {
                        let a = p_rho(gamma * t, pp, cfg)?;
                        let b = p_rho(-gamma * t, pp, cfg)?;
                        Ok(inner_err.record(a + b))
                    },
                    pp.n(),
                    cfg,
                )?;
                let pref = 4.0 * omega_ratio(pp.n())? * bf * pp.tau().cos();
                Integral {
                    value: core.value,
                    err_est: core.err_est + t_weight_mass(pp.n())? * inner_err.get(),
                }
                .scale(pref)
            }
        }
    };
    Ok(ConstantValue {
        value: r.value,
        err_est: r.err_est,
        method: Method::Final,
        point: *pp,
    })
}

/// `∫₀¹ (1−t²)^{(n−4)/2} dt = (√π/2) Γ((n−2)/2)/Γ((n−1)/2)`
fn t_weight_mass(n: usize) -> Result<f64> {
    let nf = n as f64;
    Ok(0.5 * PI.sqrt() * gamma_fn((nf - 2.0) / 2.0)? / gamma_fn((nf - 1.0) / 2.0)?)
}

/// Radial half-space constant in closed form,
/// `(4/√π)(n−1)^{(n−1)/2} n^{−n/2} Γ(n/2)/Γ((n−1)/2)`.
pub fn halfspace_radial(n: usize) -> Result<f64> {
    if n < 3 {
        return domain(format!("half-space constants need n >= 3, got {n}"));
    }
    let nf = n as f64;
    Ok(
        4.0 / PI.sqrt() * (nf - 1.0).powf(0.5 * (nf - 1.0)) * nf.powf(-0.5 * nf) * gamma_fn(nf / 2.0)?
            / gamma_fn((nf - 1.0) / 2.0)?,
    )
}

/// Tangential half-space constant `2/π`.
pub const HALFSPACE_TANGENTIAL: f64 = 2.0 / PI;

/// Half-space constant `C(ℓ)` with `𝒞(x; ℓ) = C(ℓ)/x_n`, through the closed
/// form of `P₁`. At `τ = 0` the result is checked against [`halfspace_radial`].
pub fn c_halfspace(n: usize, tau: f64, cfg: &QuadratureConfig) -> Result<ConstantValue> {
    let pp = ProblemPoint::new(n, 1.0, tau)?;
    pp.require_reduced()?;
    let (value, err_est) = match pp.slope() {
        Slope::Infinite => (HALFSPACE_TANGENTIAL, 0.0),
        Slope::Finite(gamma) => {
            let core = integrate_t_weight_plain(|t| p1_closed(gamma * t, n) + p1_closed(-gamma * t, n), n, cfg)?;
            let r = core.scale(4.0 * omega_ratio(n)? * pp.tau().cos());
            if gamma == 0.0 {
                let display = halfspace_radial(n)?;
                if (r.value - display).abs() > 1e-10 {
                    return Err(Error::Accuracy {
                        what: format!("radial half-space constant disagrees with its closed form {display}"),
                        value: r.value,
                        err_est: r.err_est,
                    });
                }
            }
            (r.value, r.err_est)
        }
    };
    Ok(ConstantValue {
        value,
        err_est,
        method: Method::Final,
        point: pp,
    })
}

fn integrate_t_weight_plain<G: Fn(f64) -> f64>(g: G, n: usize, cfg: &QuadratureConfig) -> Result<Integral> {
    try_integrate_t_weight(|t| Ok(g(t)), n, cfg)
}

/// `(2/√π) Γ((n+2)/2)/Γ((n+1)/2)`, the constant at the origin.
pub fn c_zero(n: usize) -> Result<f64> {
    if n < 2 {
        return domain(format!("c_zero needs n >= 2, got {n}"));
    }
    let nf = n as f64;
    Ok(2.0 / PI.sqrt() * gamma_fn((nf + 2.0) / 2.0)? / gamma_fn((nf + 1.0) / 2.0)?)
}

/// Global bound of `C` over the ball; equal to [`c_zero`].
pub fn global_bound(n: usize) -> Result<f64> {
    c_zero(n)
}

/// The signed angular integral of `G S` that must vanish, next to the same
/// integral with `|G|` for scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroIntegral {
    pub signed: f64,
    pub signed_err: f64,
    pub magnitude: f64,
}

/// `∫₀^π sin^{n−3}φ ∫₀^{π/2} G(φ, θ, τ) S(θ) dθ dφ` at the direction in `pp`.
pub fn zero_integral_check(pp: &ProblemPoint, cfg: &QuadratureConfig) -> Result<ZeroIntegral> {
    zero_integral_at_angle(pp, pp.tau(), cfg)
}

/// [`zero_integral_check`] for any `τ ∈ [0, 2π]`.
pub fn zero_integral_at_angle(pp: &ProblemPoint, tau: f64, cfg: &QuadratureConfig) -> Result<ZeroIntegral> {
    // the value is zero, so only an absolute tolerance is meaningful
    let tight = QuadratureConfig {
        abs_tol: cfg.abs_tol.min(1e-13),
        ..*cfg
    };
    let signed = double2_integral(pp, tau, &tight, false)?;
    let magnitude = double2_integral(pp, tau, cfg, true)?;
    Ok(ZeroIntegral {
        signed: signed.value,
        signed_err: signed.err_est,
        magnitude: magnitude.value,
    })
}

/// `J₁ = n ∫ cos²θ S dθ` and `J₂ = β_ρ ∫ S dθ` over `[0, π/2]`, by quadrature,
/// through their hypergeometric forms, and by the common closed form
/// `2^{n−3} Γ²((n−1)/2)/Γ(n−1) β_ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JParts {
    pub j1_quad: f64,
    pub j2_quad: f64,
    pub j1_hyp: f64,
    pub j2_hyp: f64,
    pub closed: f64,
}

pub fn j_parts(n: usize, rho: f64, cfg: &QuadratureConfig) -> Result<JParts> {
    let pp = ProblemPoint::new(n, rho, 0.0)?;
    pp.require_reduced()?;
    if rho >= 1.0 {
        return domain("hypergeometric forms of J need rho < 1");
    }
    let nf = n as f64;
    let beta = pp.beta();
    let j1_quad = nf * integrate(|t| t.cos().powi(2) * kernel_s(t, &pp), 0.0, FRAC_PI_2, cfg)?.value;
    let j2_quad = beta * integrate(|t| kernel_s(t, &pp), 0.0, FRAC_PI_2, cfg)?.value;
    let rt = 4.0 * rho / (1.0 + rho).powi(2);
    let lead = 2f64.powi(n as i32 - 3) / (1.0 + rho).powi(n as i32 - 2);
    let g = |x: f64| gamma_fn(x);
    let f1 = hyp2f1(
        &HypParams::new(nf / 2.0 - 1.0, (nf - 1.0) / 2.0, nf, rt),
        HypMethod::Series,
    )?;
    let f2 = hyp2f1(
        &HypParams::new(nf / 2.0 - 1.0, (nf - 1.0) / 2.0, nf - 1.0, rt),
        HypMethod::Series,
    )?;
    let j1_hyp = lead * nf * g((nf - 1.0) / 2.0)? * g((nf + 1.0) / 2.0)? / g(nf)? * f1;
    let j2_hyp = lead * beta * g((nf - 1.0) / 2.0)?.powi(2) / g(nf - 1.0)? * f2;
    let closed = 2f64.powi(n as i32 - 3) * g((nf - 1.0) / 2.0)?.powi(2) / g(nf - 1.0)? * beta;
    Ok(JParts {
        j1_quad,
        j2_quad,
        j1_hyp,
        j2_hyp,
        closed,
    })
}

/// Poisson extension `U(y)` of the extremal boundary data
/// `sign ⟨∇P(x, ζ), ℓ⟩` for `x = ρe₁`, `ℓ = ℓ_τ`. The cubature sum is divided
/// by the cubature of `P(y, ·)` itself, which is exactly one, so constant
/// data is reproduced exactly.
pub fn extremal_extension(pp: &ProblemPoint, y: &[f64], rule: &SphereRule) -> Result<f64> {
    check_rule(pp, rule)?;
    if y.len() != pp.n() || y.iter().map(|v| v * v).sum::<f64>() >= 1.0 {
        return domain("evaluation point must lie in the open unit ball of the same dimension");
    }
    let x = pp.point();
    let ell = pp.direction();
    let est = rule.estimate(|z| {
        let p = poisson_kernel(y, z);
        let s = grad_poisson_dir(&x, z, &ell);
        [p * sign(s), p]
    });
    Ok(est.mean[0] / est.mean[1])
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Central difference `(U(x + hℓ/2) − U(x − hℓ/2))/h` of the extremal
/// extension; tends to `𝒞(x; ℓ)` as `h → 0`.
pub fn extremal_derivative(pp: &ProblemPoint, h: f64, rule: &SphereRule) -> Result<f64> {
    if !(h > 0.0) || pp.rho() + h >= 1.0 {
        return domain(format!("step must satisfy 0 < h and rho + h < 1, got h = {h}"));
    }
    let x = pp.point();
    let ell = pp.direction();
    let shifted = |sgn: f64| -> Vec<f64> { x.iter().zip(&ell).map(|(a, b)| a + sgn * 0.5 * h * b).collect() };
    let up = extremal_extension(pp, &shifted(1.0), rule)?;
    let down = extremal_extension(pp, &shifted(-1.0), rule)?;
    Ok((up - down) / h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::SphereMode;

    fn pp(n: usize, rho: f64, tau: f64) -> ProblemPoint {
        ProblemPoint::new(n, rho, tau).unwrap()
    }

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("simpson".parse::<Method>().is_err());
    }

    #[test]
    fn positive_root_finder() {
        assert_eq!(positive_roots(0.0, 2.0, -4.0), vec![2.0]);
        let r = positive_roots(-1.0, 0.0, 4.0);
        assert_eq!(r, vec![2.0]);
        let mut r = positive_roots(1.0, -3.0, 2.0);
        r.sort_by(f64::total_cmp);
        assert_eq!(r, vec![1.0, 2.0]);
        assert!(positive_roots(1.0, 0.0, 1.0).is_empty());
    }

    #[test]
    fn center_value_by_every_quadrature_route() {
        let p = pp(3, 0.0, 0.0);
        for v in [c_double1(&p, &cfg()), c_double2(&p, &cfg()), c_final(&p, &cfg())] {
            assert!((v.unwrap().value - 1.5).abs() < 1e-9);
        }
        let p = pp(3, 0.0, 1.0);
        assert!((c_final(&p, &cfg()).unwrap().value - 1.5).abs() < 1e-9);
    }

    #[test]
    fn boundary_anchors() {
        let v = c_final(&pp(3, 1.0, 0.0), &cfg()).unwrap().value;
        assert!((v - 4.0 / (3.0 * 3f64.sqrt())).abs() < 1e-10);
        let v = c_final(&pp(3, 1.0, FRAC_PI_2), &cfg()).unwrap().value;
        assert!((v - 2.0 / PI).abs() < 1e-10);
        let v = c_double2(&pp(3, 1.0, FRAC_PI_2), &cfg()).unwrap().value;
        assert!((v - 2.0 / PI).abs() < 1e-9);
        assert!(c_double1(&pp(3, 1.0, 0.0), &cfg()).is_err());
    }

    #[test]
    fn halfspace_values() {
        let v = c_halfspace(3, 0.0, &cfg()).unwrap().value;
        assert!((v - 4.0 / (3.0 * 3f64.sqrt())).abs() < 1e-12);
        let v = c_halfspace(4, 0.0, &cfg()).unwrap().value;
        assert!((v - 3.0 * 3f64.sqrt() / (2.0 * PI)).abs() < 1e-12);
        assert_eq!(c_halfspace(3, FRAC_PI_2, &cfg()).unwrap().value, 2.0 / PI);
        assert!(c_halfspace(2, 0.0, &cfg()).is_err());
        for n in 3..=8 {
            let a = c_halfspace(n, 0.0, &cfg()).unwrap().value;
            assert!((a - halfspace_radial(n).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn halfspace_matches_final_at_rho_one() {
        for n in [3usize, 5] {
            for tau in [0.2, 0.8, 1.3] {
                let a = c_halfspace(n, tau, &cfg()).unwrap().value;
                let b = c_final(&pp(n, 1.0, tau), &cfg()).unwrap().value;
                assert!((a - b).abs() < 1e-9, "n={n} tau={tau}");
            }
        }
    }

    #[test]
    fn zero_constants() {
        assert!((c_zero(3).unwrap() - 1.5).abs() < 1e-14);
        assert!((c_zero(2).unwrap() - 4.0 / PI).abs() < 1e-14);
        assert!((c_zero(4).unwrap() - 16.0 / (3.0 * PI)).abs() < 1e-14);
        assert_eq!(global_bound(5), c_zero(5));
        assert!(c_zero(1).is_err());
    }

    #[test]
    fn double_routes_agree_off_axis() {
        for (n, rho, tau) in [(3, 0.5, 0.7), (4, 0.9, 0.3), (5, 0.3, 1.2)] {
            let p = pp(n, rho, tau);
            let a = c_double1(&p, &cfg()).unwrap().value;
            let b = c_double2(&p, &cfg()).unwrap().value;
            let c = c_final(&p, &cfg()).unwrap().value;
            assert!((a - b).abs() < 2e-8, "n={n} rho={rho} tau={tau}: {a} {b}");
            assert!((b - c).abs() < 2e-8, "n={n} rho={rho} tau={tau}: {b} {c}");
        }
    }

    #[test]
    fn sphere_routes_at_the_center_and_in_the_plane() {
        let grid3 = SphereRule::new(3, 256, 0, SphereMode::LatLongGrid).unwrap();
        let v = c_sphere_oracle(&pp(3, 0.0, 0.4), &grid3).unwrap();
        assert!((v.value - 1.5).abs() < 1e-5);
        let v = c_moebius(&pp(3, 0.0, 0.0), &grid3).unwrap();
        assert!((v.value - 1.5).abs() < 1e-5);

        let grid2 = SphereRule::new(2, 1 << 14, 0, SphereMode::LatLongGrid).unwrap();
        let v = c_sphere_oracle(&pp(2, 0.5, 0.3), &grid2).unwrap();
        assert!((v.value - 4.0 / (PI * 1.5)).abs() < 1e-7);
        assert!((v.script().unwrap() - 4.0 / (PI * 0.75)).abs() < 1e-6);
        let v = c_moebius(&pp(2, 0.3, 1.0), &grid2).unwrap();
        assert!((v.value - 4.0 / (PI * 1.3)).abs() < 1e-7);

        assert!(c_sphere_oracle(&pp(3, 1.0, 0.0), &grid3).is_err());
        assert!(c_sphere_oracle(&pp(4, 0.5, 0.0), &grid3).is_err());
    }

    #[test]
    fn zero_integral_vanishes() {
        for (n, rho, tau) in [(3, 0.5, 0.7), (5, 0.9, PI / 3.0), (3, 0.0, 0.0), (4, 1.0, 0.4)] {
            let z = zero_integral_check(&pp(n, rho, tau), &cfg()).unwrap();
            assert!(z.signed.abs() <= 1e-9 * z.magnitude, "n={n} rho={rho}: {z:?}");
        }
    }

    #[test]
    fn j_parts_agree() {
        for n in 3..=6 {
            for rho in [0.25, 0.5, 0.75] {
                let j = j_parts(n, rho, &cfg()).unwrap();
                for v in [j.j1_quad, j.j2_quad, j.j1_hyp, j.j2_hyp] {
                    assert!((v - j.closed).abs() < 1e-8 * j.closed, "n={n} rho={rho}: {j:?}");
                }
            }
        }
    }

    #[test]
    fn extremal_extension_is_bounded_and_recovers_the_center_constant() {
        let p = pp(3, 0.0, 0.0);
        let grid = SphereRule::new(3, 512, 0, SphereMode::LatLongGrid).unwrap();
        let d = extremal_derivative(&p, 1e-3, &grid).unwrap();
        assert!((d - 1.5).abs() < 5e-3, "{d}");
        for y in [[0.9, 0.0, 0.0], [-0.5, 0.3, 0.2], [0.0, 0.0, 0.99]] {
            assert!(extremal_extension(&p, &y, &grid).unwrap().abs() <= 1.0);
        }
        assert!(extremal_derivative(&p, 1.0, &grid).is_err());
    }
}
