//! Scalar kernels: the Poisson kernel and its gradient, the Möbius map of the
//! sphere, the integrands of the iterated representations and the
//! ingredients `Z`, `Q`, `W`, `P_ρ` of the one-dimensional representation.
//!
//! Every evaluator works in the canonical frame `x = ρe₁`,
//! `ℓ_τ = cos τ e₁ + sin τ e₂`; [`canonicalize`] reduces a general point and
//! direction to that frame.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::quadrature::{try_integrate, Integral, QuadratureConfig};

/// Angles this close to π/2 are treated as exactly tangential.
const TANGENTIAL_SNAP: f64 = 1e-12;

/// `γ = tan τ`, kept symbolic at τ = π/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Slope {
    Finite(f64),
    Infinite,
}

/// Canonical description of a ball point `x = ρe₁` and a direction at angle
/// `τ ∈ [0, π/2]` from the line through `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProblemPoint {
    n: usize,
    rho: f64,
    tau: f64,
}

impl ProblemPoint {
    pub fn new(n: usize, rho: f64, tau: f64) -> Result<Self> {
        if n < 2 {
            return domain(format!("dimension must be at least 2, got {n}"));
        }
        if !(0.0..=1.0).contains(&rho) {
            return domain(format!("rho must lie in [0, 1], got {rho}"));
        }
        if !(0.0..=FRAC_PI_2 + TANGENTIAL_SNAP).contains(&tau) {
            return domain(format!("tau must lie in [0, pi/2], got {tau}"));
        }
        let tau = if FRAC_PI_2 - tau <= TANGENTIAL_SNAP {
            FRAC_PI_2
        } else {
            tau
        };
        Ok(Self { n, rho, tau })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }

    pub fn is_tangential(&self) -> bool {
        self.tau == FRAC_PI_2
    }

    pub fn slope(&self) -> Slope {
        if self.is_tangential() {
            Slope::Infinite
        } else {
            Slope::Finite(self.tau.tan())
        }
    }

    /// `α_ρ = (n−2)ρ/n`
    pub fn alpha(&self) -> f64 {
        (self.nf() - 2.0) * self.rho / self.nf()
    }

    /// `β_ρ = (n − (n−2)ρ)/2`
    pub fn beta(&self) -> f64 {
        (self.nf() - (self.nf() - 2.0) * self.rho) / 2.0
    }

    /// `κ_ρ = (1−ρ)/(1+ρ)`
    pub fn kappa(&self) -> f64 {
        (1.0 - self.rho) / (1.0 + self.rho)
    }

    /// Positive root `w_ρ` of `Q` at `z = 0`.
    pub fn w_radial(&self) -> f64 {
        let m = (self.nf() - 2.0) * self.rho;
        ((self.nf() + m) / (self.nf() - m)).sqrt()
    }

    /// Same point with another direction.
    pub fn with_tau(&self, tau: f64) -> Result<Self> {
        Self::new(self.n, self.rho, tau)
    }

    pub(crate) fn require_reduced(&self) -> Result<()> {
        if self.n < 3 {
            return domain(format!("this representation needs n >= 3, got n = {}", self.n));
        }
        Ok(())
    }

    /// `x = ρe₁` in `R^n`.
    pub fn point(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        x[0] = self.rho;
        x
    }

    /// `ℓ_τ = cos τ e₁ + sin τ e₂`.
    pub fn direction(&self) -> Vec<f64> {
        direction(self.n, self.tau)
    }
}

pub(crate) fn direction(n: usize, tau: f64) -> Vec<f64> {
    let mut ell = vec![0.0; n];
    ell[0] = tau.cos();
    if n > 1 {
        ell[1] = tau.sin();
    }
    ell
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a)
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Reduces `(x, ℓ)` to the canonical `(n, ρ, τ)`. The constant is invariant
/// under rotations and under `ℓ ↦ −ℓ`, and at the origin it does not depend
/// on the direction, so `τ = 0` there.
pub fn canonicalize(x: &[f64], ell: &[f64]) -> Result<ProblemPoint> {
    let n = x.len();
    if ell.len() != n {
        return domain(format!("x has {n} coordinates but ell has {}", ell.len()));
    }
    if x.iter().chain(ell).any(|v| !v.is_finite()) {
        return domain("x and ell must be finite");
    }
    let rho = norm2(x).sqrt();
    if rho >= 1.0 {
        return domain(format!("x must lie in the open unit ball, |x| = {rho}"));
    }
    let len = norm2(ell).sqrt();
    if (len - 1.0).abs() > 1e-10 {
        return domain(format!("ell must be a unit vector, |ell| = {len}"));
    }
    if rho == 0.0 {
        return ProblemPoint::new(n, 0.0, 0.0);
    }
    let c = (dot(x, ell).abs() / (rho * len)).min(1.0);
    ProblemPoint::new(n, rho, c.acos())
}

/// `P(y, ζ) = (1 − |y|²)/|y − ζ|^n` with `n = y.len()`.
pub fn poisson_kernel(y: &[f64], zeta: &[f64]) -> f64 {
    let n = y.len() as i32;
    (1.0 - norm2(y)) / dist2(y, zeta).sqrt().powi(n)
}

/// `∇_x P(x, ζ) = (−2x|x−ζ|² − n(1−|x|²)(x−ζ))/|x−ζ|^{n+2}`.
pub fn grad_poisson(x: &[f64], zeta: &[f64]) -> Vec<f64> {
    let nf = x.len() as f64;
    let d2 = dist2(x, zeta);
    let s = 1.0 - norm2(x);
    let scale = d2.sqrt().powi(x.len() as i32 + 2);
    x.iter()
        .zip(zeta)
        .map(|(xi, zi)| (-2.0 * xi * d2 - nf * s * (xi - zi)) / scale)
        .collect()
}

/// `⟨∇_x P(x, ζ), ℓ⟩` without allocating.
pub fn grad_poisson_dir(x: &[f64], zeta: &[f64], ell: &[f64]) -> f64 {
    let nf = x.len() as f64;
    let d2 = dist2(x, zeta);
    let s = 1.0 - norm2(x);
    let mut num = 0.0;
    for i in 0..x.len() {
        num += ell[i] * (-2.0 * x[i] * d2 - nf * s * (x[i] - zeta[i]));
    }
    num / d2.sqrt().powi(x.len() as i32 + 2)
}

/// `T_x(η) = (1−|x|²)(η−x)/|η−x|² − x`, a bijection of the unit sphere.
pub fn moebius_sphere_map(x: &[f64], eta: &[f64]) -> Vec<f64> {
    let s = 1.0 - norm2(x);
    let d2 = dist2(eta, x);
    eta.iter().zip(x).map(|(e, xi)| s * (e - xi) / d2 - xi).collect()
}

/// `G̃ = (n/2)[(cos θ̃ − α_ρ) cos τ + sin θ̃ cos φ sin τ]`. `τ` is taken
/// separately so that angles outside `[0, π/2]` can be probed.
pub fn kernel_g_tilde(phi: f64, theta_t: f64, tau: f64, pp: &ProblemPoint) -> f64 {
    0.5 * pp.nf() * ((theta_t.cos() - pp.alpha()) * tau.cos() + theta_t.sin() * phi.cos() * tau.sin())
}

/// `R = (1 + ρ² − 2ρ cos θ̃)^{1−n/2}`.
pub fn kernel_r(theta_t: f64, pp: &ProblemPoint) -> Result<f64> {
    let rho = pp.rho();
    let base = (1.0 - rho).powi(2) + 2.0 * rho * (1.0 - theta_t.cos());
    if base == 0.0 && pp.n() > 2 {
        return Err(Error::Singularity(format!(
            "R is singular at rho = {rho}, theta = {theta_t}"
        )));
    }
    Ok(base.powf(1.0 - 0.5 * pp.nf()))
}

/// `G = (n cos²θ − β_ρ) cos τ + n sin θ cos θ cos φ sin τ`.
pub fn kernel_g(phi: f64, theta: f64, tau: f64, pp: &ProblemPoint) -> f64 {
    let (s, c) = theta.sin_cos();
    let nf = pp.nf();
    (nf * c * c - pp.beta()) * tau.cos() + nf * s * c * phi.cos() * tau.sin()
}

/// `S = sin^{n−2} 2θ / ((1+ρ)² − 4ρ sin²θ)^{n/2−1}`, evaluated in the
/// factored form `(2/(1+ρ))^{n−2} (sin θ cos θ)^{n−2} / (cos²θ + κ² sin²θ)^{n/2−1}`
/// so that `ρ = 1, θ = π/2` has its limit value.
pub fn kernel_s(theta: f64, pp: &ProblemPoint) -> f64 {
    let (s, c) = theta.sin_cos();
    let m = pp.n() as i32 - 2;
    let k = pp.kappa();
    let pref = (2.0 / (1.0 + pp.rho())).powi(m);
    if k == 0.0 {
        // cos^{n-2} cancels exactly
        return pref * s.powi(m);
    }
    let ratio = c * c / (c * c + k * k * s * s);
    pref * s.powi(m) * ratio.powf(0.5 * m as f64)
}

/// Positive root `Z(z) = (z + √(z² + 1 − α²))/(1 − α)` of `Q`.
pub fn kernel_z(z: f64, pp: &ProblemPoint) -> f64 {
    let a = pp.alpha();
    let r = (z * z + 1.0 - a * a).sqrt();
    if z >= 0.0 {
        (z + r) / (1.0 - a)
    } else {
        // rationalized to avoid cancellation for large negative z
        (1.0 + a) / (r - z)
    }
}

/// `Q(w) = n − β_ρ + n z w − β_ρ w²`.
pub fn kernel_q(w: f64, z: f64, pp: &ProblemPoint) -> f64 {
    let b = pp.beta();
    pp.nf() - b + pp.nf() * z * w - b * w * w
}

/// `W(w) = w^{n−2}/((1+w²)^{n/2+1}(1+κ²w²)^{n/2−1})`.
pub fn kernel_w(w: f64, pp: &ProblemPoint) -> f64 {
    let nf = pp.nf();
    let k = pp.kappa();
    let w2 = w * w;
    w.powi(pp.n() as i32 - 2) / ((1.0 + w2).powf(0.5 * nf + 1.0) * (1.0 + k * k * w2).powf(0.5 * nf - 1.0))
}

/// `P_ρ(z) = ∫₀^{Z(z)} Q(w) W(w) dw`.
///
/// Evaluated with `w = tan θ`, which turns the integrand into the bounded
/// trigonometric polynomial-like form
/// `[(n−β)cos²θ + nz sin θ cos θ − β sin²θ] sin^{n−2}θ (cos²θ/(cos²θ + κ² sin²θ))^{(n−2)/2}`
/// on `[0, arctan Z(z)]`.
pub fn p_rho(z: f64, pp: &ProblemPoint, cfg: &QuadratureConfig) -> Result<Integral> {
    pp.require_reduced()?;
    if !z.is_finite() {
        return domain(format!("P_rho needs a finite argument, got {z}"));
    }
    let upper = kernel_z(z, pp).atan();
    let nf = pp.nf();
    let b = pp.beta();
    let k2 = pp.kappa() * pp.kappa();
    let m = pp.n() as i32 - 2;
    let half_m = 0.5 * m as f64;
    try_integrate(
        |theta: f64| {
            let (s, c) = theta.sin_cos();
            let q = (nf - b) * c * c + nf * z * s * c - b * s * s;
            let damp = if k2 == 0.0 {
                1.0
            } else {
                (c * c / (c * c + k2 * s * s)).powf(half_m)
            };
            Ok(q * s.powi(m) * damp)
        },
        0.0,
        upper,
        cfg,
    )
}

/// Integral-free `P₁(z) = (1/n) Z^{n−1}/(1+Z²)^{n/2−1}` with `Z` taken at `ρ = 1`.
pub fn p1_closed(z: f64, n: usize) -> f64 {
    let nf = n as f64;
    let a = (nf - 2.0) / nf;
    let r = (z * z + 1.0 - a * a).sqrt();
    let big_z = if z >= 0.0 {
        (z + r) / (1.0 - a)
    } else {
        (1.0 + a) / (r - z)
    };
    big_z.powi(n as i32 - 1) / (nf * (1.0 + big_z * big_z).powf(0.5 * nf - 1.0))
}

/// `𝒫(y) = s^{n−1}/(1 + (n−1)s²)^{n/2−1}` with `s = y + √(y²+1)`.
pub fn p_script(y: f64, n: usize) -> f64 {
    let nf = n as f64;
    let r = (y * y + 1.0).sqrt();
    let s = if y >= 0.0 { y + r } else { 1.0 / (r - y) };
    s.powi(n as i32 - 1) / (1.0 + (nf - 1.0) * s * s).powf(0.5 * nf - 1.0)
}

/// Constant `c_n` in `P₁(z) = c_n 𝒫(nz/(2√(n−1)))`, namely `(n−1)^{(n−1)/2}/n`.
pub fn p1_scale(n: usize) -> f64 {
    let nf = n as f64;
    (nf - 1.0).powf(0.5 * (nf - 1.0)) / nf
}

/// Argument map `z ↦ nz/(2√(n−1))` of the scaling identity.
pub fn p1_argument(z: f64, n: usize) -> f64 {
    let nf = n as f64;
    nf * z / (2.0 * (nf - 1.0).sqrt())
}

/// `A(z) = √(az² + b)`.
pub fn majorant_a(z: f64, a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return domain(format!("majorant needs a, b > 0, got a = {a}, b = {b}"));
    }
    Ok((a * z * z + b).sqrt())
}
