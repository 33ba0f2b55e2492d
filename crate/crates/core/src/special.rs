//! Gamma, Pochhammer and Gauss hypergeometric functions, plus sphere areas.
//!
//! Everything here is real-valued. The hypergeometric function is only
//! supported inside the unit disc of convergence, `|z| < 1`, which covers
//! every argument the representations in this crate produce.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::quadrature::{try_integrate, QuadratureConfig};

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Relative tolerance at which the hypergeometric series is truncated.
pub const SERIES_REL_TOL: f64 = 1e-14;
/// Hard cap on the number of hypergeometric series terms.
pub const SERIES_MAX_TERMS: usize = 10_000;

/// The Gamma function for positive real arguments (Lanczos, g = 7, 9 terms).
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("gamma_fn requires x > 0, got {x}"));
    }
    if x > 20.0 {
        // Lanczos loses a few digits through exp/pow at large x; reduce to
        // [10, 11) and multiply back up instead.
        let m = (x - 10.0).floor();
        let y = x - m;
        let mut g = lanczos(y);
        for j in 0..m as u32 {
            g *= y + j as f64;
        }
        return Ok(g);
    }
    Ok(lanczos(x))
}

fn lanczos(x: f64) -> f64 {
    if x < 0.5 {
        // reflection; x is in (0, 1/2) here so sin(pi x) > 0
        return PI / ((PI * x).sin() * lanczos(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    // split the power so that t^(x+1/2) does not overflow before exp(-t) is applied
    let half = t.powf(0.5 * (x + 0.5));
    (2.0 * PI).sqrt() * half * (-t).exp() * half * acc
}

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (a + i as f64))
}

/// Parameters of `2F1(a, b; c; z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub z: f64,
}

impl HypParams {
    pub fn new(a: f64, b: f64, c: f64, z: f64) -> Self {
        Self { a, b, c, z }
    }

    fn check_common(&self) -> Result<()> {
        if !(self.z.abs() < 1.0) {
            return domain(format!("2F1 needs |z| < 1, got z = {}", self.z));
        }
        if self.c <= 0.0 && self.c.fract() == 0.0 {
            return domain(format!("2F1 undefined for c = {} (non-positive integer)", self.c));
        }
        Ok(())
    }
}

/// Evaluation route for [`hyp2f1`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypMethod {
    Series,
    EulerIntegral,
}

/// Gauss hypergeometric function `2F1(a, b; c; z)` for real `|z| < 1`.
///
/// The series route sums terms until the geometric tail bound drops below
/// [`SERIES_REL_TOL`] of the partial sum; it terminates exactly when `a` or `b`
/// is a non-positive integer. The Euler route needs `c > b > 0`.
pub fn hyp2f1(p: &HypParams, method: HypMethod) -> Result<f64> {
    match method {
        HypMethod::Series => hyp2f1_series(p),
        HypMethod::EulerIntegral => hyp2f1_euler(p, &QuadratureConfig::with_tolerances(1e-13, 1e-15)),
    }
}

fn non_positive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

pub(crate) fn hyp2f1_series(p: &HypParams) -> Result<f64> {
    p.check_common()?;
    let HypParams { a, b, c, z } = *p;
    let terminating = non_positive_integer(a) || non_positive_integer(b);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..SERIES_MAX_TERMS {
        let kf = k as f64;
        let ratio = (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        term *= ratio;
        if term == 0.0 {
            // exact termination, z = 0, or underflow of a convergent tail
            return Ok(sum);
        }
        sum += term;
        if !terminating {
            // ratio of the next term; the tail is bounded geometrically once it is < 1
            let next = ((a + kf + 1.0) * (b + kf + 1.0) / ((c + kf + 1.0) * (kf + 2.0)) * z).abs();
            if next < 1.0 && term.abs() / (1.0 - next) <= SERIES_REL_TOL * sum.abs() {
                return Ok(sum);
            }
        }
    }
    Err(Error::Accuracy {
        what: format!("2F1 series did not converge in {SERIES_MAX_TERMS} terms"),
        value: sum,
        err_est: term.abs(),
    })
}

/// Euler integral route with an explicit quadrature configuration.
///
/// The interval is split at 1/2 and the power singularities of
/// `t^(b-1)` and `(1-t)^(c-b-1)` are removed by `u = t^b` and `v = (1-t)^(c-b)`
/// whenever the exponent is negative.
pub fn hyp2f1_euler(p: &HypParams, cfg: &QuadratureConfig) -> Result<f64> {
    p.check_common()?;
    let HypParams { a, b, c, z } = *p;
    if !(c > b && b > 0.0) {
        return domain(format!("Euler integral needs c > b > 0, got b = {b}, c = {c}"));
    }
    let e = c - b;
    let core = |t: f64| (1.0 - z * t).powf(-a);

    let left = if b < 1.0 {
        let upper = 0.5f64.powf(b);
        try_integrate(
            |u: f64| {
                let t = u.powf(1.0 / b);
                Ok((1.0 - t).powf(e - 1.0) * core(t) / b)
            },
            0.0,
            upper,
            cfg,
        )?
    } else {
        try_integrate(
            |t: f64| Ok(t.powf(b - 1.0) * (1.0 - t).powf(e - 1.0) * core(t)),
            0.0,
            0.5,
            cfg,
        )?
    };
    let right = if e < 1.0 {
        let upper = 0.5f64.powf(e);
        try_integrate(
            |v: f64| {
                let t = 1.0 - v.powf(1.0 / e);
                Ok(t.powf(b - 1.0) * core(t) / e)
            },
            0.0,
            upper,
            cfg,
        )?
    } else {
        try_integrate(
            |t: f64| Ok(t.powf(b - 1.0) * (1.0 - t).powf(e - 1.0) * core(t)),
            0.5,
            1.0,
            cfg,
        )?
    };
    let scale = gamma_fn(c)? / (gamma_fn(b)? * gamma_fn(e)?);
    Ok(scale * (left.value + right.value))
}

/// Both sides of the quadratic transformation
/// `2F1(a/2, (a+1)/2; a-b+1; z) = ((1+s)/2)^(-a) 2F1(a, b; a-b+1; (1-s)/(1+s))`,
/// `s = sqrt(1-z)`, evaluated by the series. Returns `(lhs, rhs)`.
pub fn hyp2f1_quadratic_lhs_rhs(a: f64, b: f64, z: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&z) {
        return domain(format!("quadratic transform needs z in [0, 1), got {z}"));
    }
    let c = a - b + 1.0;
    if non_positive_integer(c) {
        return domain(format!("a - b + 1 = {c} is a non-positive integer"));
    }
    let lhs = hyp2f1_series(&HypParams::new(a / 2.0, (a + 1.0) / 2.0, c, z))?;
    let s = (1.0 - z).sqrt();
    let w = (1.0 - s) / (1.0 + s);
    let rhs = ((1.0 + s) / 2.0).powf(-a) * hyp2f1_series(&HypParams::new(a, b, c, w))?;
    Ok((lhs, rhs))
}

/// Area of the unit sphere in `R^n`: `2 pi^(n/2) / Gamma(n/2)`, with `omega_1 = 2`.
pub fn surface_area(n: usize) -> Result<f64> {
    match n {
        0 => domain("surface_area requires n >= 1"),
        1 => Ok(2.0),
        _ => {
            let half = n as f64 / 2.0;
            Ok(2.0 * PI.powf(half) / gamma_fn(half)?)
        }
    }
}
