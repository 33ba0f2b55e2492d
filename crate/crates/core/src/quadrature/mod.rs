//! Adaptive one-dimensional quadrature, the two endpoint substitutions used by
//! the reduced representations, and numerical rules on the unit sphere.

mod rules;
mod sphere;

pub use rules::GaussLegendre;
pub use sphere::{sphere_quadrature, SphereEstimate, SphereMode, SphereRule, SphereSample};

use crate::error::{Error, Result};
use rules::{PanelEstimate, PanelRule};
use std::f64::consts::FRAC_PI_2;

/// Hard cap on the number of panels in a single adaptive integration.
const MAX_PANELS: usize = 20_000;

/// Tolerances and rule selection for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// maximum bisection depth of a single panel
    pub max_depth: u32,
    /// 15 selects the 7/15 Gauss–Kronrod pair, any other value `p >= 2` a
    /// `p`-point Gauss–Legendre rule with a `p/2`-point error estimate
    pub panel_order: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_depth: 40,
            panel_order: 15,
        }
    }
}

impl QuadratureConfig {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol >= 0.0 && self.abs_tol >= 0.0) || self.rel_tol + self.abs_tol <= 0.0 {
            return Err(Error::Domain(format!(
                "quadrature tolerances must be non-negative and not both zero (rel {}, abs {})",
                self.rel_tol, self.abs_tol
            )));
        }
        if self.panel_order < 2 {
            return Err(Error::Domain(format!(
                "panel order must be at least 2, got {}",
                self.panel_order
            )));
        }
        if self.max_depth == 0 || self.max_depth > 60 {
            return Err(Error::Domain(format!(
                "max depth must lie in 1..=60, got {}",
                self.max_depth
            )));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Value of an integral together with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub err_est: f64,
}

impl std::ops::Add for Integral {
    type Output = Integral;
    fn add(self, rhs: Integral) -> Integral {
        Integral {
            value: self.value + rhs.value,
            err_est: self.err_est + rhs.err_est,
        }
    }
}

impl Integral {
    pub const ZERO: Integral = Integral {
        value: 0.0,
        err_est: 0.0,
    };

    pub fn scale(self, c: f64) -> Integral {
        Integral {
            value: self.value * c,
            err_est: self.err_est * c.abs(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    est: PanelEstimate,
    depth: u32,
    frozen: Frozen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Frozen {
    No,
    Roundoff,
    Depth,
}

fn classify(a: f64, b: f64, est: &PanelEstimate, depth: u32, max_depth: u32) -> Frozen {
    let mid = 0.5 * (a + b);
    if est.err <= 50.0 * f64::EPSILON * est.abs_value || !(a < mid && mid < b) {
        Frozen::Roundoff
    } else if depth >= max_depth {
        Frozen::Depth
    } else {
        Frozen::No
    }
}

/// Integrates `f` over `[a, b]` by globally adaptive bisection.
pub fn integrate<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: Fn(f64) -> f64,
{
    try_integrate(|x| Ok(f(x)), a, b, cfg)
}

/// Like [`integrate`] for integrands that can fail; the first integrand
/// error aborts the integration and is returned unchanged.
pub fn try_integrate<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: Fn(f64) -> Result<f64>,
{
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!(
            "integration limits must be finite, got [{a}, {b}]"
        )));
    }
    if a > b {
        return Err(Error::Domain(format!("integration limits out of order: [{a}, {b}]")));
    }
    if a == b {
        return Ok(Integral::ZERO);
    }
    let rule = PanelRule::for_order(cfg.panel_order);
    let check = |est: PanelEstimate, x: f64| -> Result<PanelEstimate> {
        if est.value.is_finite() {
            Ok(est)
        } else {
            Err(Error::Singularity(format!("integrand is not finite near x = {x}")))
        }
    };

    let est = check(rule.apply(&f, a, b)?, a)?;
    let mut panels = vec![Panel {
        a,
        b,
        est,
        depth: 0,
        frozen: classify(a, b, &est, 0, cfg.max_depth),
    }];

    loop {
        let total: f64 = panels.iter().map(|p| p.est.value).sum();
        let err: f64 = panels.iter().map(|p| p.est.err).sum();
        let target = cfg.target(total);
        if err <= target {
            return Ok(finish(panels));
        }
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| p.frozen == Frozen::No)
            .max_by(|x, y| x.1.est.err.total_cmp(&y.1.est.err))
            .map(|(i, _)| i);
        let Some(i) = worst else {
            // Every panel is frozen. Roundoff-limited panels cannot be improved
            // and are accepted; depth-limited ones mean the tolerance was missed.
            let depth_err: f64 = panels
                .iter()
                .filter(|p| p.frozen == Frozen::Depth)
                .map(|p| p.est.err)
                .sum();
            if depth_err <= target {
                return Ok(finish(panels));
            }
            return Err(Error::Accuracy {
                what: format!("adaptive quadrature on [{a}, {b}] hit the depth limit"),
                value: total,
                err_est: err,
            });
        };
        if panels.len() >= MAX_PANELS {
            return Err(Error::Accuracy {
                what: format!("adaptive quadrature on [{a}, {b}] exhausted the panel budget"),
                value: total,
                err_est: err,
            });
        }
        let p = panels.swap_remove(i);
        let mid = 0.5 * (p.a + p.b);
        let depth = p.depth + 1;
        for (lo, hi) in [(p.a, mid), (mid, p.b)] {
            let est = check(rule.apply(&f, lo, hi)?, lo)?;
            panels.push(Panel {
                a: lo,
                b: hi,
                est,
                depth,
                frozen: classify(lo, hi, &est, depth, cfg.max_depth),
            });
        }
    }
}

fn finish(mut panels: Vec<Panel>) -> Integral {
    // Summing in a fixed left-to-right order keeps results independent of
    // the refinement history.
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut out = Integral::ZERO;
    for p in &panels {
        out.value += p.est.value;
        out.err_est += p.est.err;
    }
    out
}

/// Integrates over consecutive intervals between sorted breakpoints. Points
/// outside `[a, b]` and duplicates are ignored.
pub fn try_integrate_with_breaks<F>(f: F, a: f64, b: f64, breaks: &[f64], cfg: &QuadratureConfig) -> Result<Integral>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut out = Integral::ZERO;
    let mut lo = a;
    for hi in pts.into_iter().chain(std::iter::once(b)) {
        out = out + try_integrate(&f, lo, hi, cfg)?;
        lo = hi;
    }
    Ok(out)
}

/// Computes `∫₀¹ g(t) (1 − t²)^{(n−4)/2} dt` for `n >= 3`.
///
/// With `t = sin θ` the weight becomes `cos^{n−3} θ`, which is bounded, so the
/// endpoint singularity at `n = 3` disappears.
pub fn integrate_t_weight<G>(g: G, n: usize, cfg: &QuadratureConfig) -> Result<Integral>
where
    G: Fn(f64) -> f64,
{
    try_integrate_t_weight(|t| Ok(g(t)), n, cfg)
}

pub fn try_integrate_t_weight<G>(g: G, n: usize, cfg: &QuadratureConfig) -> Result<Integral>
where
    G: Fn(f64) -> Result<f64>,
{
    if n < 3 {
        return Err(Error::Domain(format!("t-weight needs n >= 3, got {n}")));
    }
    let p = (n - 3) as i32;
    try_integrate(
        |theta: f64| Ok(g(theta.sin())? * theta.cos().powi(p)),
        0.0,
        FRAC_PI_2,
        cfg,
    )
}

/// Computes `∫₀^∞ f(w) dw` through `w = tan θ`.
///
/// `f(w)/cos²θ` must have a finite limit as `θ → π/2`, i.e. `f` must decay
/// at least like `w^{-2}`. The endpoint itself is never sampled.
pub fn integrate_halfline<F>(f: F, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: Fn(f64) -> f64,
{
    try_integrate_halfline(|w| Ok(f(w)), cfg)
}

pub fn try_integrate_halfline<F>(f: F, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: Fn(f64) -> Result<f64>,
{
    try_integrate(
        |theta: f64| {
            let c = theta.cos();
            Ok(f(theta.tan())? / (c * c))
        },
        0.0,
        FRAC_PI_2,
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma_fn;
    use std::f64::consts::PI;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn smooth_integrals() {
        let r = integrate(f64::sin, 0.0, PI, &cfg()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-13);
        let r = integrate(|x| (-x * x).exp(), -5.0, 5.0, &cfg()).unwrap();
        assert!((r.value - PI.sqrt()).abs() < 1e-11);
        let r = integrate(|x| 1.0 / (1.0 + x * x), 0.0, 1.0, &cfg()).unwrap();
        assert!((r.value - PI / 4.0).abs() < 1e-14);
    }

    #[test]
    fn error_estimate_is_honest() {
        let c = QuadratureConfig::with_tolerances(1e-6, 0.0);
        let r = integrate(|x| x.sqrt(), 0.0, 1.0, &c).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() <= r.err_est.max(1e-15));
        assert!(r.err_est <= 1e-6 * r.value);
    }

    #[test]
    fn kinked_integrand() {
        // ∫₀¹ |x − 1/3| dx = 5/18
        let tight = QuadratureConfig::with_tolerances(1e-14, 0.0);
        let r = integrate(|x| (x - 1.0 / 3.0).abs(), 0.0, 1.0, &tight).unwrap();
        assert!((r.value - 5.0 / 18.0).abs() < 1e-12);
    }

    #[test]
    fn integrable_endpoint_singularity() {
        let c = QuadratureConfig::with_tolerances(1e-7, 0.0);
        let r = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, &c).unwrap();
        assert!((r.value - 2.0).abs() < 2e-7);
    }

    #[test]
    fn gauss_legendre_panels() {
        let c = QuadratureConfig {
            panel_order: 10,
            ..cfg()
        };
        let r = integrate(f64::exp, 0.0, 1.0, &c).unwrap();
        assert!((r.value - (1f64.exp() - 1.0)).abs() < 1e-14);
        let c = QuadratureConfig {
            panel_order: 31,
            ..QuadratureConfig::with_tolerances(1e-14, 0.0)
        };
        let r = integrate(|x| (x - 0.3).abs(), 0.0, 1.0, &c).unwrap();
        assert!((r.value - (0.045 + 0.245)).abs() < 1e-12);
    }

    #[test]
    fn degenerate_and_invalid_ranges() {
        assert_eq!(integrate(f64::exp, 1.0, 1.0, &cfg()).unwrap(), Integral::ZERO);
        assert!(matches!(integrate(f64::exp, 1.0, 0.0, &cfg()), Err(Error::Domain(_))));
        assert!(matches!(
            integrate(f64::exp, 0.0, f64::INFINITY, &cfg()),
            Err(Error::Domain(_))
        ));
        let bad = QuadratureConfig {
            rel_tol: 0.0,
            abs_tol: 0.0,
            ..cfg()
        };
        assert!(matches!(integrate(f64::exp, 0.0, 1.0, &bad), Err(Error::Domain(_))));
    }

    #[test]
    fn depth_limit_reports_partial_value() {
        let c = QuadratureConfig {
            max_depth: 3,
            rel_tol: 1e-14,
            abs_tol: 0.0,
            panel_order: 15,
        };
        match integrate(|x| x.ln().abs().powf(3.0), 0.0, 1.0, &c) {
            Err(Error::Accuracy { value, err_est, .. }) => {
                assert!(value.is_finite() && err_est > 0.0);
                assert!((value - 6.0).abs() < 1.0);
            }
            other => panic!("expected an accuracy error, got {other:?}"),
        }
    }

    #[test]
    fn integrand_errors_propagate() {
        let r = try_integrate(
            |x| {
                if x > 0.5 {
                    Err(Error::Singularity("boom".into()))
                } else {
                    Ok(x)
                }
            },
            0.0,
            1.0,
            &cfg(),
        );
        assert!(matches!(r, Err(Error::Singularity(_))));
        let r = integrate(|x| 1.0 / (x - 0.5), 0.0, 1.0, &cfg());
        assert!(r.is_err());
    }

    #[test]
    fn breakpoints_split_the_range() {
        let r = try_integrate_with_breaks(
            |x| Ok((x - 0.3).abs() + (x - 0.7).abs()),
            0.0,
            1.0,
            &[0.7, 0.3, 0.3, 2.0, -1.0],
            &cfg(),
        )
        .unwrap();
        let want = (0.045 + 0.245) + (0.245 + 0.045);
        assert!((r.value - want).abs() < 1e-14);
    }

    #[test]
    fn t_weight_matches_beta_function() {
        // ∫₀¹ (1 − t²)^{(n−4)/2} dt = (√π/2) Γ((n−2)/2) / Γ((n−1)/2)
        for n in 3..=10usize {
            let nf = n as f64;
            let want = 0.5 * PI.sqrt() * gamma_fn((nf - 2.0) / 2.0).unwrap() / gamma_fn((nf - 1.0) / 2.0).unwrap();
            let r = integrate_t_weight(|_| 1.0, n, &cfg()).unwrap();
            assert!((r.value - want).abs() < 1e-10 * want, "n = {n}");
        }
        assert!(integrate_t_weight(|_| 1.0, 2, &cfg()).is_err());
    }

    #[test]
    fn halfline_rational_integrands() {
        for n in [3usize, 4] {
            let nf = n as f64;
            let f = |w: f64| w.powi(n as i32 - 1) / (1.0 + w * w).powf(nf / 2.0 + 1.0);
            let r = integrate_halfline(f, &cfg()).unwrap();
            assert!((r.value - 1.0 / nf).abs() < 1e-12, "n = {n}");
        }
        let r = integrate_halfline(|w| 1.0 / (1.0 + w * w), &cfg()).unwrap();
        assert!((r.value - FRAC_PI_2).abs() < 1e-13);
    }
}
