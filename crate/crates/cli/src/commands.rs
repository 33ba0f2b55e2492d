//! Sub-command implementations; each returns an [`OutputRecord`].

use std::f64::consts::FRAC_PI_2;

use khavinson_core::analysis::{
    conjecture_scan, uniform_grid, verify_cross_methods, verify_extremal_lemma, verify_hypergeometric, verify_ineq_rho,
    verify_zero_integral, CheckPoint, VerificationReport,
};
use khavinson_core::{
    c_halfspace, canonicalize, evaluate, sweep_tau, verify_km_inequality, verify_p1_inequality, Method, ProblemPoint,
    QuadratureConfig, SphereMode, SphereRule,
};

use crate::args::{Cli, Command, ConjectureArgs, ConstantArgs, Domain, SphereKind, Suite, SweepArgs, VerifyArgs};
use crate::error::{CliError, CliResult};
use crate::record::{Num, OutputRecord, ResultEntry};

pub fn run(cli: &Cli) -> CliResult<OutputRecord> {
    let cfg = QuadratureConfig::with_tolerances(cli.rel_tol, cli.abs_tol);
    cfg.validate()?;
    let mut rec = OutputRecord::new(command_name(&cli.command), cli.rel_tol, cli.abs_tol);
    match &cli.command {
        Command::Constant(a) => constant(a, &cfg, &mut rec)?,
        Command::Sweep(a) => sweep(a, &cfg, &mut rec)?,
        Command::Conjecture(a) => conjecture(a, &cfg, &mut rec)?,
        Command::Verify(a) => verify(a, &cfg, &mut rec)?,
    }
    Ok(rec)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Constant(_) => "constant",
        Command::Sweep(_) => "sweep",
        Command::Conjecture(_) => "conjecture",
        Command::Verify(_) => "verify",
    }
}

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

fn constant(a: &ConstantArgs, cfg: &QuadratureConfig, rec: &mut OutputRecord) -> CliResult<()> {
    match a.domain {
        Domain::Ball => constant_ball(a, cfg, rec),
        Domain::Halfspace => constant_halfspace(a, cfg, rec),
    }
}

fn constant_ball(a: &ConstantArgs, cfg: &QuadratureConfig, rec: &mut OutputRecord) -> CliResult<()> {
    rec.input("domain", "ball");
    let pp = match (&a.x, &a.ell) {
        (Some(x), Some(ell)) => {
            if a.n.is_some_and(|n| n != x.len()) {
                return usage(format!("--n {} does not match the length of --x", a.n.unwrap_or(0)));
            }
            rec.input("x", x.clone());
            rec.input("ell", ell.clone());
            canonicalize(x, ell)?
        }
        (None, Some(_)) => return usage("--ell needs --x in the ball"),
        _ => {
            let (Some(n), Some(rho), Some(tau)) = (a.n, a.rho, a.tau) else {
                return usage("ball constants need --n, --rho and --tau, or --x and --ell");
            };
            ProblemPoint::new(n, rho, tau)?
        }
    };
    let method = a.method.unwrap_or(if pp.n() == 2 {
        Method::SphereOracle
    } else {
        Method::Final
    });
    rec.input("n", pp.n());
    rec.input("rho", pp.rho());
    rec.input("tau", pp.tau());
    rec.input("method", method.name());

    let rule = if method.uses_sphere() {
        let kind = a
            .sphere
            .unwrap_or(if pp.n() <= 3 { SphereKind::Grid } else { SphereKind::Mc });
        rec.input("sphere", if kind == SphereKind::Grid { "grid" } else { "mc" });
        Some(match kind {
            SphereKind::Grid => SphereRule::reference_grid(pp.n())?,
            SphereKind::Mc => {
                rec.input("samples", a.samples);
                rec.metadata.seed = Some(a.seed);
                SphereRule::new(pp.n(), a.samples, a.seed, SphereMode::MonteCarlo)?
            }
        })
    } else {
        if a.sphere.is_some() {
            return usage(format!("--sphere applies only to sphere methods, not {method}"));
        }
        None
    };

    let c = evaluate(&pp, method, cfg, rule.as_ref())?;
    let at = |e: ResultEntry| e.at(pp.n(), Some(pp.rho()), Some(pp.tau())).method(method.name());
    rec.results.push(at(ResultEntry::new("C", c.value, c.err_est)));
    if let Some(script) = c.script() {
        let err = c.err_est / (1.0 - pp.rho());
        rec.results.push(at(ResultEntry::new("C_script", script, err)));
    }
    Ok(())
}

fn constant_halfspace(a: &ConstantArgs, cfg: &QuadratureConfig, rec: &mut OutputRecord) -> CliResult<()> {
    rec.input("domain", "halfspace");
    if a.rho.is_some() || a.x.is_some() {
        return usage("the half-space constant takes no --rho or --x");
    }
    if a.method.is_some_and(|m| m != Method::Final) || a.sphere.is_some() {
        return usage("the half-space constant is evaluated by the final representation only");
    }
    let Some(n) = a.n.or(a.ell.as_ref().map(Vec::len)) else {
        return usage("half-space constants need --n");
    };
    let tau = match (&a.ell, a.tau) {
        (Some(ell), _) => {
            if ell.len() != n {
                return usage(format!("--ell has {} coordinates, expected {n}", ell.len()));
            }
            rec.input("ell", ell.clone());
            // angle to the inner normal e_n
            let len = ell.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !(len > 0.0) {
                return usage("--ell must be nonzero");
            }
            (ell[n - 1].abs() / len).min(1.0).acos()
        }
        (None, Some(tau)) => tau,
        (None, None) => return usage("half-space constants need --tau or --ell"),
    };
    let c = c_halfspace(n, tau, cfg)?;
    rec.input("n", n);
    rec.input("tau", c.point.tau());
    rec.input("method", Method::Final.name());
    rec.results.push(
        ResultEntry::new("C", c.value, c.err_est)
            .at(n, None, Some(c.point.tau()))
            .method(Method::Final.name()),
    );
    Ok(())
}

fn sweep(a: &SweepArgs, cfg: &QuadratureConfig, rec: &mut OutputRecord) -> CliResult<()> {
    rec.input("n", a.n);
    rec.input("rho", a.rho);
    rec.input("grid", a.grid);
    let r = sweep_tau(a.n, a.rho, a.grid, cfg)?;
    let fin = Method::Final.name();
    for s in &r.samples {
        rec.results.push(
            ResultEntry::new("C", s.value, f64::NAN)
                .at(a.n, Some(a.rho), Some(s.tau))
                .method(fin),
        );
    }
    let point = |name: &str, value: f64, tau: Option<f64>| {
        ResultEntry::new(name, value, f64::NAN)
            .at(a.n, Some(a.rho), tau)
            .method(fin)
    };
    rec.results.push(point("argmax_tau", r.argmax_tau, Some(r.argmax_tau)));
    rec.results
        .push(point("argmax_value", r.argmax_value, Some(r.argmax_tau)));
    rec.results.push(point("radial_value", r.radial_value, Some(0.0)));
    rec.results
        .push(point("tangential_value", r.tangential_value, Some(FRAC_PI_2)));
    rec.summarize("conjecture_holds", r.conjecture_holds);
    Ok(())
}

fn conjecture(a: &ConjectureArgs, cfg: &QuadratureConfig, rec: &mut OutputRecord) -> CliResult<()> {
    rec.input("n", a.n);
    rec.input("rho_list", a.rho_list.clone());
    rec.input("grid", a.grid);
    let scan = conjecture_scan(a.n, &a.rho_list, a.grid, cfg)?;
    let fin = Method::Final.name();
    for r in &scan.reports {
        let entry = |name: &str, value: f64, tau: Option<f64>| {
            ResultEntry::new(name, value, f64::NAN)
                .at(a.n, Some(r.rho), tau)
                .method(fin)
        };
        rec.results.push(entry("argmax_tau", r.argmax_tau, Some(r.argmax_tau)));
        rec.results
            .push(entry("argmax_value", r.argmax_value, Some(r.argmax_tau)));
        rec.results.push(entry("radial_value", r.radial_value, Some(0.0)));
        rec.results
            .push(entry("tangential_value", r.tangential_value, Some(FRAC_PI_2)));
        let mut verdict = entry("conjecture_holds", if r.conjecture_holds { 1.0 } else { 0.0 }, None);
        verdict.pass = Some(r.conjecture_holds);
        rec.results.push(verdict);
    }
    rec.summarize("threshold", scan.threshold);
    rec.summarize("all_hold", scan.reports.iter().all(|r| r.conjecture_holds));
    Ok(())
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::ZeroIntegral => "zero_integral",
        Suite::KmInequality => "km_inequality",
        Suite::P1Inequality => "p1_inequality",
        Suite::IneqRho => "ineq_rho",
        Suite::ExtremalLemma => "extremal_lemma",
        Suite::Hypergeometric => "hypergeometric",
        Suite::CrossMethods => "cross_methods",
    }
}

fn verify(a: &VerifyArgs, cfg: &QuadratureConfig, rec: &mut OutputRecord) -> CliResult<()> {
    rec.input("suite", suite_name(a.suite));
    let nf = a.n as f64;
    let default_k = (3.0 * nf - 2.0) / 4.0;
    let report = match a.suite {
        Suite::ZeroIntegral => {
            rec.input("n", a.n);
            verify_zero_integral(a.n, cfg)?
        }
        Suite::CrossMethods => {
            rec.input("n", a.n);
            verify_cross_methods(a.n, cfg)?
        }
        Suite::KmInequality | Suite::P1Inequality => {
            let points = a.points.unwrap_or(401);
            if !(a.range > 0.0) || points < 2 {
                return usage("--range must be positive and --points at least 2");
            }
            rec.input("n", a.n);
            rec.input("range", a.range);
            rec.input("points", points);
            let grid = uniform_grid(-a.range, a.range, points);
            if a.suite == Suite::KmInequality {
                verify_km_inequality(a.n, &grid)?
            } else {
                verify_p1_inequality(a.n, &grid)?
            }
        }
        Suite::IneqRho => {
            let Some(rho) = a.rho else {
                return usage("ineq_rho needs --rho");
            };
            let k = a.k.unwrap_or(default_k);
            let points = a.points.unwrap_or(201);
            rec.input("n", a.n);
            rec.input("rho", rho);
            rec.input("k", k);
            rec.input("m", a.m);
            rec.input("points", points);
            verify_ineq_rho(a.n, rho, k, a.m, points, cfg)?
        }
        Suite::ExtremalLemma => {
            let coef = a.a.unwrap_or(default_k);
            rec.input("n", a.n);
            rec.input("a", coef);
            rec.input("b", a.b);
            verify_extremal_lemma(a.n, coef, a.b, cfg)?
        }
        Suite::Hypergeometric => {
            rec.metadata.seed = Some(a.seed);
            verify_hypergeometric(a.seed, cfg)?
        }
    };
    push_report(&report, rec);
    Ok(())
}

fn push_report(report: &VerificationReport, rec: &mut OutputRecord) {
    for p in &report.points {
        rec.results.push(checkpoint_entry(p));
    }
    let failures = report.failures().count();
    rec.summarize("all_pass", report.all_pass);
    rec.summarize("worst_residual", report.worst_residual);
    rec.summarize("checks", report.points.len());
    rec.summarize("failures", failures);
    rec.success = report.all_pass;
}

fn checkpoint_entry(p: &CheckPoint) -> ResultEntry {
    let mut e = ResultEntry::new(&p.label, p.residual, f64::NAN).check(p.tolerance, p.pass);
    for (k, v) in &p.inputs {
        match k.as_str() {
            "n" => e.n = Some(*v as usize),
            "rho" => e.rho = Some(Num(*v)),
            "tau" => e.tau = Some(Num(*v)),
            _ => {
                e.params.insert(k.clone(), Num(*v));
            }
        }
    }
    e
}
