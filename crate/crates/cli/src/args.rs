//! Command-line grammar.

use clap::{Args, Parser, Subcommand, ValueEnum};
use khavinson_core::Method;

#[derive(Debug, Parser)]
#[command(
    name = "khav",
    version,
    about = "Sharp gradient constants for bounded harmonic functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Relative tolerance of the adaptive quadrature.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub rel_tol: f64,

    /// Absolute tolerance of the adaptive quadrature.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub abs_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the constant at one point and direction.
    Constant(ConstantArgs),
    /// Profile the constant over directions at a fixed radius.
    Sweep(SweepArgs),
    /// Run sweeps at several radii and report where the radial direction wins.
    Conjecture(ConjectureArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Domain {
    Ball,
    Halfspace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SphereKind {
    Grid,
    Mc,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse::<Method>().map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct ConstantArgs {
    #[arg(long, value_enum, default_value_t = Domain::Ball)]
    pub domain: Domain,

    #[arg(long)]
    pub n: Option<usize>,

    #[arg(long, conflicts_with = "x")]
    pub rho: Option<f64>,

    #[arg(long, conflicts_with = "ell")]
    pub tau: Option<f64>,

    /// Point in the ball, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, requires = "ell")]
    pub x: Option<Vec<f64>>,

    /// Unit direction, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub ell: Option<Vec<f64>>,

    /// sphere_oracle, moebius_sphere, double1, double2 or final.
    #[arg(long, value_parser = parse_method)]
    pub method: Option<Method>,

    /// Sphere rule for the sphere methods; grids exist for n = 2, 3.
    #[arg(long, value_enum)]
    pub sphere: Option<SphereKind>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub n: usize,

    #[arg(long)]
    pub rho: f64,

    #[arg(long, default_value_t = 33)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct ConjectureArgs {
    #[arg(long)]
    pub n: usize,

    #[arg(long, value_delimiter = ',', required = true)]
    pub rho_list: Vec<f64>,

    #[arg(long, default_value_t = 33)]
    pub grid: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Suite {
    ZeroIntegral,
    KmInequality,
    P1Inequality,
    IneqRho,
    ExtremalLemma,
    Hypergeometric,
    CrossMethods,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,

    #[arg(long, default_value_t = 3)]
    pub n: usize,

    /// Radius for ineq_rho.
    #[arg(long)]
    pub rho: Option<f64>,

    /// Majorant constant for ineq_rho; defaults to (3n−2)/4.
    #[arg(long)]
    pub k: Option<f64>,

    /// Upper end of the z-range for ineq_rho.
    #[arg(long, default_value_t = 10.0)]
    pub m: f64,

    /// Half-width of the symmetric grid for the closed-form inequalities.
    #[arg(long, default_value_t = 20.0)]
    pub range: f64,

    /// Grid size; 401 for the closed-form inequalities, 201 for ineq_rho.
    #[arg(long)]
    pub points: Option<usize>,

    /// Coefficients of the extremal lemma; a defaults to (3n−2)/4, b to 1.
    #[arg(long)]
    pub a: Option<f64>,

    #[arg(long, default_value_t = 1.0)]
    pub b: f64,

    /// Seed of the random parameter sets in the hypergeometric suite.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
