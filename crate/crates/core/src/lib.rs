//! Numerical evaluation of the sharp pointwise gradient constant for bounded
//! harmonic functions in the unit ball and the half-space.
//!
//! For `x` in the unit ball `B^n` and a unit vector `ℓ`, the optimal constant
//! in `|⟨∇U(x), ℓ⟩| ≤ 𝒞(x; ℓ) sup |U|` is `𝒞(x; ℓ) = C(x; ℓ)/(1 − |x|)`. The
//! crate computes `C` by several independent representations, locates its
//! maximum over directions, and checks the identities and inequalities used
//! to show that the maximum is radial near the boundary.
//!
//! ```
//! use khavinson_core::{c_final, ProblemPoint, QuadratureConfig};
//!
//! let pp = ProblemPoint::new(3, 0.0, 0.0).unwrap();
//! let c = c_final(&pp, &QuadratureConfig::default()).unwrap();
//! assert!((c.value - 1.5).abs() < 1e-9);
//! ```

pub mod analysis;
pub mod error;
pub mod kernels;
pub mod quadrature;
pub mod representations;
pub mod special;

pub use analysis::{
    conjecture_scan, second_derivative_gap, sweep_tau, verify_extremal_lemma, verify_ineq_rho, verify_km_inequality,
    verify_p1_inequality, CheckPoint, ConjectureScan, SweepReport, TauSample, VerificationReport,
};
pub use error::{Error, Result};
pub use kernels::{canonicalize, ProblemPoint, Slope};
pub use quadrature::{integrate, sphere_quadrature, Integral, QuadratureConfig, SphereMode, SphereRule, SphereSample};
pub use representations::{
    c_double1, c_double2, c_final, c_halfspace, c_moebius, c_sphere_oracle, c_zero, evaluate, extremal_derivative,
    global_bound, zero_integral_check, ConstantValue, Method,
};
pub use special::{gamma_fn, hyp2f1, HypMethod, HypParams};
