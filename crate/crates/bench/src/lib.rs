//! Shared fixtures for the benchmarks.

use khavinson_core::{ProblemPoint, QuadratureConfig};

/// Points that exercise the interior, the near-boundary layer, and both
/// extreme directions.
pub fn fixture_points() -> Vec<(&'static str, ProblemPoint)> {
    [
        ("n3_interior", 3, 0.3, 0.5),
        ("n4_near_boundary", 4, 0.99, std::f64::consts::FRAC_PI_4),
        ("n5_tangential", 5, 0.9, std::f64::consts::FRAC_PI_2),
    ]
    .into_iter()
    .map(|(label, n, rho, tau)| (label, ProblemPoint::new(n, rho, tau).expect("fixture point is valid")))
    .collect()
}

pub fn bench_config() -> QuadratureConfig {
    QuadratureConfig::default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_distinct() {
        let pts = fixture_points();
        assert_eq!(pts.len(), 3);
        assert!(pts.windows(2).all(|w| w[0].1 != w[1].1));
    }
}
