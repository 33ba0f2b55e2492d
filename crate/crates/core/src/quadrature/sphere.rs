//! Cubature on the unit sphere `S^{n-1}` with respect to normalized surface
//! measure. Grids exist for `n = 2, 3`; Monte Carlo works in any dimension.

use super::rules::GaussLegendre;
use crate::error::{domain, Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Monte Carlo samples are generated in independent streams of this size so
/// results do not depend on the thread count.
const MC_CHUNK: usize = 1 << 14;
const GRID_CHUNK: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq)]
pub struct SphereSample {
    pub point: Vec<f64>,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereMode {
    MonteCarlo,
    LatLongGrid,
}

/// A cubature rule for normalized measure on `S^{n-1}`.
///
/// Grid rules take `count` as the resolution: `count` equispaced points on
/// the circle for `n = 2`; for `n = 3`, `count` Gauss–Legendre nodes in
/// `u = ζ₁` (split evenly between the hemispheres) times `count` midpoint
/// nodes in the longitude around the `e₁` axis. The pole sits at `e₁`, where
/// the kernels evaluated at `x = ρe₁` concentrate.
#[derive(Debug, Clone)]
pub enum SphereRule {
    Grid { n: usize, resolution: usize },
    MonteCarlo { n: usize, count: usize, seed: u64 },
    Explicit { n: usize, samples: Vec<SphereSample> },
}

/// Weighted mean of `K` functionals; `std_err` is zero for deterministic rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereEstimate<const K: usize> {
    pub mean: [f64; K],
    pub std_err: [f64; K],
}

impl SphereRule {
    pub fn new(n: usize, count: usize, seed: u64, mode: SphereMode) -> Result<Self> {
        if n < 2 {
            return domain(format!("sphere dimension n must be at least 2, got {n}"));
        }
        if count == 0 {
            return domain("sphere rule needs at least one sample");
        }
        match mode {
            SphereMode::MonteCarlo => Ok(SphereRule::MonteCarlo { n, count, seed }),
            SphereMode::LatLongGrid => {
                if n > 3 {
                    return domain(format!("lat-long grids exist only for n = 2, 3, got {n}"));
                }
                if count < 4 || count % 2 != 0 {
                    return domain(format!("grid resolution must be even and at least 4, got {count}"));
                }
                Ok(SphereRule::Grid { n, resolution: count })
            }
        }
    }

    /// Default grid used as a reference rule in low dimensions.
    pub fn reference_grid(n: usize) -> Result<Self> {
        match n {
            2 => Self::new(2, 1 << 16, 0, SphereMode::LatLongGrid),
            3 => Self::new(3, 2048, 0, SphereMode::LatLongGrid),
            _ => domain(format!("no reference grid for n = {n}")),
        }
    }

    pub fn explicit(samples: Vec<SphereSample>) -> Result<Self> {
        let Some(first) = samples.first() else {
            return domain("explicit sphere rule needs at least one sample");
        };
        let n = first.point.len();
        if n < 2 {
            return domain("sphere points need at least two coordinates");
        }
        for s in &samples {
            if s.point.len() != n {
                return domain("sphere samples have mixed dimensions");
            }
            let norm = s.point.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-10 {
                return domain(format!("sample point has norm {norm}, expected 1"));
            }
            if !(s.weight.is_finite() && s.weight >= 0.0) {
                return domain(format!("invalid sample weight {}", s.weight));
            }
        }
        Ok(SphereRule::Explicit { n, samples })
    }

    pub fn dim(&self) -> usize {
        match self {
            SphereRule::Grid { n, .. } | SphereRule::MonteCarlo { n, .. } | SphereRule::Explicit { n, .. } => *n,
        }
    }

    /// Number of points the rule evaluates.
    pub fn len(&self) -> usize {
        match self {
            SphereRule::Grid { n: 2, resolution } => *resolution,
            SphereRule::Grid { resolution, .. } => resolution * resolution,
            SphereRule::MonteCarlo { count, .. } => *count,
            SphereRule::Explicit { samples, .. } => samples.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            SphereRule::MonteCarlo { seed, .. } => Some(*seed),
            _ => None,
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, SphereRule::MonteCarlo { .. })
    }

    /// Materializes every point and weight of the rule.
    pub fn samples(&self) -> Vec<SphereSample> {
        match self {
            SphereRule::Explicit { samples, .. } => samples.clone(),
            SphereRule::Grid { n: 2, resolution } => (0..*resolution)
                .map(|k| SphereSample {
                    point: circle_point(k, *resolution).to_vec(),
                    weight: 1.0 / *resolution as f64,
                })
                .collect(),
            SphereRule::Grid { resolution, .. } => {
                let rows = sphere_rows(*resolution);
                let mut out = Vec::with_capacity(resolution * resolution);
                for &(u, wu) in &rows {
                    let s = (1.0 - u * u).max(0.0).sqrt();
                    for k in 0..*resolution {
                        let phi = longitude(k, *resolution);
                        out.push(SphereSample {
                            point: vec![u, s * phi.cos(), s * phi.sin()],
                            weight: wu / *resolution as f64,
                        });
                    }
                }
                out
            }
            SphereRule::MonteCarlo { n, count, seed } => {
                let mut out = Vec::with_capacity(*count);
                for c in 0..count.div_ceil(MC_CHUNK) {
                    let mut rng = chunk_rng(*seed, c);
                    let len = MC_CHUNK.min(count - c * MC_CHUNK);
                    let mut buf = vec![0.0; *n];
                    for _ in 0..len {
                        gaussian_direction(&mut rng, &mut buf);
                        out.push(SphereSample {
                            point: buf.clone(),
                            weight: 1.0 / *count as f64,
                        });
                    }
                }
                out
            }
        }
    }

    /// Averages `f` over the sphere. Work is split into fixed chunks whose
    /// partial sums are combined in index order, so the result is identical
    /// for any thread count.
    pub fn estimate<const K: usize, F>(&self, f: F) -> SphereEstimate<K>
    where
        F: Fn(&[f64]) -> [f64; K] + Sync,
    {
        match self {
            SphereRule::Grid { n: 2, resolution } => {
                let n = *resolution;
                let parts: Vec<[f64; K]> = (0..n.div_ceil(GRID_CHUNK))
                    .into_par_iter()
                    .map(|c| {
                        let mut acc = [0.0; K];
                        for k in c * GRID_CHUNK..((c + 1) * GRID_CHUNK).min(n) {
                            add(&mut acc, &f(&circle_point(k, n)), 1.0);
                        }
                        acc
                    })
                    .collect();
                deterministic(combine(&parts), 1.0 / n as f64)
            }
            SphereRule::Grid { resolution, .. } => {
                let n = *resolution;
                let rows = sphere_rows(n);
                let parts: Vec<[f64; K]> = rows
                    .par_iter()
                    .map(|&(u, wu)| {
                        let s = (1.0 - u * u).max(0.0).sqrt();
                        let mut acc = [0.0; K];
                        for k in 0..n {
                            let phi = longitude(k, n);
                            add(&mut acc, &f(&[u, s * phi.cos(), s * phi.sin()]), wu);
                        }
                        acc
                    })
                    .collect();
                deterministic(combine(&parts), 1.0 / n as f64)
            }
            SphereRule::Explicit { samples, .. } => {
                let parts: Vec<[f64; K]> = samples
                    .par_chunks(GRID_CHUNK)
                    .map(|chunk| {
                        let mut acc = [0.0; K];
                        for s in chunk {
                            add(&mut acc, &f(&s.point), s.weight);
                        }
                        acc
                    })
                    .collect();
                let total_weight: f64 = samples.iter().map(|s| s.weight).sum();
                deterministic(combine(&parts), 1.0 / total_weight)
            }
            SphereRule::MonteCarlo { n, count, seed } => {
                let parts: Vec<([f64; K], [f64; K])> = (0..count.div_ceil(MC_CHUNK))
                    .into_par_iter()
                    .map(|c| {
                        let mut rng = chunk_rng(*seed, c);
                        let len = MC_CHUNK.min(count - c * MC_CHUNK);
                        let mut buf = vec![0.0; *n];
                        let mut sum = [0.0; K];
                        let mut sq = [0.0; K];
                        for _ in 0..len {
                            gaussian_direction(&mut rng, &mut buf);
                            let v = f(&buf);
                            for j in 0..K {
                                sum[j] += v[j];
                                sq[j] += v[j] * v[j];
                            }
                        }
                        (sum, sq)
                    })
                    .collect();
                let cnt = *count as f64;
                let mut mean = [0.0; K];
                let mut std_err = [0.0; K];
                let sum = combine(&parts.iter().map(|p| p.0).collect::<Vec<_>>());
                let sq = combine(&parts.iter().map(|p| p.1).collect::<Vec<_>>());
                for j in 0..K {
                    mean[j] = sum[j] / cnt;
                    if *count > 1 {
                        let var = ((sq[j] / cnt - mean[j] * mean[j]) * cnt / (cnt - 1.0)).max(0.0);
                        std_err[j] = (var / cnt).sqrt();
                    }
                }
                SphereEstimate { mean, std_err }
            }
        }
    }
}

fn add<const K: usize>(acc: &mut [f64; K], v: &[f64; K], w: f64) {
    for j in 0..K {
        acc[j] += w * v[j];
    }
}

fn combine<const K: usize>(parts: &[[f64; K]]) -> [f64; K] {
    let mut out = [0.0; K];
    for p in parts {
        add(&mut out, p, 1.0);
    }
    out
}

fn deterministic<const K: usize>(sum: [f64; K], scale: f64) -> SphereEstimate<K> {
    SphereEstimate {
        mean: sum.map(|x| x * scale),
        std_err: [0.0; K],
    }
}

// Midpoint angles keep the nodes off the coordinate axes, so a grid never
// samples the pole of a kernel aligned with e₁.
fn longitude(k: usize, n: usize) -> f64 {
    2.0 * PI * (k as f64 + 0.5) / n as f64
}

fn circle_point(k: usize, n: usize) -> [f64; 2] {
    let t = longitude(k, n);
    [t.cos(), t.sin()]
}

/// Nodes `u = ζ₁` with weights summing to one.
fn sphere_rows(resolution: usize) -> Vec<(f64, f64)> {
    let gl = GaussLegendre::cached(resolution / 2);
    let mut rows = Vec::with_capacity(resolution);
    for (lo, hi) in [(-1.0, 0.0), (0.0, 1.0)] {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        for (x, w) in gl.nodes.iter().zip(&gl.weights) {
            rows.push((mid + half * x, 0.5 * half * w));
        }
    }
    rows
}

fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

fn gaussian_direction(rng: &mut ChaCha8Rng, out: &mut [f64]) {
    loop {
        let mut norm2 = 0.0;
        for x in out.iter_mut() {
            *x = rng.sample(StandardNormal);
            norm2 += *x * *x;
        }
        if norm2 > 1e-300 {
            let inv = 1.0 / norm2.sqrt();
            out.iter_mut().for_each(|x| *x *= inv);
            return;
        }
    }
}

/// Returns the points and weights of a sphere rule. Weights sum to one.
pub fn sphere_quadrature(n: usize, count: usize, seed: u64, mode: SphereMode) -> Result<Vec<SphereSample>> {
    let rule = SphereRule::new(n, count, seed, mode)?;
    if matches!(rule, SphereRule::Grid { n: 3, resolution } if resolution > 4096) {
        return Err(Error::Domain("grid too large to materialize".into()));
    }
    Ok(rule.samples())
}
