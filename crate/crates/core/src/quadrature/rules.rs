//! Fixed panel rules: the 7/15 Gauss–Kronrod pair and Gauss–Legendre rules of
//! arbitrary order computed by Newton iteration on the Legendre recurrence.

#![allow(clippy::excessive_precision)]

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

// Kronrod abscissae (positive half, descending); odd indices are the Gauss nodes.
const XGK15: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK15: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG7: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// nodes ascending.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for iter in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 || iter == 99 {
                    dp = legendre_with_derivative(n, x).1;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Shared, lazily built rule of order `n`.
    pub fn cached(n: usize) -> Arc<Self> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("Gauss-Legendre cache poisoned");
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(GaussLegendre::new(n)))
            .clone()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Result of one panel evaluation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PanelEstimate {
    pub value: f64,
    pub err: f64,
    /// integral of |f| by the high-order rule, used for roundoff detection
    pub abs_value: f64,
}

#[derive(Debug, Clone)]
pub(crate) enum PanelRule {
    Kronrod15,
    GaussPair {
        high: Arc<GaussLegendre>,
        low: Arc<GaussLegendre>,
    },
}

impl PanelRule {
    pub fn for_order(order: usize) -> Self {
        if order == 15 {
            PanelRule::Kronrod15
        } else {
            PanelRule::GaussPair {
                high: GaussLegendre::cached(order),
                low: GaussLegendre::cached((order / 2).max(1)),
            }
        }
    }

    pub fn apply<F, E>(&self, f: &F, a: f64, b: f64) -> Result<PanelEstimate, E>
    where
        F: Fn(f64) -> Result<f64, E>,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        match self {
            PanelRule::Kronrod15 => {
                let fc = f(mid)?;
                let mut kron = WGK15[7] * fc;
                let mut gauss = WG7[3] * fc;
                let mut abs = WGK15[7] * fc.abs();
                for j in 0..7 {
                    let dx = half * XGK15[j];
                    let f1 = f(mid - dx)?;
                    let f2 = f(mid + dx)?;
                    kron += WGK15[j] * (f1 + f2);
                    abs += WGK15[j] * (f1.abs() + f2.abs());
                    if j % 2 == 1 {
                        gauss += WG7[j / 2] * (f1 + f2);
                    }
                }
                Ok(PanelEstimate {
                    value: kron * half,
                    err: ((kron - gauss) * half).abs(),
                    abs_value: abs * half.abs(),
                })
            }
            PanelRule::GaussPair { high, low } => {
                let mut hi = 0.0;
                let mut abs = 0.0;
                for (x, w) in high.nodes.iter().zip(&high.weights) {
                    let v = f(mid + half * x)?;
                    hi += w * v;
                    abs += w * v.abs();
                }
                let mut lo = 0.0;
                for (x, w) in low.nodes.iter().zip(&low.weights) {
                    lo += w * f(mid + half * x)?;
                }
                Ok(PanelEstimate {
                    value: hi * half,
                    err: ((hi - lo) * half).abs(),
                    abs_value: abs * half.abs(),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_weights_sum_to_two() {
        let k: f64 = 2.0 * WGK15[..7].iter().sum::<f64>() + WGK15[7];
        let g: f64 = 2.0 * WG7[..3].iter().sum::<f64>() + WG7[3];
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn kronrod_exact_for_high_degree_polynomials() {
        let rule = PanelRule::Kronrod15;
        for deg in 0..=22 {
            let f = |x: f64| -> Result<f64, ()> { Ok(x.powi(deg)) };
            let est = rule.apply(&f, 0.0, 1.0).unwrap();
            let want = 1.0 / (deg as f64 + 1.0);
            assert!((est.value - want).abs() < 1e-15, "degree {deg}");
            if deg <= 13 {
                assert!(est.err < 1e-15, "Gauss part should be exact at degree {deg}");
            }
        }
    }

    #[test]
    fn gauss_legendre_moments() {
        for n in [1usize, 2, 5, 8, 33, 200] {
            let gl = GaussLegendre::new(n);
            assert!((gl.weights.iter().sum::<f64>() - 2.0).abs() < 1e-13, "n = {n}");
            for deg in 0..(2 * n).min(40) {
                let q: f64 = gl
                    .nodes
                    .iter()
                    .zip(&gl.weights)
                    .map(|(x, w)| w * x.powi(deg as i32))
                    .sum();
                let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - want).abs() < 1e-13, "n = {n}, degree {deg}");
            }
            assert!(gl.nodes.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn large_gauss_legendre_rule_is_accurate() {
        let gl = GaussLegendre::new(1024);
        assert!(gl.weights.iter().all(|&w| w > 0.0));
        let q: f64 = gl.nodes.iter().zip(&gl.weights).map(|(x, w)| w * x.cos()).sum();
        assert!((q - 2.0 * 1f64.sin()).abs() < 1e-13);
    }
}
