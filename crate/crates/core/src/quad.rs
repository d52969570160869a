//! One-dimensional quadrature: globally adaptive Gauss–Kronrod bisection and
//! fixed composite Gauss–Legendre rules.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// 15-point Kronrod abscissae (non-negative half), Kronrod weights and the
// embedded 7-point Gauss weights (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Sum of the per-interval |Kronrod − Gauss| differences.
    pub error: f64,
    pub intervals: usize,
    pub evaluations: usize,
}

/// Settings for [`Adaptive::integrate`].
#[derive(Debug, Clone, Copy)]
pub struct Adaptive {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for Adaptive {
    fn default() -> Self {
        Adaptive {
            abs_tol: 1e-10,
            rel_tol: 0.0,
            max_intervals: 4096,
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

impl Adaptive {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        Adaptive {
            abs_tol,
            ..Default::default()
        }
    }

    /// Integrates `f` over `[a, b]`, bisecting the worst panel until the summed
    /// error estimate meets `max(abs_tol, rel_tol·|I|)`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<Estimate> {
        if a == b {
            return Ok(Estimate {
                value: 0.0,
                error: 0.0,
                intervals: 0,
                evaluations: 0,
            });
        }
        let (value, error) = kronrod15(&f, a, b);
        let mut heap = BinaryHeap::new();
        heap.push(Panel { a, b, value, error });
        let mut total = value;
        let mut total_err = error;
        let mut evaluations = 15;
        loop {
            let target = self.abs_tol.max(self.rel_tol * total.abs());
            if total_err <= target {
                break;
            }
            if heap.len() >= self.max_intervals {
                return Err(Error::Numerics(format!(
                    "adaptive quadrature on [{a}, {b}] did not converge: \
                     estimate {total:e}, error {total_err:e} > target {target:e} \
                     after {} panels and {evaluations} evaluations",
                    heap.len()
                )));
            }
            let worst = heap.pop().expect("heap is never empty");
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                return Err(Error::Numerics(format!(
                    "adaptive quadrature on [{a}, {b}]: panel [{}, {}] cannot be bisected \
                     further (error {:e})",
                    worst.a, worst.b, worst.error
                )));
            }
            let (lv, le) = kronrod15(&f, worst.a, mid);
            let (rv, re) = kronrod15(&f, mid, worst.b);
            evaluations += 30;
            total += lv + rv - worst.value;
            total_err += le + re - worst.error;
            heap.push(Panel {
                a: worst.a,
                b: mid,
                value: lv,
                error: le,
            });
            heap.push(Panel {
                a: mid,
                b: worst.b,
                value: rv,
                error: re,
            });
        }
        // Re-sum to shed the drift of the incremental updates.
        let mut panels: Vec<Panel> = heap.into_vec();
        panels.sort_by(|p, q| p.a.total_cmp(&q.a));
        let value = panels.iter().map(|p| p.value).sum();
        let error = panels.iter().map(|p| p.error).sum();
        Ok(Estimate {
            value,
            error,
            intervals: panels.len(),
            evaluations,
        })
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            dp = 1.0;
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
    (nodes, weights)
}

/// A composite Gauss–Legendre rule: `panels` equal panels on `[a, b]`, each
/// carrying the same `order`-point rule.
#[derive(Debug, Clone)]
pub struct CompositeRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CompositeRule {
    pub fn new(a: f64, b: f64, panels: usize, order: usize) -> Self {
        let (x, w) = gauss_legendre(order);
        let width = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let lo = a + p as f64 * width;
            let center = lo + 0.5 * width;
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(center + 0.5 * width * xi);
                weights.push(0.5 * width * wi);
            }
        }
        CompositeRule { nodes, weights }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}
