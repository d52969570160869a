//! Error-controlled summation of `Σ_{k ≤ n} t/sinh(kt/2)` and of the harmonic
//! series.
//!
//! Term counts `n = ⌊R/t⌋` run to 10⁴³ for the super-exponential schedules,
//! so long sums are split into a compensated head and a tail given by the
//! Euler–Maclaurin formula with a signed remainder bound, using
//! `∫ t/sinh(xt/2) dx = 2·ln tanh(xt/4)`.

use crate::hyp::sinh_half;

const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// Counts above this are summed as head plus bracketed tail.
pub const DIRECT_LIMIT: u64 = 10_000_000;
/// Terms summed exactly before the tail bracket takes over.
pub const HEAD_TERMS: u64 = 1_000_000;
/// Harmonic numbers are summed term by term up to this `n`.
pub const HARMONIC_DIRECT_LIMIT: u64 = 100_000_000;
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Neumaier's compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// A value with a guaranteed absolute error radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifiedSum {
    pub value: f64,
    pub radius: f64,
}

impl CertifiedSum {
    pub const ZERO: CertifiedSum = CertifiedSum {
        value: 0.0,
        radius: 0.0,
    };

    pub fn relative_radius(&self) -> f64 {
        if self.value == 0.0 {
            if self.radius == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.radius / self.value.abs()
        }
    }

    /// Multiplies by a positive constant, widening the radius for the product
    /// rounding.
    pub fn scale(self, factor: f64) -> CertifiedSum {
        let value = self.value * factor;
        CertifiedSum {
            value,
            radius: self.radius * factor.abs() + 2.0 * UNIT_ROUNDOFF * value.abs(),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.radius
    }
}

/// Number of integers `k ≥ 1` with `k·t ≤ R` in floating point.
///
/// Exact below 2⁵²; beyond that `value` is `⌊R/t⌋` and the true count lies
/// within `radius` of it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermCount {
    pub value: f64,
    pub exact: Option<u64>,
    pub radius: f64,
}

const EXACT_COUNT_LIMIT: f64 = 4_503_599_627_370_496.0; // 2^52

pub fn term_count(t: f64, radius: f64) -> TermCount {
    if !(t > 0.0) || !(radius >= t) {
        return TermCount {
            value: 0.0,
            exact: Some(0),
            radius: 0.0,
        };
    }
    let q = (radius / t).floor();
    if q < EXACT_COUNT_LIMIT {
        let mut n = q as u64;
        while n > 0 && n as f64 * t > radius {
            n -= 1;
        }
        while (n + 1) as f64 * t <= radius {
            n += 1;
        }
        TermCount {
            value: n as f64,
            exact: Some(n),
            radius: 0.0,
        }
    } else {
        TermCount {
            value: q,
            exact: None,
            radius: 4.0 * UNIT_ROUNDOFF * q + 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SumPlan {
    /// Largest count summed term by term.
    pub direct_limit: u64,
    /// Head length once the tail is bracketed.
    pub head: u64,
}

impl Default for SumPlan {
    fn default() -> Self {
        SumPlan {
            direct_limit: DIRECT_LIMIT,
            head: HEAD_TERMS,
        }
    }
}

fn pinch_term(t: f64, k: u64) -> f64 {
    t / sinh_half(k as f64 * t)
}

fn ln_tanh(y: f64) -> f64 {
    if y < 0.5 {
        y.tanh().ln()
    } else {
        (-2.0 / ((2.0 * y).exp() + 1.0)).ln_1p()
    }
}

/// Compensated `Σ_{k=1}^{n} t/sinh(kt/2)` with its rounding radius.
fn direct_sum(t: f64, n: u64) -> CertifiedSum {
    let acc: CompensatedSum = (1..=n).map(|k| pinch_term(t, k)).collect();
    let value = acc.value();
    // Each term carries a few ulps (product, sinh with condition ≤ 1 + nt/2,
    // quotient); compensation adds 2u plus a second-order n·u² term.
    let per_term = (6.0 + 0.5 * n as f64 * t) * UNIT_ROUNDOFF;
    let radius = (per_term + 2.0 * UNIT_ROUNDOFF + 2.0 * n as f64 * UNIT_ROUNDOFF.powi(2)) * value;
    CertifiedSum { value, radius }
}

/// Bracket for `Σ_{k=a}^{b} t/sinh(kt/2)` with real `b ≥ a`.
///
/// `1/sinh` is completely monotone, so the Euler–Maclaurin remainder after
/// the `f'` correction has the sign of the `f'''` term and is no larger.
fn tail_bracket(t: f64, a: f64, b: f64) -> CertifiedSum {
    // With y = xt/2: t·csch y and t·coth y, kept as products so nothing
    // overflows for tiny y.
    let tc = |x: f64| t / sinh_half(x * t);
    let tk = |x: f64| {
        let y = 0.5 * x * t;
        if y < 1e-8 {
            2.0 / x
        } else {
            t / y.tanh()
        }
    };
    let d1 = |x: f64| -0.5 * tc(x) * tk(x);
    let d3 = |x: f64| {
        let (c, k) = (tc(x), tk(x));
        -0.125 * c * k * (k * k + 5.0 * c * c)
    };
    let big_l = |x: f64| 2.0 * ln_tanh(0.25 * x * t);
    let (la, lb) = (big_l(a), big_l(b));
    let (fa, fb) = (tc(a), tc(b));
    let first = (lb - la) + 0.5 * (fa + fb) + (d1(b) - d1(a)) / 12.0;
    let next = -(d3(b) - d3(a)) / 720.0;
    let rounding = 8.0 * UNIT_ROUNDOFF * (la.abs() + lb.abs()) + 4.0 * UNIT_ROUNDOFF * (fa + fb);
    CertifiedSum {
        value: first + 0.5 * next,
        radius: 0.5 * next.abs() + rounding,
    }
}

/// `Σ_{k ≥ 1, kt ≤ R} t/sinh(kt/2)` with the default plan.
pub fn pinched_power_sum(t: f64, radius: f64) -> CertifiedSum {
    pinched_power_sum_with(t, radius, SumPlan::default())
}

pub fn pinched_power_sum_with(t: f64, radius: f64, plan: SumPlan) -> CertifiedSum {
    let count = term_count(t, radius);
    if let Some(n) = count.exact {
        if n <= plan.direct_limit || n <= plan.head {
            return direct_sum(t, n);
        }
    }
    let head = direct_sum(t, plan.head);
    let a = plan.head as f64 + 1.0;
    let b = count.value;
    let tail = tail_bracket(t, a, b);
    // Terms whose membership is uncertain are each below f(b − δ).
    let ambiguity = if count.radius > 0.0 {
        count.radius * t / sinh_half((b - count.radius).max(a) * t)
    } else {
        0.0
    };
    let value = head.value + tail.value;
    CertifiedSum {
        value,
        radius: head.radius + tail.radius + ambiguity + UNIT_ROUNDOFF * value,
    }
}

/// `H_n = Σ_{k ≤ n} 1/k`: compensated summation up to 10⁸, beyond that
/// `ln n + γ + 1/(2n) − 1/(12n²)`, whose error is below `1/(120n⁴)`.
pub fn harmonic_sum(n: u64) -> f64 {
    if n <= HARMONIC_DIRECT_LIMIT {
        (1..=n).rev().map(|k| 1.0 / k as f64).collect::<CompensatedSum>().value()
    } else {
        let x = n as f64;
        x.ln() + EULER_GAMMA + 0.5 / x - 1.0 / (12.0 * x * x)
    }
}
