//! The Selberg transform pair of a radial profile: the geometric kernel
//! `g(r) = ∫ φ(2cosh r − 2 + s²) ds` and its cosine transform
//! `h(r) = ∫ g(|u|) cos(ru) du`.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::quad::{gauss_legendre, Adaptive, CompositeRule};
use crate::trace::test_function::TestFunction;

/// Panels and order of the fixed rule used for the inner `s`-integral. The
/// rule is rescaled to `[0, s_max]`, so its error varies smoothly with `r`.
const INNER_PANELS: usize = 16;
const INNER_ORDER: usize = 20;

/// Order of the Gauss rule on each panel of the `u`-tabulation.
const TABLE_ORDER: usize = 20;
/// Largest phase `r·width` a tabulation panel is asked to resolve.
const TABLE_PHASE: f64 = 3.0;

fn inner_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        // Panels on [0, 1]; scaled by s_max at use.
        let r = CompositeRule::new(0.0, 1.0, INNER_PANELS, INNER_ORDER);
        (r.nodes, r.weights)
    })
}

/// `2cosh(r) − 2`, written as `4sinh²(r/2)` to keep small `r` accurate.
pub fn displacement(r: f64) -> f64 {
    let s = (0.5 * r).sinh();
    4.0 * s * s
}

/// Radius beyond which `g` vanishes for a profile supported in `[0, S)`.
pub fn g_support_radius(support: f64) -> f64 {
    // arccosh(1 + S/2) = 2·arcsinh(√S / 2)
    2.0 * (0.5 * support.sqrt()).asinh()
}

/// `g_φ(r)` by adaptive quadrature in `s` with absolute tolerance `1e−10`.
pub fn g_transform<F: TestFunction + ?Sized>(phi: &F, r: f64) -> Result<f64> {
    g_transform_with(phi, r, Adaptive::with_abs_tol(1e-10))
}

pub fn g_transform_with<F: TestFunction + ?Sized>(phi: &F, r: f64, quad: Adaptive) -> Result<f64> {
    if r.is_nan() || r < 0.0 {
        return Err(Error::domain("g_transform", format!("r must be ≥ 0, got {r}")));
    }
    let v = displacement(r);
    let support = phi.support_bound();
    if v >= support {
        return Ok(0.0);
    }
    let s_max = (support - v).max(0.0).sqrt();
    let est = quad.integrate(|s| phi.value(v + s * s), 0.0, s_max)?;
    Ok(2.0 * est.value)
}

/// `g_φ(r)` by the fixed inner rule.
pub fn g_fixed<F: TestFunction + ?Sized>(phi: &F, r: f64) -> f64 {
    let v = displacement(r.abs());
    let support = phi.support_bound();
    if v >= support {
        return 0.0;
    }
    let s_max = (support - v).sqrt();
    let (nodes, weights) = inner_rule();
    let sum: f64 = nodes
        .iter()
        .zip(weights)
        .map(|(&x, &w)| {
            let s = s_max * x;
            w * phi.value(v + s * s)
        })
        .sum();
    2.0 * s_max * sum
}

/// Taylor coefficients of `g_φ` at `u ≥ 0` up to degree `len − 1`.
///
/// Differentiates under the integral in `v = 2cosh u − 2` (the boundary terms
/// vanish with every derivative of φ at its support edge), then composes with
/// the jet of `u ↦ 2cosh u − 2`.
pub fn g_taylor<F: TestFunction + ?Sized>(phi: &F, u: f64, len: usize) -> Jet {
    let v0 = displacement(u);
    let support = phi.support_bound();
    if v0 >= support {
        return Jet::zero(len);
    }
    let s_max = (support - v0).sqrt();
    let (nodes, weights) = inner_rule();
    let mut outer = Jet::zero(len);
    for (&x, &w) in nodes.iter().zip(weights) {
        let s = s_max * x;
        let jet = phi.taylor(v0 + s * s, len);
        for (acc, c) in outer.0.iter_mut().zip(&jet.0) {
            *acc += w * c;
        }
    }
    let outer = outer.scale(2.0 * s_max);

    let mut inner = Jet::zero(len);
    inner.0[0] = v0;
    let (ch, sh) = (2.0 * u.cosh(), 2.0 * u.sinh());
    let mut fact = 1.0;
    for m in 1..len {
        fact *= m as f64;
        inner.0[m] = if m % 2 == 0 { ch } else { sh } / fact;
    }
    inner.compose_into(&outer)
}

/// A profile together with a tabulation of `g` fine enough to evaluate `h`
/// by a fixed rule for all `|r| ≤ max_frequency`.
#[derive(Debug, Clone)]
pub struct TransformProfile<F> {
    phi: F,
    g_support: f64,
    max_frequency: f64,
    nodes: Vec<f64>,
    // 2·w_i·g(u_i), folding the even extension onto [0, L].
    weighted_g: Vec<f64>,
}

impl<F: TestFunction> TransformProfile<F> {
    pub fn new(phi: F, max_frequency: f64) -> Result<Self> {
        if !(max_frequency >= 0.0 && max_frequency.is_finite()) {
            return Err(Error::domain(
                "transform profile",
                format!("max frequency must be finite and ≥ 0, got {max_frequency}"),
            ));
        }
        let g_support = g_support_radius(phi.support_bound());
        let panels = ((max_frequency * g_support / TABLE_PHASE).ceil() as usize).max(32);
        let rule = CompositeRule::new(0.0, g_support, panels, TABLE_ORDER);
        let weighted_g = rule
            .nodes
            .par_iter()
            .zip(rule.weights.par_iter())
            .map(|(&u, &w)| 2.0 * w * g_fixed(&phi, u))
            .collect();
        Ok(TransformProfile {
            phi,
            g_support,
            max_frequency,
            nodes: rule.nodes,
            weighted_g,
        })
    }

    pub fn phi(&self) -> &F {
        &self.phi
    }

    /// `L` with `g(r) = 0` for all `r ≥ L`.
    pub fn g_support(&self) -> f64 {
        self.g_support
    }

    pub fn max_frequency(&self) -> f64 {
        self.max_frequency
    }

    pub fn g(&self, r: f64) -> f64 {
        g_fixed(&self.phi, r)
    }

    /// `h(r)` from the tabulation; even in `r` bit-for-bit.
    pub fn h(&self, r: f64) -> f64 {
        let r = r.abs();
        self.nodes
            .iter()
            .zip(&self.weighted_g)
            .map(|(&u, &wg)| wg * (r * u).cos())
            .sum()
    }

    /// `sup |g|` on the tabulation nodes and `r = 0`.
    pub fn g_sup(&self) -> f64 {
        let at_zero = self.g(0.0).abs();
        self.nodes
            .iter()
            .map(|&u| self.g(u).abs())
            .fold(at_zero, f64::max)
    }

    /// `min g` over `[0, radius]`, sampled on a uniform grid including both
    /// endpoints.
    pub fn g_min_on(&self, radius: f64, samples: usize) -> f64 {
        let n = samples.max(2);
        (0..n)
            .map(|i| self.g(radius * i as f64 / (n - 1) as f64))
            .fold(f64::INFINITY, f64::min)
    }
}

/// `h(r) = ∫_{−L}^{L} g(|u|) cos(ru) du` by adaptive quadrature (absolute
/// tolerance `1e−10`).
pub fn h_transform<F: TestFunction>(profile: &TransformProfile<F>, r: f64) -> Result<f64> {
    let r = r.abs();
    let len = profile.g_support();
    // Split into panels of about one period so the error estimate sees the
    // oscillation.
    let pieces = ((r * len / std::f64::consts::PI).ceil() as usize).max(1);
    let quad = Adaptive::with_abs_tol(1e-10 / pieces as f64);
    let mut total = 0.0;
    for p in 0..pieces {
        let a = len * p as f64 / pieces as f64;
        let b = len * (p + 1) as f64 / pieces as f64;
        total += quad.integrate(|u| profile.g(u) * (r * u).cos(), a, b)?.value;
    }
    Ok(2.0 * total)
}

/// `∫_{−L}^{L} |g^{(k)}(u)| du` for `k = 0..len`, by a composite Gauss rule on
/// `[0, L]` with `panels` panels.
pub fn derivative_l1_norms<F: TestFunction>(phi: &F, len: usize, panels: usize) -> Vec<f64> {
    let support = g_support_radius(phi.support_bound());
    let order = 8;
    let (x, w) = gauss_legendre(order);
    let width = support / panels as f64;
    let per_panel: Vec<Vec<f64>> = (0..panels)
        .into_par_iter()
        .map(|p| {
            let centre = (p as f64 + 0.5) * width;
            let mut acc = vec![0.0; len];
            for (xi, wi) in x.iter().zip(&w) {
                let jet = g_taylor(phi, centre + 0.5 * width * xi, len);
                let mut fact = 1.0;
                for (k, a) in acc.iter_mut().enumerate() {
                    if k > 0 {
                        fact *= k as f64;
                    }
                    *a += 0.5 * width * wi * (jet.0[k] * fact).abs();
                }
            }
            acc
        })
        .collect();
    let mut norms = vec![0.0; len];
    for acc in per_panel {
        for (n, a) in norms.iter_mut().zip(acc) {
            *n += 2.0 * a;
        }
    }
    norms
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::test_function::bump;

    #[test]
    fn displacement_matches_cosh_form() {
        for &r in &[0.1, 1.0, 3.0] {
            let direct = 2.0 * f64::cosh(r) - 2.0;
            assert!((displacement(r) - direct).abs() <= 1e-12 * direct);
        }
        // 2cosh r − 2 = r² + r⁴/12 + …
        let r = 1e-6f64;
        assert!((displacement(r) - r * r * (1.0 + r * r / 12.0)).abs() <= 1e-15 * r * r);
    }

    #[test]
    fn g_is_exactly_zero_outside_support() {
        for &s in &[0.5, 1.0, 4.0] {
            let phi = bump(s, 1.0).unwrap();
            let l = g_support_radius(s);
            assert!((l - (1.0 + s / 2.0).acosh()).abs() < 1e-14);
            for i in 0..50 {
                let r = l * (1.0 + i as f64 * 0.02);
                assert_eq!(g_transform(&phi, r).unwrap(), 0.0);
                assert_eq!(g_fixed(&phi, r), 0.0);
            }
        }
    }

    #[test]
    fn g_at_zero_matches_tight_quadrature() {
        let phi = bump(1.0, 1.0).unwrap();
        let tight = Adaptive {
            abs_tol: 1e-13,
            rel_tol: 0.0,
            max_intervals: 10_000,
        };
        let oracle = 2.0
            * tight
                .integrate(|s| phi.value(s * s), 0.0, 1.0)
                .unwrap()
                .value;
        assert!((g_transform(&phi, 0.0).unwrap() - oracle).abs() < 1e-10);
        assert!((g_fixed(&phi, 0.0) - oracle).abs() < 1e-13);
    }

    #[test]
    fn g_nonincreasing_for_nonnegative_profile() {
        let phi = bump(4.0, 1.0).unwrap();
        let l = g_support_radius(4.0);
        let mut prev = f64::INFINITY;
        for i in 0..=400 {
            let g = g_fixed(&phi, l * i as f64 / 400.0);
            assert!(g <= prev + 1e-15);
            prev = g;
        }
    }

    #[test]
    fn fixed_and_adaptive_g_agree() {
        let phi = bump(0.5, 2.0).unwrap();
        for i in 0..30 {
            let r = 0.7 * i as f64 / 30.0;
            let a = g_transform(&phi, r).unwrap();
            assert!((a - g_fixed(&phi, r)).abs() < 1e-10, "r={r}");
        }
    }

    #[test]
    fn g_taylor_matches_finite_differences() {
        let phi = bump(1.0, 1.0).unwrap();
        for &u in &[0.0, 0.2, 0.5, 0.8] {
            let jet = g_taylor(&phi, u, 5);
            assert!((jet.0[0] - g_fixed(&phi, u)).abs() < 1e-14);
            let h = 1e-4;
            let d1 = (g_fixed(&phi, u + h) - g_fixed(&phi, (u - h).abs())) / (2.0 * h);
            let d2 = (g_fixed(&phi, u + h) - 2.0 * g_fixed(&phi, u) + g_fixed(&phi, (u - h).abs()))
                / (h * h);
            assert!((jet.derivative(1) - d1).abs() < 1e-6, "u={u}");
            assert!((jet.derivative(2) - d2).abs() < 1e-4, "u={u}");
        }
    }

    #[test]
    fn h_is_even_and_bounded() {
        let phi = bump(1.0, 1.0).unwrap();
        let prof = TransformProfile::new(phi, 50.0).unwrap();
        let bound = 2.0
            * Adaptive::with_abs_tol(1e-12)
                .integrate(|u| prof.g(u).abs(), 0.0, prof.g_support())
                .unwrap()
                .value;
        for i in 0..100 {
            let r = i as f64 * 0.5;
            assert_eq!(prof.h(r), prof.h(-r));
            assert!(prof.h(r).abs() <= bound + 1e-12);
        }
        assert!((prof.h(0.0) - bound).abs() < 1e-12);
    }

    #[test]
    fn tabulated_h_agrees_with_adaptive() {
        let phi = bump(4.0, 1.0).unwrap();
        let prof = TransformProfile::new(phi, 100.0).unwrap();
        for &r in &[0.0, 0.5, 3.0, 17.0, 60.0, 100.0] {
            let a = h_transform(&prof, r).unwrap();
            assert!((a - prof.h(r)).abs() < 1e-10, "r={r}: {a} vs {}", prof.h(r));
        }
    }
}
