//! The explicit Plancherel identity for SL₂(ℝ):
//! `φ(0) = f(1) = (1/4π) ∫_ℝ h(r) tanh(πr) r dr`.
//!
//! The integral is truncated at a radius `r_max` chosen from a tail
//! certificate. Integrating by parts `k` times in `h(r) = ∫ g(|u|) cos(ru) du`
//! gives `|h(r)| ≤ ‖g^(k)‖₁ / r^k`, so with `tanh ≤ 1` the discarded tail is
//! at most `‖g^(k)‖₁ · r_max^(2−k) / (2π(k − 2))`. The derivative norms come
//! from Taylor jets of `g`, integrated numerically, inflated by a safety
//! factor.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quad::gauss_legendre;
use crate::trace::test_function::TestFunction;
use crate::trace::transform::{derivative_l1_norms, g_support_radius, TransformProfile};

/// Default bound on the discarded tail.
pub const TAIL_TARGET: f64 = 1e-10;
/// Highest integration-by-parts order tried.
const MAX_ORDER: usize = 40;
const NORM_PANELS: usize = 400;
const NORM_SAFETY: f64 = 1.5;
/// Truncation radii beyond this are refused as uncertifiable at desk scale.
const MAX_RADIUS: f64 = 2.0e4;

/// `tanh(πr)`, pinned to 1 where it is 1 to double precision.
pub fn tanh_pi(r: f64) -> f64 {
    if r > 20.0 {
        1.0
    } else if r < -20.0 {
        -1.0
    } else {
        (PI * r).tanh()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailCertificate {
    /// Integration-by-parts order achieving the smallest radius.
    pub order: usize,
    /// Estimated `‖g^(order)‖₁` including the safety factor.
    pub derivative_norm: f64,
    pub r_max: f64,
    /// Certified bound on the discarded tail.
    pub bound: f64,
}

/// Chooses the smallest truncation radius whose tail bound is `≤ target`.
pub fn certify_tail<F: TestFunction>(phi: &F, target: f64) -> Result<TailCertificate> {
    if !(target > 0.0) {
        return Err(Error::domain("tail target", format!("must be > 0, got {target}")));
    }
    let norms = derivative_l1_norms(phi, MAX_ORDER + 1, NORM_PANELS);
    if norms.iter().all(|&n| n == 0.0) {
        return Ok(TailCertificate {
            order: 0,
            derivative_norm: 0.0,
            r_max: 0.0,
            bound: 0.0,
        });
    }
    let mut best: Option<TailCertificate> = None;
    for (order, &raw) in norms.iter().enumerate().skip(3) {
        if !raw.is_finite() {
            continue;
        }
        let m = NORM_SAFETY * raw;
        let k2 = (order - 2) as f64;
        let r_max = (m / (2.0 * PI * k2 * target)).powf(1.0 / k2);
        if best.is_none_or(|b| r_max < b.r_max) {
            best = Some(TailCertificate {
                order,
                derivative_norm: m,
                r_max,
                bound: m * r_max.powf(-k2) / (2.0 * PI * k2),
            });
        }
    }
    match best {
        Some(c) if c.r_max <= MAX_RADIUS => Ok(c),
        Some(c) => Err(Error::Numerics(format!(
            "tail bound {target:e} needs r_max = {:.3e} (order {}, ‖g^(k)‖₁ ≈ {:.3e}), above the \
             limit {MAX_RADIUS:e}",
            c.r_max, c.order, c.derivative_norm
        ))),
        None => Err(Error::Numerics(
            "no finite derivative norm available for the tail certificate".into(),
        )),
    }
}

/// Width of the Gauss panels on `[0, TANH_ZONE]`, where the poles of
/// `tanh(πr)` at `±i/2` limit the convergence of wide panels.
const TANH_PANEL: f64 = 0.5;
const TANH_ZONE: f64 = 20.0;

/// `(1/2π) ∫_0^{r_max} h(r) tanh(πr) r dr` for an even `h`, using 20-point
/// Gauss panels no wider than `panel_width` beyond the `tanh` zone.
pub fn truncated_plancherel<H>(h: H, r_max: f64, panel_width: f64) -> f64
where
    H: Fn(f64) -> f64 + Sync,
{
    if r_max <= 0.0 {
        return 0.0;
    }
    let mut edges = vec![0.0];
    let zone = r_max.min(TANH_ZONE);
    let near = ((zone / TANH_PANEL).ceil() as usize).max(1);
    edges.extend((1..=near).map(|i| zone * i as f64 / near as f64));
    if r_max > zone {
        let far = (((r_max - zone) / panel_width).ceil() as usize).max(1);
        edges.extend((1..=far).map(|i| zone + (r_max - zone) * i as f64 / far as f64));
    }
    let (x, w) = gauss_legendre(20);
    let sums: Vec<f64> = edges
        .par_windows(2)
        .map(|pair| {
            let (a, b) = (pair[0], pair[1]);
            let (centre, half) = (0.5 * (a + b), 0.5 * (b - a));
            x.iter()
                .zip(&w)
                .map(|(xi, wi)| {
                    let r = centre + half * xi;
                    half * wi * h(r) * tanh_pi(r) * r
                })
                .sum::<f64>()
        })
        .collect();
    sums.iter().sum::<f64>() / (2.0 * PI)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlancherelEstimate {
    pub value: f64,
    pub certificate: TailCertificate,
}

/// Evaluates the Plancherel integral of the transform pair of `phi`; the
/// result should reproduce `phi(0)`.
pub fn plancherel_integral<F: TestFunction + Clone>(phi: &F) -> Result<PlancherelEstimate> {
    let certificate = certify_tail(phi, TAIL_TARGET)?;
    if certificate.r_max == 0.0 {
        return Ok(PlancherelEstimate {
            value: 0.0,
            certificate,
        });
    }
    let profile = TransformProfile::new(phi.clone(), certificate.r_max)?;
    Ok(PlancherelEstimate {
        value: plancherel_of_profile(&profile, certificate.r_max),
        certificate,
    })
}

/// The truncated integral for an already tabulated profile.
pub fn plancherel_of_profile<F: TestFunction>(profile: &TransformProfile<F>, r_max: f64) -> f64 {
    // h oscillates with period 2π/L; one period per 20-point panel.
    let period = 2.0 * PI / g_support_radius(profile.phi().support_bound());
    truncated_plancherel(|r| profile.h(r), r_max.min(profile.max_frequency()), period)
}
