//! Radial profiles φ on `[0, ∞)` of bi-invariant test functions
//! `f(x) = φ(tr(xᵀx) − 2)` on SL₂(ℝ).

use crate::error::{Error, Result};
use crate::jet::Jet;

/// A smooth profile vanishing on `[support_bound, ∞)`.
pub trait TestFunction: Sync {
    fn value(&self, u: f64) -> f64;

    /// `S` with `value(u) = 0` for every `u ≥ S`.
    fn support_bound(&self) -> f64;

    /// Taylor coefficients of the profile at `u` up to degree `len - 1`.
    fn taylor(&self, u: f64, len: usize) -> Jet;
}

/// `φ(u) = A·exp(−1/(1 − (u/S)²))` for `|u| < S`, zero elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    support: f64,
    amplitude: f64,
}

/// Builds the standard bump with support bound `support` and peak
/// `amplitude·e⁻¹` at the origin.
pub fn bump(support: f64, amplitude: f64) -> Result<Bump> {
    if !(support > 0.0 && support.is_finite()) {
        return Err(Error::domain(
            "bump support",
            format!("support bound must be positive and finite, got {support}"),
        ));
    }
    if !amplitude.is_finite() {
        return Err(Error::domain("bump amplitude", "amplitude must be finite"));
    }
    Ok(Bump { support, amplitude })
}

impl Bump {
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn scaled(&self, factor: f64) -> Bump {
        Bump {
            amplitude: self.amplitude * factor,
            ..*self
        }
    }
}

impl TestFunction for Bump {
    fn value(&self, u: f64) -> f64 {
        if self.amplitude == 0.0 || u.abs() >= self.support {
            return 0.0;
        }
        let y = u / self.support;
        self.amplitude * (-1.0 / (1.0 - y * y)).exp()
    }

    fn support_bound(&self) -> f64 {
        self.support
    }

    fn taylor(&self, u: f64, len: usize) -> Jet {
        if self.amplitude == 0.0 || u.abs() >= self.support {
            return Jet::zero(len);
        }
        let y = Jet::variable(u, len).scale(1.0 / self.support);
        let q = &Jet::constant(1.0, len) + &(&y * &y).scale(-1.0);
        q.recip().scale(-1.0).exp().scale(self.amplitude)
    }
}
