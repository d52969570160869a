//! Closed-form hyperbolic trigonometry on closed geodesics: trace ↔ length,
//! collars, hyperbolic cylinders and the bounds built from them.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Length of a closed geodesic. Always positive and finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct GeodesicLength(f64);

impl GeodesicLength {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value.is_finite() {
            Ok(GeodesicLength(value))
        } else {
            Err(Error::domain(
                "geodesic length",
                format!("must be positive and finite, got {value}"),
            ))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Half-width of a collar or cylinder around a simple closed geodesic.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CollarWidth(f64);

impl CollarWidth {
    pub fn value(self) -> f64 {
        self.0
    }
}

fn positive(what: &'static str, x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::domain(what, format!("must be positive and finite, got {x}")))
    }
}

/// `sinh(l/2)`, by its series below `1e−8`.
pub(crate) fn sinh_half(l: f64) -> f64 {
    let x = 0.5 * l;
    if l < 1e-8 {
        x + x * x * x / 6.0
    } else {
        x.sinh()
    }
}

/// Length of the closed geodesic of a hyperbolic element with `|tr| = abs_trace`:
/// `2cosh(l/2) = |tr|`.
pub fn length_from_trace(abs_trace: f64) -> Result<GeodesicLength> {
    if abs_trace.is_nan() || abs_trace <= 2.0 {
        return Err(Error::NotHyperbolic { abs_trace });
    }
    length_from_trace_excess(abs_trace - 2.0)
}

/// Same as [`length_from_trace`], taking `|tr| − 2 > 0`. Use this when the
/// excess is known more precisely than `|tr|` itself (short geodesics).
pub fn length_from_trace_excess(excess: f64) -> Result<GeodesicLength> {
    if excess.is_nan() || excess <= 0.0 {
        return Err(Error::NotHyperbolic {
            abs_trace: 2.0 + excess,
        });
    }
    if !excess.is_finite() {
        return Err(Error::domain("trace", "must be finite"));
    }
    // l = 2·arccosh(1 + e/2) = 4·arcsinh(√e / 2); the second form has no
    // cancellation near the parabolic limit.
    GeodesicLength::new(4.0 * (0.5 * excess.sqrt()).asinh())
}

/// Collar half-width `arcsinh(1/sinh(l/2))`.
pub fn collar_width(l: GeodesicLength) -> CollarWidth {
    CollarWidth((1.0 / sinh_half(l.value())).asinh())
}

/// Half-width `arcsinh(sinh R / sinh(l/2))` of the cylinder used to cover the
/// `R`-thin part. Equals [`collar_width`] at `R = arcsinh(1)`.
pub fn collar_width_at_radius(l: GeodesicLength, radius: f64) -> Result<CollarWidth> {
    let radius = positive("radius", radius)?;
    Ok(CollarWidth((radius.sinh() / sinh_half(l.value())).asinh()))
}

/// Area `4π·sinh(R)·l/sinh(l/2)` of the hyperbolic cylinder of half-width
/// `w_R(l)` about a geodesic of length `l`. Never exceeds `8π·sinh(R)`.
pub fn cylinder_volume(l: GeodesicLength, radius: f64) -> Result<f64> {
    let radius = positive("radius", radius)?;
    let l = l.value();
    // x/sinh(x) ≤ 1 exactly; rounding can push the quotient one ulp above.
    let ratio = (0.5 * l / sinh_half(l)).min(1.0);
    Ok(8.0 * PI * radius.sinh() * ratio)
}

/// `8π·sinh(R)·N_s`: bound on the area of the `R`-thin part given the number
/// of simple closed geodesics of length at most `2R`.
pub fn thin_part_upper_bound(simple_count: u64, radius: f64) -> Result<f64> {
    let radius = positive("radius", radius)?;
    Ok(8.0 * PI * radius.sinh() * simple_count as f64)
}

/// Injectivity radius at distance `lambda` from a geodesic of length `l`:
/// `sinh(InjRad) = sinh(l/2)·cosh(λ)`.
pub fn injrad_from_collar(l: GeodesicLength, lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::domain(
            "collar distance",
            format!("must be finite and ≥ 0, got {lambda}"),
        ));
    }
    Ok((sinh_half(l.value()) * lambda.cosh()).asinh())
}

/// Shortest possible length of a closed geodesic crossing a simple closed
/// geodesic of length `t`: `2·arcsinh(1/sinh(t/2))`.
pub fn crossing_length_bound(t: GeodesicLength) -> GeodesicLength {
    GeodesicLength(2.0 * (1.0 / sinh_half(t.value())).asinh())
}

/// Length distortion `1 + (5/4)ε²` of the boundary-coherent map between a
/// Y-piece with a boundary of length `ε` and its degenerate limit.
pub fn distortion_bound(eps: f64) -> Result<f64> {
    if eps > 0.0 && eps < 0.5 {
        Ok(1.0 + 1.25 * eps * eps)
    } else {
        Err(Error::domain(
            "distortion bound",
            format!("ε must lie in (0, 1/2), got {eps}"),
        ))
    }
}
