//! The compactified congruence surfaces X_t(N) and the convergence
//! functionals evaluated on their short length spectra.
//!
//! X_t(N) replaces the `b_N` cusps of X(N) by `b_N/2` closed geodesics of
//! length `t`. Below the validity radius the only closed geodesics are the
//! powers of these, so the spectrum up to `R` is `{k·t : k·t ≤ R}`, each
//! with multiplicity `b_N/2`.

pub mod schedule;
pub mod sum;

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::congruence::{surface_data, CongruenceSurfaceData};
use crate::error::{Error, Result};
use crate::hyp::{crossing_length_bound, distortion_bound, sinh_half, GeodesicLength};

pub use schedule::{
    classify_schedule, PinchRule, Schedule, ScheduleReport, ScheduleRow, TrendVerdict,
};
pub use sum::{harmonic_sum, CertifiedSum, CompensatedSum, SumPlan, TermCount};

/// Largest spectrum [`short_spectrum`] will materialise.
pub const MAX_LISTED_CLASSES: u64 = sum::DIRECT_LIMIT;

#[derive(Debug, Clone, PartialEq)]
pub struct CompactedSurface {
    pub level: u64,
    pub pinch_length: f64,
    /// `b_N/2`.
    pub pinched_count: u64,
    /// `g_N + b_N/2`.
    pub genus: BigInt,
    /// `4π(genus − 1) = π·d_N/6`.
    pub volume: f64,
    /// Lower bound on every closed geodesic that is not a power of a pinched
    /// one; `None` when `t ≥ 1/2`, where no such bound is available.
    pub validity_radius: Option<f64>,
    pub base: CongruenceSurfaceData,
}

fn check_pinch(t: f64) -> Result<f64> {
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(Error::domain(
            "pinch length",
            format!("must be positive and finite, got {t}"),
        ))
    }
}

fn check_radius(radius: f64) -> Result<f64> {
    if radius > 0.0 && radius.is_finite() {
        Ok(radius)
    } else {
        Err(Error::domain(
            "radius",
            format!("must be positive and finite, got {radius}"),
        ))
    }
}

pub fn compacted_surface(level: u64, t: f64) -> Result<CompactedSurface> {
    let t = check_pinch(t)?;
    let base = surface_data(level)?;
    let pairs = &base.cusps / 2u32;
    let genus = base.compacted_genus();
    let pinched_count = pairs.to_u64().ok_or_else(|| {
        Error::domain("level", format!("pinched count of level {level} exceeds u64"))
    })?;
    let validity_radius = if t < 0.5 {
        Some(other_geodesic_floor(level, t)?)
    } else {
        None
    };
    Ok(CompactedSurface {
        level,
        pinch_length: t,
        pinched_count,
        genus,
        volume: base.area,
        validity_radius,
        base,
    })
}

fn check_floor_args(level: u64, t: f64) -> Result<()> {
    if level < 3 {
        return Err(Error::domain("level", format!("expected N ≥ 3, got {level}")));
    }
    if !(t > 0.0 && t < 0.5) {
        return Err(Error::domain(
            "pinch length",
            format!("the geodesic floor needs 0 < t < 1/2, got {t}"),
        ));
    }
    Ok(())
}

/// Lower bound on the length of any closed geodesic of X_t(N) that is not a
/// power of a pinched geodesic: the minimum over geodesics crossing a pinched
/// one, `2·asinh(1/sinh(t/2))`, simple ones disjoint from them,
/// `arccosh((N² − 2)/2)/(1 + 5t²/4)`, and figure eights, twice that.
pub fn other_geodesic_floor(level: u64, t: f64) -> Result<f64> {
    check_floor_args(level, t)?;
    let crossing = crossing_length_bound(GeodesicLength::new(t)?).value();
    let n2 = level as f64 * level as f64;
    let simple = ((n2 - 2.0) / 2.0).acosh() / distortion_bound(t)?;
    let figure_eight = 2.0 * simple;
    Ok(crossing.min(simple).min(figure_eight))
}

/// Whether every closed geodesic of length `≤ R` is a power of a pinched one.
pub fn validity_check(level: u64, t: f64, radius: f64) -> Result<bool> {
    let radius = check_radius(radius)?;
    Ok(other_geodesic_floor(level, t)? > radius)
}

fn require_valid(level: u64, t: f64, radius: f64) -> Result<()> {
    let floor = other_geodesic_floor(level, t)?;
    let radius = check_radius(radius)?;
    if floor > radius {
        Ok(())
    } else {
        Err(Error::Validity {
            level,
            pinch: t,
            radius,
            floor,
        })
    }
}

/// One entry of a length spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicClass {
    length: f64,
    primitive_length: f64,
    multiplicity: u64,
}

impl GeodesicClass {
    /// Checks that `length` is a positive integer multiple of
    /// `primitive_length` (relative tolerance 1e−9).
    pub fn new(length: f64, primitive_length: f64, multiplicity: u64) -> Result<Self> {
        let primitive_length = GeodesicLength::new(primitive_length)?.value();
        let length = GeodesicLength::new(length)?.value();
        if multiplicity == 0 {
            return Err(Error::domain("multiplicity", "must be at least 1"));
        }
        let k = (length / primitive_length).round();
        if k < 1.0 || (length - k * primitive_length).abs() > 1e-9 * length {
            return Err(Error::domain(
                "geodesic class",
                format!("length {length} is not a multiple of primitive length {primitive_length}"),
            ));
        }
        Ok(GeodesicClass {
            length,
            primitive_length,
            multiplicity,
        })
    }

    /// The `k`-th power of a primitive geodesic of length `primitive_length`.
    pub fn power(primitive_length: f64, k: u64, multiplicity: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("power", "exponent must be at least 1"));
        }
        let primitive_length = GeodesicLength::new(primitive_length)?.value();
        GeodesicClass::new(k as f64 * primitive_length, primitive_length, multiplicity)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn primitive_length(&self) -> f64 {
        self.primitive_length
    }

    pub fn multiplicity(&self) -> u64 {
        self.multiplicity
    }

    /// `multiplicity·l₀/sinh(l/2)`.
    pub fn plancherel_term(&self) -> f64 {
        self.multiplicity as f64 * self.primitive_length / sinh_half(self.length)
    }
}

/// The spectrum `{k·t : k·t ≤ R}` with uniform multiplicity, kept implicit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSpectrum {
    pub primitive_length: f64,
    pub multiplicity: u64,
    pub radius: f64,
    pub count: TermCount,
}

impl PowerSpectrum {
    pub fn new(primitive_length: f64, multiplicity: u64, radius: f64) -> Result<Self> {
        let primitive_length = check_pinch(primitive_length)?;
        let radius = check_radius(radius)?;
        Ok(PowerSpectrum {
            primitive_length,
            multiplicity,
            radius,
            count: sum::term_count(primitive_length, radius),
        })
    }

    /// Classes in increasing length.
    pub fn classes(&self) -> impl Iterator<Item = GeodesicClass> + '_ {
        let t = self.primitive_length;
        (1u64..)
            .map(move |k| (k, k as f64 * t))
            .take_while(move |&(_, l)| l <= self.radius)
            .map(move |(_, l)| GeodesicClass {
                length: l,
                primitive_length: t,
                multiplicity: self.multiplicity,
            })
    }

    pub fn plancherel_sum(&self) -> CertifiedSum {
        self.plancherel_sum_with(SumPlan::default())
    }

    pub fn plancherel_sum_with(&self, plan: SumPlan) -> CertifiedSum {
        sum::pinched_power_sum_with(self.primitive_length, self.radius, plan)
            .scale(self.multiplicity as f64)
    }
}

/// The short spectrum of X_t(N) up to `R` in implicit form.
pub fn power_spectrum(level: u64, t: f64, radius: f64) -> Result<PowerSpectrum> {
    require_valid(level, t, radius)?;
    let surface = compacted_surface(level, t)?;
    PowerSpectrum::new(t, surface.pinched_count, radius)
}

/// The short spectrum of X_t(N) up to `R` as an explicit list.
pub fn short_spectrum(level: u64, t: f64, radius: f64) -> Result<Vec<GeodesicClass>> {
    let spectrum = power_spectrum(level, t, radius)?;
    if spectrum.count.value > MAX_LISTED_CLASSES as f64 {
        return Err(Error::domain(
            "short spectrum",
            format!(
                "{:.3e} classes exceed the listing limit {MAX_LISTED_CLASSES}; use power_spectrum",
                spectrum.count.value
            ),
        ));
    }
    Ok(spectrum.classes().collect())
}

/// `Σ mult·l₀/sinh(l/2)` over the classes with `l ≤ R`.
pub fn plancherel_sum(spectrum: &[GeodesicClass], radius: f64) -> f64 {
    spectrum
        .iter()
        .filter(|c| c.length <= radius)
        .map(GeodesicClass::plancherel_term)
        .collect::<CompensatedSum>()
        .value()
}

/// Certified `plancherel_sum(short_spectrum(N, t, R), R) / vol(X_t(N))`.
pub fn plancherel_normalized_certified(level: u64, t: f64, radius: f64) -> Result<CertifiedSum> {
    let spectrum = power_spectrum(level, t, radius)?;
    let surface = compacted_surface(level, t)?;
    Ok(spectrum.plancherel_sum().scale(1.0 / surface.volume))
}

pub fn plancherel_normalized(level: u64, t: f64, radius: f64) -> Result<f64> {
    Ok(plancherel_normalized_certified(level, t, radius)?.value)
}

/// Simple closed geodesics of length `≤ R` per unit volume: `3/(2πN)`, or 0
/// when `t > R`.
pub fn bs_ratio(level: u64, t: f64, radius: f64) -> Result<f64> {
    require_valid(level, t, radius)?;
    if t > radius {
        return Ok(0.0);
    }
    let surface = compacted_surface(level, t)?;
    Ok(surface.pinched_count as f64 / surface.volume)
}

/// Explicit-constant bounds on the Plancherel sum of X_t(N).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sandwich {
    /// `(R/sinh(R/2))·(b_N/2)·|ln t|`.
    pub lower: f64,
    /// `2·(b_N/2)·(ln(R/t) + 1)`.
    pub upper: f64,
}

impl Sandwich {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// The sandwich for X_t(N); requires the spectrum up to `R` to be complete.
pub fn sandwich_bounds(level: u64, t: f64, radius: f64) -> Result<Sandwich> {
    let pairs = compacted_surface(level, check_pinch(t)?)?.pinched_count;
    let bounds = power_sum_sandwich(pairs, t, radius)?;
    require_valid(level, t, radius)?;
    Ok(bounds)
}

/// Bounds on `pairs·Σ_{kt ≤ R} t/sinh(kt/2)` alone, for `R ≥ 1` and
/// `t < min(1, R)`; no completeness of the spectrum is assumed.
///
/// `x/sinh(x/2)` decreases, so each term is at least `(1/k)·R/sinh(R/2)`,
/// and `ln(R/t) ≤ H_n ≤ ln n + 1` with `ln(R/t) ≥ |ln t|`.
pub fn power_sum_sandwich(pairs: u64, t: f64, radius: f64) -> Result<Sandwich> {
    let radius = check_radius(radius)?;
    if radius < 1.0 {
        return Err(Error::domain("radius", format!("sandwich needs R ≥ 1, got {radius}")));
    }
    if !(t > 0.0 && t < radius.min(1.0)) {
        return Err(Error::domain(
            "pinch length",
            format!("sandwich needs 0 < t < min(1, R), got {t}"),
        ));
    }
    let pairs = pairs as f64;
    Ok(Sandwich {
        lower: radius / sinh_half(radius) * pairs * t.ln().abs(),
        upper: 2.0 * pairs * ((radius / t).ln() + 1.0),
    })
}

/// `π·d_N/6` recomputed from the compacted genus, `4π(genus − 1)`.
pub fn volume_from_genus(surface: &CompactedSurface) -> f64 {
    let genus = surface.genus.to_f64().unwrap_or(f64::INFINITY);
    4.0 * PI * (genus - 1.0)
}
