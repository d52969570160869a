//! The hyperbolic-class side of the Selberg trace formula,
//! `Σ_{[γ]≠1} l_{γ₀}/(2 sinh(l_γ/2))·g(l_γ)`, on short spectra.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hyp::sinh_half;
use crate::quad::Adaptive;
use crate::sequence::{
    compacted_surface, other_geodesic_floor, CertifiedSum, CompensatedSum, GeodesicClass,
    PowerSpectrum, Schedule,
};
use crate::trace::test_function::TestFunction;
use crate::trace::transform::TransformProfile;

/// Terms summed one by one before the tail is bracketed by integrals.
pub const GEOMETRIC_HEAD: u64 = 10_000;

pub fn geometric_side<G: Fn(f64) -> f64>(spectrum: &[GeodesicClass], g: G) -> f64 {
    spectrum
        .iter()
        .map(|c| {
            c.multiplicity() as f64 * c.primitive_length() / (2.0 * sinh_half(c.length()))
                * g(c.length())
        })
        .collect::<CompensatedSum>()
        .value()
}

/// The geometric side of an implicit power spectrum for a kernel `g` that is
/// nonnegative, nonincreasing and zero beyond `g_support`.
///
/// The first [`GEOMETRIC_HEAD`] terms are summed; the rest, a decreasing
/// sequence `F(k)`, lies in `[∫_a^{b+1} F, F(a) + ∫_a^b F]`. The integral is
/// taken in `y = kt` on a logarithmic scale and its quadrature error
/// estimate is added to the radius.
pub fn geometric_side_powers<G>(spectrum: &PowerSpectrum, g: G, g_support: f64) -> Result<CertifiedSum>
where
    G: Fn(f64) -> f64 + Sync,
{
    let t = spectrum.primitive_length;
    let mult = spectrum.multiplicity as f64;
    let reach = spectrum.radius.min(g_support);
    let count = crate::sequence::sum::term_count(t, reach);
    let term = |k: f64| {
        let l = k * t;
        t / (2.0 * sinh_half(l)) * g(l)
    };
    let direct = |n: u64| -> f64 {
        let terms: Vec<f64> = (1..=n).into_par_iter().map(|k| term(k as f64)).collect();
        terms.into_iter().collect::<CompensatedSum>().value()
    };
    match count.exact {
        Some(n) if n <= GEOMETRIC_HEAD => {
            let value = direct(n);
            return Ok(CertifiedSum {
                value,
                radius: 1e-14 * value.abs(),
            }
            .scale(mult));
        }
        _ => {}
    }
    let head = direct(GEOMETRIC_HEAD);
    let a = GEOMETRIC_HEAD as f64 + 1.0;
    let b = count.value;
    // ∫_a^x F(k) dk = ∫_{at}^{xt} g(y)/(2 sinh(y/2)) dy, with y = e^s.
    let integral = |lo: f64, hi: f64| -> Result<(f64, f64)> {
        let hi = hi.min(g_support);
        if hi <= lo {
            return Ok((0.0, 0.0));
        }
        let est = Adaptive::with_abs_tol(1e-12).integrate(
            |s| {
                let y = s.exp();
                y * g(y) / (2.0 * sinh_half(y))
            },
            lo.ln(),
            hi.ln(),
        )?;
        Ok((est.value, est.error))
    };
    let (to_b, err_b) = integral(a * t, b * t)?;
    let (to_b1, err_b1) = integral(a * t, (b + 1.0 + count.radius) * t)?;
    let lower = to_b1;
    let upper = term(a) + to_b;
    if !(lower.is_finite() && upper.is_finite()) {
        return Err(Error::Numerics(format!(
            "geometric tail bracket is not finite for t = {t:e}"
        )));
    }
    let tail = CertifiedSum {
        value: 0.5 * (lower + upper),
        radius: 0.5 * (upper - lower).abs() + err_b + err_b1,
    };
    let value = head + tail.value;
    Ok(CertifiedSum {
        value,
        radius: tail.radius + 1e-14 * value.abs(),
    }
    .scale(mult))
}

/// One level of the normalized geometric side along a schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct VanishingRow {
    pub j: usize,
    pub level: u64,
    pub t: f64,
    pub valid: bool,
    /// Geometric side divided by the volume.
    pub value: Option<CertifiedSum>,
    pub note: Option<String>,
}

/// `geometric_side(short_spectrum(N_j, t_j, L), g)/vol` for the first `j_max`
/// rows, with `L` the support radius of `g`.
pub fn vanishing_series<F: TestFunction>(
    schedule: &Schedule,
    profile: &TransformProfile<F>,
    j_max: usize,
) -> Result<Vec<VanishingRow>> {
    if j_max < 1 {
        return Err(Error::domain("j_max", "must be at least 1"));
    }
    let radius = profile.g_support();
    let m = j_max.min(schedule.len());
    (0..m)
        .into_par_iter()
        .map(|i| {
            let (level, t) = (schedule.levels()[i], schedule.pinch_lengths()[i]);
            let mut row = VanishingRow {
                j: i + 1,
                level,
                t,
                valid: false,
                value: None,
                note: None,
            };
            if !t.is_normal() || t >= 0.5 {
                row.note = Some(format!("pinch length {t:e} outside (0, 1/2)"));
                return Ok(row);
            }
            let floor = other_geodesic_floor(level, t)?;
            if floor <= radius {
                row.note = Some(format!("geodesic floor {floor:.6} ≤ radius {radius:.6}"));
                return Ok(row);
            }
            let surface = compacted_surface(level, t)?;
            let spectrum = PowerSpectrum::new(t, surface.pinched_count, radius)?;
            let side = geometric_side_powers(&spectrum, |r| profile.g(r), radius)?;
            row.valid = true;
            row.value = Some(side.scale(1.0 / surface.volume));
            Ok(row)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::plancherel_sum;
    use crate::trace::test_function::bump;

    #[test]
    fn empty_and_single_class() {
        assert_eq!(geometric_side(&[], |_| 1.0), 0.0);
        let one = [GeodesicClass::power(1.0, 1, 1).unwrap()];
        let v = geometric_side(&one, |_| 1.0);
        assert!((v - 0.959_517_375_667_471_86).abs() < 1e-15);
    }

    #[test]
    fn bounded_by_half_sup_times_plancherel_sum() {
        let phi = bump(2.0, 1.0).unwrap();
        let profile = TransformProfile::new(phi, 10.0).unwrap();
        let sup = profile.g_sup();
        let radius = profile.g_support();
        let classes: Vec<GeodesicClass> = (1..=20)
            .map(|k| GeodesicClass::power(0.07, k, 3).unwrap())
            .filter(|c| c.length() <= radius)
            .collect();
        let geo = geometric_side(&classes, |r| profile.g(r));
        let pl = plancherel_sum(&classes, radius);
        assert!(geo <= 0.5 * sup * pl);
        assert!(geo >= 0.5 * profile.g_min_on(radius, 200) * pl);
    }

    #[test]
    fn powers_match_listing_when_short() {
        let phi = bump(2.0, 1.0).unwrap();
        let profile = TransformProfile::new(phi, 10.0).unwrap();
        let spectrum = PowerSpectrum::new(1e-3, 4, 1.2).unwrap();
        let listed: Vec<GeodesicClass> = spectrum.classes().collect();
        let direct = geometric_side(&listed, |r| profile.g(r));
        let implicit = geometric_side_powers(&spectrum, |r| profile.g(r), profile.g_support()).unwrap();
        assert!((implicit.value - direct).abs() <= 1e-12 * direct);
    }

    #[test]
    fn bracketed_tail_contains_direct_sum() {
        // 2·10⁵ terms: beyond the head, still cheap to sum one by one.
        let phi = bump(1.0, 1.0).unwrap();
        let profile = TransformProfile::new(phi, 10.0).unwrap();
        let spectrum = PowerSpectrum::new(5e-6, 2, 1.0).unwrap();
        let listed: Vec<f64> = spectrum
            .classes()
            .map(|c| 2.0 * c.primitive_length() / (2.0 * sinh_half(c.length())) * profile.g(c.length()))
            .collect();
        let direct = listed.into_iter().collect::<CompensatedSum>().value();
        let implicit = geometric_side_powers(&spectrum, |r| profile.g(r), profile.g_support()).unwrap();
        assert!(implicit.contains(direct), "{implicit:?} vs {direct}");
        assert!(implicit.relative_radius() < 1e-4);
    }
}
