//! Schedules `(N_j, t_j)` and their classification by the Benjamini–Schramm
//! and Plancherel criteria.

use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::{
    compacted_surface, other_geodesic_floor, sandwich_bounds, CertifiedSum, PowerSpectrum,
};
use crate::error::{Error, Result};

/// How the pinch lengths follow the levels.
#[derive(Debug, Clone, PartialEq)]
pub enum PinchRule {
    /// `t = c/N`.
    Reciprocal { scale: f64 },
    /// `t = exp(−c·N)`.
    Exponential { scale: f64 },
    /// `t = exp(−c·N²)`.
    Superexponential { scale: f64 },
    Explicit(Vec<f64>),
}

impl PinchRule {
    pub fn name(&self) -> &'static str {
        match self {
            PinchRule::Reciprocal { .. } => "reciprocal",
            PinchRule::Exponential { .. } => "exponential",
            PinchRule::Superexponential { .. } => "superexponential",
            PinchRule::Explicit(_) => "explicit",
        }
    }

    /// Behaviour of the normalized Plancherel sum the rule should produce.
    pub fn expected_verdict(&self) -> Option<TrendVerdict> {
        match self {
            PinchRule::Reciprocal { .. } => Some(TrendVerdict::Vanishing),
            PinchRule::Exponential { .. } => Some(TrendVerdict::BoundedAwayFromZero),
            PinchRule::Superexponential { .. } => Some(TrendVerdict::Divergent),
            PinchRule::Explicit(_) => None,
        }
    }

    fn scale(&self) -> Option<f64> {
        match *self {
            PinchRule::Reciprocal { scale }
            | PinchRule::Exponential { scale }
            | PinchRule::Superexponential { scale } => Some(scale),
            PinchRule::Explicit(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    name: String,
    levels: Vec<u64>,
    rule: PinchRule,
    pinch_lengths: Vec<f64>,
}

impl Schedule {
    /// Validates levels (`≥ 3`, strictly increasing) and pinch lengths
    /// (positive for explicit lists, nonincreasing). Rule-generated lengths
    /// may underflow to zero; such rows are flagged, not rejected.
    pub fn new(name: impl Into<String>, levels: Vec<u64>, rule: PinchRule) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::domain("schedule.levels", "must not be empty"));
        }
        if let Some(&bad) = levels.iter().find(|&&n| n < 3) {
            return Err(Error::domain("schedule.levels", format!("level {bad} is below 3")));
        }
        if let Some(w) = levels.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::domain(
                "schedule.levels",
                format!("must be strictly increasing, found {} then {}", w[0], w[1]),
            ));
        }
        if let Some(c) = rule.scale() {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::domain(
                    "schedule.pinch.scale",
                    format!("must be positive and finite, got {c}"),
                ));
            }
        }
        let pinch_lengths: Vec<f64> = match &rule {
            PinchRule::Reciprocal { scale } => levels.iter().map(|&n| scale / n as f64).collect(),
            PinchRule::Exponential { scale } => {
                levels.iter().map(|&n| (-scale * n as f64).exp()).collect()
            }
            PinchRule::Superexponential { scale } => levels
                .iter()
                .map(|&n| (-scale * n as f64 * n as f64).exp())
                .collect(),
            PinchRule::Explicit(values) => {
                if values.len() != levels.len() {
                    return Err(Error::domain(
                        "schedule.pinch.values",
                        format!("{} values for {} levels", values.len(), levels.len()),
                    ));
                }
                if let Some(&bad) = values.iter().find(|&&t| !(t > 0.0 && t.is_finite())) {
                    return Err(Error::domain(
                        "schedule.pinch.values",
                        format!("pinch lengths must be positive and finite, got {bad}"),
                    ));
                }
                values.clone()
            }
        };
        if let Some(w) = pinch_lengths.windows(2).find(|w| w[1] > w[0]) {
            return Err(Error::domain(
                "schedule.pinch",
                format!("pinch lengths must be nonincreasing, found {:e} then {:e}", w[0], w[1]),
            ));
        }
        Ok(Schedule {
            name: name.into(),
            levels,
            rule,
            pinch_lengths,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn levels(&self) -> &[u64] {
        &self.levels
    }

    pub fn rule(&self) -> &PinchRule {
        &self.rule
    }

    pub fn pinch_lengths(&self) -> &[f64] {
        &self.pinch_lengths
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrendVerdict {
    Vanishing,
    BoundedAwayFromZero,
    Divergent,
    Inconclusive,
}

impl fmt::Display for TrendVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrendVerdict::Vanishing => "vanishing",
            TrendVerdict::BoundedAwayFromZero => "bounded-away-from-zero",
            TrendVerdict::Divergent => "divergent",
            TrendVerdict::Inconclusive => "inconclusive",
        })
    }
}

/// One level of a schedule. Criterion fields are `None` on invalid rows;
/// the sandwich also needs `R ≥ 1` and `t < min(1, R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleRow {
    /// 1-based.
    pub j: usize,
    pub level: u64,
    pub t: f64,
    pub pinched_count: u64,
    pub genus: BigInt,
    pub volume: f64,
    pub valid: bool,
    pub bs_ratio: Option<f64>,
    pub pl_sum: Option<CertifiedSum>,
    pub pl_norm: Option<f64>,
    /// Sandwich bounds divided by the volume.
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleReport {
    pub name: String,
    pub rule: &'static str,
    pub radius: f64,
    pub rows: Vec<ScheduleRow>,
    /// BS ratio strictly decreasing over the valid rows.
    pub bs_vanishing: bool,
    pub plancherel_verdict: TrendVerdict,
    pub expected_verdict: Option<TrendVerdict>,
    /// Log-log slope of the normalized sum against `N` on the tail half.
    pub tail_slope: Option<f64>,
    /// Normalized sum strictly decreasing over the tail half of valid rows.
    pub eventually_decreasing: bool,
    /// Normalized sum strictly increasing over all valid rows.
    pub strictly_increasing: bool,
}

impl ScheduleReport {
    pub fn valid_rows(&self) -> impl Iterator<Item = &ScheduleRow> {
        self.rows.iter().filter(|r| r.valid)
    }
}

const SLOPE_THRESHOLD: f64 = 0.25;

fn row_for(j: usize, level: u64, t: f64, radius: f64) -> Result<ScheduleRow> {
    let surface = compacted_surface(level, if t > 0.0 { t } else { f64::MIN_POSITIVE })?;
    let mut row = ScheduleRow {
        j,
        level,
        t,
        pinched_count: surface.pinched_count,
        genus: surface.genus.clone(),
        volume: surface.volume,
        valid: false,
        bs_ratio: None,
        pl_sum: None,
        pl_norm: None,
        lower: None,
        upper: None,
        note: None,
    };
    if !t.is_normal() {
        row.note = Some(format!("pinch length {t:e} is not a normal double"));
        return Ok(row);
    }
    if t >= 0.5 {
        row.note = Some(format!("pinch length {t} ≥ 1/2: no geodesic floor"));
        return Ok(row);
    }
    let floor = other_geodesic_floor(level, t)?;
    if floor <= radius {
        row.note = Some(format!("geodesic floor {floor:.6} ≤ radius {radius}"));
        return Ok(row);
    }
    row.valid = true;
    let spectrum = PowerSpectrum::new(t, surface.pinched_count, radius)?;
    let sum = spectrum.plancherel_sum();
    row.pl_sum = Some(sum);
    row.pl_norm = Some(sum.value / surface.volume);
    row.bs_ratio = Some(if t > radius {
        0.0
    } else {
        surface.pinched_count as f64 / surface.volume
    });
    if radius >= 1.0 && t < radius.min(1.0) {
        let s = sandwich_bounds(level, t, radius)?;
        row.lower = Some(s.lower / surface.volume);
        row.upper = Some(s.upper / surface.volume);
    }
    Ok(row)
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Evaluates the first `j_max` rows of `schedule` at radius `R` and grades
/// the trends.
pub fn classify_schedule(schedule: &Schedule, radius: f64, j_max: usize) -> Result<ScheduleReport> {
    if j_max < 1 {
        return Err(Error::domain("j_max", "must be at least 1"));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::domain("radius", format!("must be positive and finite, got {radius}")));
    }
    let m = j_max.min(schedule.len());
    let rows: Vec<ScheduleRow> = (0..m)
        .into_par_iter()
        .map(|i| row_for(i + 1, schedule.levels[i], schedule.pinch_lengths[i], radius))
        .collect::<Result<_>>()?;

    let valid: Vec<&ScheduleRow> = rows.iter().filter(|r| r.valid).collect();
    let bs: Vec<f64> = valid.iter().filter_map(|r| r.bs_ratio).collect();
    let bs_vanishing = bs.len() >= 2 && bs.windows(2).all(|w| w[1] < w[0]);

    let norms: Vec<(u64, f64)> = valid
        .iter()
        .filter_map(|r| r.pl_norm.map(|v| (r.level, v)))
        .filter(|&(_, v)| v > 0.0)
        .collect();
    let tail = &norms[norms.len() / 2..];
    let (plancherel_verdict, tail_slope) = if tail.len() >= 3 {
        let pts: Vec<(f64, f64)> = tail
            .iter()
            .map(|&(n, v)| ((n as f64).ln(), v.ln()))
            .collect();
        let slope = least_squares_slope(&pts);
        let verdict = if slope < -SLOPE_THRESHOLD {
            TrendVerdict::Vanishing
        } else if slope > SLOPE_THRESHOLD {
            TrendVerdict::Divergent
        } else {
            TrendVerdict::BoundedAwayFromZero
        };
        (verdict, Some(slope))
    } else {
        (TrendVerdict::Inconclusive, None)
    };
    let eventually_decreasing = tail.len() >= 2 && tail.windows(2).all(|w| w[1].1 < w[0].1);
    let strictly_increasing = norms.len() >= 2 && norms.windows(2).all(|w| w[1].1 > w[0].1);

    Ok(ScheduleReport {
        name: schedule.name.clone(),
        rule: schedule.rule.name(),
        radius,
        rows,
        bs_vanishing,
        plancherel_verdict,
        expected_verdict: schedule.rule.expected_verdict(),
        tail_slope,
        eventually_decreasing,
        strictly_increasing,
    })
}
