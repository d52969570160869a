use std::time::Instant;

use pinch_core::congruence::{
    is_in_gamma, min_hyperbolic_trace, search_candidates, surface_data, witness_matrix,
};
use pinch_core::sequence::{classify_schedule, TrendVerdict};
use pinch_core::trace::plancherel::plancherel_integral;
use pinch_core::trace::test_function::{bump, TestFunction};
use serde_json::json;

use crate::config::ScheduleConfig;
use crate::error::CliError;
use crate::output::{Cell, Table};

pub const MAX_SURVEY_LEVEL: u64 = 10_000;
/// Systole searches projected to visit more candidates are refused.
pub const MAX_CANDIDATES: u128 = 10_000_000_000;

/// A finished command: its table, the parameters to echo and, if a check
/// did not hold, why.
pub struct Outcome {
    pub table: Table,
    pub config: serde_json::Value,
    pub failure: Option<String>,
}

pub fn survey(n_min: u64, n_max: u64) -> Result<Outcome, CliError> {
    if !(3 <= n_min && n_min <= n_max && n_max <= MAX_SURVEY_LEVEL) {
        return Err(CliError::Usage(format!(
            "survey needs 3 ≤ n-min ≤ n-max ≤ {MAX_SURVEY_LEVEL}, got {n_min}..{n_max}"
        )));
    }
    let mut table = Table::new(vec![
        "N",
        "d",
        "g",
        "b",
        "systole",
        "area",
        "compacted_genus",
        "compacted_volume",
    ]);
    for level in n_min..=n_max {
        let s = surface_data(level)?;
        let compacted_genus = s.compacted_genus();
        table.push(vec![
            Cell::int(level),
            Cell::int(&s.index_d),
            Cell::int(&s.genus),
            Cell::int(&s.cusps),
            Cell::Float(s.systole.value()),
            Cell::Float(s.area),
            Cell::int(compacted_genus),
            Cell::Float(s.area),
        ]);
    }
    Ok(Outcome {
        table,
        config: json!({"n_min": n_min, "n_max": n_max}),
        failure: None,
    })
}

pub fn systole(level: u64, entry_bound: Option<u64>) -> Result<Outcome, CliError> {
    if level < 3 {
        return Err(CliError::Usage(format!("systole needs level ≥ 3, got {level}")));
    }
    let n2 = level
        .checked_mul(level)
        .ok_or_else(|| CliError::Usage(format!("level {level} is too large")))?;
    let bound = entry_bound.unwrap_or(n2.saturating_mul(10));
    if bound < n2 {
        return Err(CliError::Usage(format!(
            "entry bound {bound} < N² = {n2}: the witness would lie outside the box"
        )));
    }
    let candidates = search_candidates(level, bound);
    if candidates > MAX_CANDIDATES {
        return Err(CliError::Refused(format!(
            "search would visit about {candidates:.3e} candidates (limit {MAX_CANDIDATES:e})",
            candidates = candidates as f64,
            MAX_CANDIDATES = MAX_CANDIDATES as f64
        )));
    }
    let witness = witness_matrix(level)?;
    let in_gamma = is_in_gamma(&witness, level)?;
    let started = Instant::now();
    let found = min_hyperbolic_trace(level, bound)?;
    eprintln!("systole search: {:.3} s", started.elapsed().as_secs_f64());
    let expected = n2 - 2;
    let pass = in_gamma && found == Some(expected);
    let [a, b, c, d] = witness.entries();
    let data = surface_data(level)?;
    let mut table = Table::new(vec![
        "N",
        "entry_bound",
        "candidates",
        "witness_a",
        "witness_b",
        "witness_c",
        "witness_d",
        "witness_in_gamma",
        "expected_trace",
        "min_trace",
        "systole",
        "pass",
    ]);
    table.push(vec![
        Cell::int(level),
        Cell::int(bound),
        Cell::int(candidates),
        Cell::int(a),
        Cell::int(b),
        Cell::int(c),
        Cell::int(d),
        Cell::Bool(in_gamma),
        Cell::int(expected),
        found.map_or(Cell::Empty, Cell::int),
        Cell::Float(data.systole.value()),
        Cell::Bool(pass),
    ]);
    let failure = (!pass).then(|| {
        format!("level {level}: minimal |trace| {found:?} in box {bound}, expected {expected}")
    });
    Ok(Outcome {
        table,
        config: json!({"level": level, "entry_bound": bound}),
        failure,
    })
}

fn verdict_cell(v: Option<TrendVerdict>) -> Cell {
    v.map_or(Cell::Empty, |v| Cell::Text(v.to_string()))
}

pub fn schedule(config: &ScheduleConfig, radius: f64, j_max: usize) -> Result<Outcome, CliError> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(CliError::Usage(format!("radius must be positive, got {radius}")));
    }
    if j_max < 1 {
        return Err(CliError::Usage("j-max must be at least 1".into()));
    }
    let schedule = config.schedule()?;
    let report = classify_schedule(&schedule, radius, j_max)?;
    let mut table = Table::new(vec![
        "j", "N", "t", "b_pairs", "genus", "volume", "bs_ratio", "pl_sum", "pl_sum_err", "pl_norm",
        "lower", "upper", "valid",
    ]);
    for r in &report.rows {
        table.push(vec![
            Cell::int(r.j),
            Cell::int(r.level),
            Cell::Float(r.t),
            Cell::int(r.pinched_count),
            Cell::int(&r.genus),
            Cell::Float(r.volume),
            Cell::opt_float(r.bs_ratio),
            Cell::opt_float(r.pl_sum.map(|s| s.value)),
            Cell::opt_float(r.pl_sum.map(|s| s.radius)),
            Cell::opt_float(r.pl_norm),
            Cell::opt_float(r.lower),
            Cell::opt_float(r.upper),
            Cell::Bool(r.valid),
        ]);
    }
    let invalid = report.rows.iter().filter(|r| !r.valid).count();
    table.summary = vec![
        ("rule", Cell::Text(report.rule.into())),
        ("bs_vanishing", Cell::Bool(report.bs_vanishing)),
        ("plancherel_verdict", verdict_cell(Some(report.plancherel_verdict))),
        ("expected_verdict", verdict_cell(report.expected_verdict)),
        ("tail_slope", Cell::opt_float(report.tail_slope)),
        ("eventually_decreasing", Cell::Bool(report.eventually_decreasing)),
        ("strictly_increasing", Cell::Bool(report.strictly_increasing)),
        ("invalid_rows", Cell::int(invalid)),
    ];
    let failure = match report.expected_verdict {
        Some(expected)
            if report.plancherel_verdict != TrendVerdict::Inconclusive
                && report.plancherel_verdict != expected =>
        {
            Some(format!(
                "schedule `{}`: Plancherel trend {} but the {} rule implies {}",
                report.name, report.plancherel_verdict, report.rule, expected
            ))
        }
        _ => None,
    };
    Ok(Outcome {
        table,
        config: json!({"schedule": config, "radius": radius, "j_max": j_max}),
        failure,
    })
}

pub fn trace_check(supports: &[f64], tol: f64) -> Result<Outcome, CliError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Usage(format!("tolerance must be positive, got {tol}")));
    }
    if supports.is_empty() {
        return Err(CliError::Usage("at least one support is required".into()));
    }
    if let Some(bad) = supports.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
        return Err(CliError::Usage(format!("supports must be positive, got {bad}")));
    }
    let mut table = Table::new(vec![
        "S",
        "phi0",
        "plancherel",
        "abs_err",
        "r_max",
        "tail_bound",
        "pass",
        "note",
    ]);
    let mut failed = Vec::new();
    for &s in supports {
        let phi = bump(s, 1.0)?;
        let phi0 = phi.value(0.0);
        match plancherel_integral(&phi) {
            Ok(est) => {
                let err = (est.value - phi0).abs();
                let pass = err <= tol;
                if !pass {
                    failed.push(format!("S = {s}: error {err:e} > {tol:e}"));
                }
                table.push(vec![
                    Cell::Float(s),
                    Cell::Float(phi0),
                    Cell::Float(est.value),
                    Cell::Float(err),
                    Cell::Float(est.certificate.r_max),
                    Cell::Float(est.certificate.bound),
                    Cell::Bool(pass),
                    Cell::Empty,
                ]);
            }
            Err(e) => {
                failed.push(format!("S = {s}: {e}"));
                table.push(vec![
                    Cell::Float(s),
                    Cell::Float(phi0),
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Bool(false),
                    Cell::Text(e.to_string()),
                ]);
            }
        }
    }
    Ok(Outcome {
        table,
        config: json!({"supports": supports, "tol": tol}),
        failure: (!failed.is_empty()).then(|| failed.join("; ")),
    })
}
