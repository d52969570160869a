//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use pinch_core::congruence::{is_in_gamma, min_hyperbolic_trace, surface_data, witness_matrix};
use pinch_core::hyp::{collar_width_at_radius, cylinder_volume, GeodesicLength};
use pinch_core::quad::Adaptive;
use pinch_core::sequence::{
    classify_schedule, compacted_surface, harmonic_sum, power_sum_sandwich, sum::EULER_GAMMA, validity_check,
    PinchRule, PowerSpectrum, Schedule,
};
use pinch_core::trace::geometric::vanishing_series;
use pinch_core::trace::plancherel::plancherel_integral;
use pinch_core::trace::test_function::{bump, TestFunction};
use pinch_core::trace::transform::TransformProfile;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn range_schedule(name: &str, start: u64, end: u64, rule: PinchRule) -> Schedule {
    Schedule::new(name, (start..=end).collect(), rule).expect("valid schedule")
}

fn golden_table() -> Check {
    let started = Instant::now();
    let golden = [(3u64, 24, 0, 4), (5, 120, 0, 12), (7, 336, 3, 24), (11, 1320, 26, 60)];
    for (n, d, g, b) in golden {
        let s = surface_data(n).map_err(|e| e.to_string())?;
        let got = (s.index_d.clone(), s.genus.clone(), s.cusps.clone());
        ensure(got == (BigInt::from(d), BigInt::from(g), BigInt::from(b)), || {
            format!("N={n}: got {got:?}")
        })?;
        let c = compacted_surface(n, 0.1).map_err(|e| e.to_string())?;
        // π·d/6 = 4π(g' − 1) holds exactly in integers: d = 24(g' − 1)
        ensure(BigInt::from(d) == BigInt::from(24) * (&c.genus - 1), || {
            format!("N={n}: compacted genus {} breaks d = 24(g' − 1)", c.genus)
        })?;
        ensure(c.volume == PI * d as f64 / 6.0, || format!("N={n}: volume {}", c.volume))?;
    }
    within(started.elapsed(), Duration::from_secs(1))?;
    Ok(format!("4 levels exact in {:.2?}", started.elapsed()))
}

fn systole_falsifier() -> Check {
    let started = Instant::now();
    for n in 3u64..=7 {
        let bound = 10 * n * n;
        let found = min_hyperbolic_trace(n, bound).map_err(|e| e.to_string())?;
        ensure(found == Some(n * n - 2), || format!("N={n}: min |tr| {found:?}"))?;
        let w = witness_matrix(n).map_err(|e| e.to_string())?;
        ensure(is_in_gamma(&w, n).unwrap_or(false), || format!("N={n}: witness {w} not in Γ(N)"))?;
        ensure(w.trace().unsigned_abs() == n * n - 2, || format!("N={n}: witness trace"))?;
    }
    within(started.elapsed(), Duration::from_secs(300))?;
    Ok(format!("N = 3..7 at 10·N², {:.2?}", started.elapsed()))
}

fn plancherel_identity() -> Check {
    let started = Instant::now();
    let mut worst: f64 = 0.0;
    for s in [0.5, 1.0, 4.0] {
        let phi = bump(s, 1.0).map_err(|e| e.to_string())?;
        let est = plancherel_integral(&phi).map_err(|e| format!("S={s}: {e}"))?;
        let err = (est.value - phi.value(0.0)).abs();
        ensure(err <= 1e-6, || format!("S={s}: error {err:e}"))?;
        worst = worst.max(err);
    }
    within(started.elapsed(), Duration::from_secs(60))?;
    Ok(format!("max error {worst:.2e}, {:.2?}", started.elapsed()))
}

fn reciprocal_regime() -> Check {
    let started = Instant::now();
    let s = range_schedule("reciprocal", 3, 2000, PinchRule::Reciprocal { scale: 1.0 });
    let report = classify_schedule(&s, 1.0, s.len()).map_err(|e| e.to_string())?;
    ensure(report.rows.iter().all(|r| r.valid), || "invalid rows".into())?;
    for r in &report.rows {
        let bs = r.bs_ratio.unwrap();
        let closed = 3.0 / (2.0 * PI * r.level as f64);
        ensure(rel(bs, closed) <= 1e-12, || format!("N={}: bs {bs} vs {closed}", r.level))?;
    }
    ensure(report.eventually_decreasing, || "normalized sum not eventually decreasing".into())?;
    let last = report.rows.last().unwrap().pl_norm.unwrap();
    ensure(last <= 1e-2, || format!("final normalized sum {last}"))?;
    within(started.elapsed(), Duration::from_secs(120))?;
    Ok(format!("final {last:.3e}, {:.2?}", started.elapsed()))
}

fn exponential_regime() -> Check {
    let started = Instant::now();
    let s = range_schedule("exponential", 3, 20, PinchRule::Exponential { scale: 1.0 });
    let report = classify_schedule(&s, 1.0, s.len()).map_err(|e| e.to_string())?;
    let valid: Vec<_> = report.valid_rows().collect();
    ensure(!valid.is_empty(), || "no valid rows".into())?;
    let mut min_norm = f64::INFINITY;
    let mut worst_radius: f64 = 0.0;
    for r in &valid {
        let norm = r.pl_norm.unwrap();
        let sum = r.pl_sum.unwrap();
        ensure(norm >= 0.4, || format!("N={}: normalized {norm}", r.level))?;
        ensure(sum.relative_radius() <= 1e-9, || {
            format!("N={}: relative radius {:e}", r.level, sum.relative_radius())
        })?;
        min_norm = min_norm.min(norm);
        worst_radius = worst_radius.max(sum.relative_radius());
    }
    ensure(report.bs_vanishing, || "bs ratio not decreasing".into())?;
    let (first, last) = (valid[0].bs_ratio.unwrap(), valid.last().unwrap().bs_ratio.unwrap());
    ensure(last < first, || "bs ratio does not shrink".into())?;
    within(started.elapsed(), Duration::from_secs(300))?;
    Ok(format!(
        "{} rows, min normalized {min_norm:.4}, max radius {worst_radius:.1e}, {:.2?}",
        valid.len(),
        started.elapsed()
    ))
}

fn superexponential_regime() -> Check {
    let started = Instant::now();
    let s = range_schedule("superexponential", 3, 10, PinchRule::Superexponential { scale: 1.0 });
    let report = classify_schedule(&s, 1.0, s.len()).map_err(|e| e.to_string())?;
    let norms: Vec<f64> = report.valid_rows().filter_map(|r| r.pl_norm).collect();
    ensure(norms.len() >= 2, || "fewer than two valid rows".into())?;
    ensure(norms.windows(2).all(|w| w[1] > w[0]), || format!("not increasing: {norms:?}"))?;
    Ok(format!(
        "{} rows, {:.3} → {:.3}, {:.2?}",
        norms.len(),
        norms[0],
        norms.last().unwrap(),
        started.elapsed()
    ))
}

/// Forward summation with no compensation, as an independent reference.
fn naive_sum(t: f64, radius: f64) -> Option<f64> {
    let mut total = 0.0;
    let mut k = 1u64;
    while k as f64 * t <= radius {
        if k > 10_000_000 {
            return None;
        }
        total += t / (0.5 * k as f64 * t).sinh();
        k += 1;
    }
    Some(total)
}

fn sandwich_grid() -> Check {
    let started = Instant::now();
    let mut compared = 0;
    let mut beyond_floor = 0;
    let mut worst: f64 = 0.0;
    for n in [5u64, 7, 11] {
        let pairs = compacted_surface(n, 0.1).map_err(|e| e.to_string())?.pinched_count;
        for e in 1..=6 {
            let t = 10f64.powi(-e);
            for radius in [1.0, 2.0, 5.0] {
                let spectrum =
                    PowerSpectrum::new(t, pairs, radius).map_err(|e| e.to_string())?;
                let sum = spectrum.plancherel_sum();
                let s = power_sum_sandwich(pairs, t, radius).map_err(|e| e.to_string())?;
                ensure(s.lower <= sum.value && sum.value <= s.upper, || {
                    format!("N={n} t={t:e} R={radius}: {} ∉ [{}, {}]", sum.value, s.lower, s.upper)
                })?;
                if !validity_check(n, t, radius).map_err(|e| e.to_string())? {
                    beyond_floor += 1;
                }
                if let Some(reference) = naive_sum(t, radius) {
                    let d = rel(sum.value, pairs as f64 * reference);
                    ensure(d <= 1e-9, || format!("N={n} t={t:e} R={radius}: oracle gap {d:e}"))?;
                    worst = worst.max(d);
                    compared += 1;
                }
            }
        }
    }
    Ok(format!(
        "54 points bracketed ({beyond_floor} past the validity floor), {compared} oracle sums \
         agree to {worst:.1e}, {:.2?}",
        started.elapsed()
    ))
}

fn cylinder_quadrature() -> Check {
    let started = Instant::now();
    let mut worst: f64 = 0.0;
    let outer = Adaptive::with_abs_tol(1e-12);
    for l in [0.01, 0.1, 1.0, 2.0] {
        let len = GeodesicLength::new(l).map_err(|e| e.to_string())?;
        for radius in [1f64.asinh(), 1.0, 3.0] {
            let w = collar_width_at_radius(len, radius).map_err(|e| e.to_string())?.value();
            let inner = Adaptive::with_abs_tol(1e-13);
            // ∫_0^{2π} ∫_{−w}^{w} l·cosh ρ dρ dθ
            let area = outer
                .integrate(
                    |_theta| {
                        inner
                            .integrate(|rho| l * rho.cosh(), -w, w)
                            .map(|e| e.value)
                            .unwrap_or(f64::NAN)
                    },
                    0.0,
                    2.0 * PI,
                )
                .map_err(|e| e.to_string())?
                .value;
            let closed = cylinder_volume(len, radius).map_err(|e| e.to_string())?;
            let d = rel(closed, area);
            ensure(d <= 1e-9, || format!("l={l} R={radius}: {closed} vs {area}"))?;
            worst = worst.max(d);
        }
    }
    Ok(format!("12 cases, max relative error {worst:.1e}, {:.2?}", started.elapsed()))
}

fn harmonic_asymptotics() -> Check {
    for n in [10u64, 1_000, 1_000_000] {
        let gap = (harmonic_sum(n) - (n as f64).ln() - EULER_GAMMA).abs();
        ensure(gap <= 0.5 / n as f64, || format!("n={n}: gap {gap:e}"))?;
    }
    Ok("n = 10, 10³, 10⁶".into())
}

fn vanishing_lemma() -> Check {
    let started = Instant::now();
    // g vanishes beyond L = 1.2, so g stays positive on [0, 1].
    let support = 2.0 * (1.2f64.cosh() - 1.0);
    let phi = bump(support, 1.0).map_err(|e| e.to_string())?;
    let profile = TransformProfile::new(phi, 1.0).map_err(|e| e.to_string())?;
    let sup = profile.g_sup();

    let rec = range_schedule("reciprocal", 3, 2000, PinchRule::Reciprocal { scale: 1.0 });
    let rows = vanishing_series(&rec, &profile, rec.len()).map_err(|e| e.to_string())?;
    let values: Vec<f64> = rows.iter().filter_map(|r| r.value.map(|v| v.value)).collect();
    ensure(values.len() == rows.len(), || "invalid reciprocal rows".into())?;
    let last = *values.last().unwrap();
    ensure(last <= 1e-2 * sup, || format!("N=2000: {last:e} > 1e-2·{sup:e}"))?;
    let tail = &values[values.len() / 2..];
    ensure(tail.windows(2).all(|w| w[1] < w[0]), || "reciprocal series not decreasing".into())?;
    ensure(last < 0.1 * values[0], || format!("series {:.3e} → {last:.3e}", values[0]))?;

    // Lower bound along the exponential schedule at R = 1.
    let m = profile.g(1.0).min(profile.g_min_on(1.0, 1001));
    ensure(m > 0.0, || format!("min g on [0, 1] = {m}"))?;
    let exp = range_schedule("exponential", 3, 20, PinchRule::Exponential { scale: 1.0 });
    let rows = vanishing_series(&exp, &profile, exp.len()).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for r in rows.iter().filter(|r| r.valid) {
        let v = r.value.unwrap();
        let surface = compacted_surface(r.level, r.t).map_err(|e| e.to_string())?;
        let lower = power_sum_sandwich(surface.pinched_count, r.t, 1.0)
            .map_err(|e| e.to_string())?
            .lower
            / surface.volume;
        ensure(v.value - v.radius >= 0.5 * m * lower, || {
            format!("N={}: {} − {} < {}", r.level, v.value, v.radius, 0.5 * m * lower)
        })?;
        checked += 1;
    }
    ensure(checked > 0, || "no valid exponential rows".into())?;
    Ok(format!(
        "N=2000 value {:.2e}·sup g, {checked} exponential rows above bound, {:.2?}",
        last / sup,
        started.elapsed()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("congruence golden table", golden_table),
        ("systole falsifier", systole_falsifier),
        ("Plancherel identity", plancherel_identity),
        ("sub-exponential regime", reciprocal_regime),
        ("exponential regime", exponential_regime),
        ("super-exponential regime", superexponential_regime),
        ("sandwich property", sandwich_grid),
        ("cylinder volume quadrature", cylinder_quadrature),
        ("harmonic asymptotics", harmonic_asymptotics),
        ("vanishing lemma series", vanishing_lemma),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(reason) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {reason}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
