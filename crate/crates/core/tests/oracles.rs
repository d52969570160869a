//! Values frozen from 40-digit evaluations with mpmath.

use pinch_core::congruence::min_hyperbolic_trace;
use pinch_core::hyp::{
    collar_width, crossing_length_bound, distortion_bound, length_from_trace, thin_part_upper_bound,
    GeodesicLength,
};
use pinch_core::sequence::{
    other_geodesic_floor, plancherel_normalized, sum, PowerSpectrum,
};
use pinch_core::trace::test_function::bump;
use pinch_core::trace::transform::g_transform_with;
use pinch_core::quad::Adaptive;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// (t, R, term count, Σ_{k ≤ n} t/sinh(kt/2)) with t the double nearest the label.
const POWER_SUMS: [(f64, f64, u64, f64); 9] = [
    (1e-1, 1.0, 10, 5.812_824_559_431_346_145),
    (1e-1, 2.0, 20, 7.030_466_493_008_835_332_3),
    (1e-1, 5.0, 50, 8.211_373_632_757_453_985_2),
    (1e-2, 1.0, 100, 10.333_280_761_968_094_157),
    (1e-2, 2.0, 200, 11.597_737_387_948_265_986),
    (1e-2, 5.0, 500, 12.809_106_402_718_595_834),
    (1e-3, 1.0, 1000, 14.929_831_733_803_417_426),
    (1e-3, 2.0, 2000, 16.199_082_363_651_513_125),
    (1e-3, 5.0, 5000, 17.413_532_815_737_062_284),
];

#[test]
fn power_sums_match_high_precision() {
    for (t, r, n, want) in POWER_SUMS {
        let s = PowerSpectrum::new(t, 1, r).unwrap();
        assert_eq!(s.count.exact, Some(n));
        let got = s.plancherel_sum();
        assert!(rel(got.value, want) < 1e-14, "t={t} R={r}");
        assert!(got.contains(want));
    }
}

#[test]
fn long_sums_match_euler_maclaurin_oracle() {
    // t = e^{−N}, R = 1
    for (level, n, want) in [
        (12.0f64, 162_754u64, 25.113_358_388_439_504_561),
        (20.0, 485_165_195, 41.113_361_824_905_074_281),
    ] {
        let t = (-level).exp();
        let s = PowerSpectrum::new(t, 1, 1.0).unwrap();
        assert_eq!(s.count.exact, Some(n));
        let got = s.plancherel_sum();
        assert!(rel(got.value, want) < 1e-12, "N={level}: {got:?}");
        assert!(got.contains(want) || (got.value - want).abs() < 1e-13 * want);
        let forced = s.plancherel_sum_with(sum::SumPlan { direct_limit: 0, head: 10 });
        assert!((forced.value - want).abs() <= forced.radius + 1e-13 * want);
    }
}

#[test]
fn hyperbolic_closed_forms() {
    assert!(rel(length_from_trace(7.0).unwrap().value(), 3.849_694_600_476_827_6) < 1e-15);
    assert!(rel(length_from_trace(14.0).unwrap().value(), 5.267_831_587_699_266_8) < 1e-15);
    let a1 = 0.881_373_587_019_543_025_23;
    let self_dual = GeodesicLength::new(1.762_747_174_039_086_050_5).unwrap();
    assert!(rel(collar_width(self_dual).value(), a1) < 1e-15);
    assert!(rel(crossing_length_bound(self_dual).value(), self_dual.value()) < 1e-15);
    let cross = crossing_length_bound(GeodesicLength::new(0.1).unwrap()).value();
    assert!(rel(cross, 7.378_175_514_141_326_8) < 1e-15);
    assert!(rel(thin_part_upper_bound(12, 1.0).unwrap(), 354.432_329_898_366_98) < 1e-15);
    assert!(rel(thin_part_upper_bound(1, 1f64.asinh()).unwrap(), 8.0 * std::f64::consts::PI) < 1e-15);
    assert_eq!(thin_part_upper_bound(0, 2.0).unwrap(), 0.0);
    assert!(rel(distortion_bound(0.4).unwrap(), 1.2) < 1e-15);
    assert!(distortion_bound(0.5).is_err());
}

#[test]
fn geodesic_floor_branches() {
    // (N, t, crossing branch, simple branch)
    for (level, t, crossing, simple) in [
        (10u64, 0.01, 11.982_933_260_876_554_262, 4.584_290_302_834_501_063f64),
        (3, 0.4, 4.611_821_340_704_223_507_5, 1.604_039_416_865_344_825),
    ] {
        let c = crossing_length_bound(GeodesicLength::new(t).unwrap()).value();
        assert!(rel(c, crossing) < 1e-14);
        assert!(rel(other_geodesic_floor(level, t).unwrap(), simple.min(crossing)) < 1e-14);
    }
}

#[test]
fn normalized_example() {
    let v = plancherel_normalized(5, 0.2, 1.0).unwrap();
    assert!(rel(v, 0.431_391_757_361_180_953_82) < 1e-14);
}

#[test]
fn systole_search_examples() {
    assert_eq!(min_hyperbolic_trace(3, 90).unwrap(), Some(7));
    assert_eq!(min_hyperbolic_trace(5, 250).unwrap(), Some(23));
}

#[test]
fn g_at_zero_against_tight_quadrature() {
    // g(0) = 2∫_0^{√S} φ(s²) ds
    for s in [0.5, 1.0, 4.0] {
        let phi = bump(s, 1.0).unwrap();
        let tight = Adaptive::with_abs_tol(1e-13)
            .integrate(|x| (-1.0 / (1.0 - (x * x / s).powi(2))).exp(), 0.0, s.sqrt())
            .unwrap()
            .value
            * 2.0;
        let g0 = g_transform_with(&phi, 0.0, Adaptive::with_abs_tol(1e-12)).unwrap();
        assert!((g0 - tight).abs() < 1e-11, "S={s}");
    }
}
