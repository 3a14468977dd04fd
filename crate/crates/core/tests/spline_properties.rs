use std::f64::consts::{PI, TAU};

use trigspline::{
    FactorSpec64 as F, FilterVectors, Indicator, SampleSet64, SignVariant, Spline64, SplineConfig64,
};

const PAIRS: [(Indicator, Indicator); 4] = [
    (Indicator::Zero, Indicator::Zero),
    (Indicator::One, Indicator::Zero),
    (Indicator::Zero, Indicator::One),
    (Indicator::One, Indicator::One),
];

fn sigma0(n: usize, r: u32, i1: Indicator, i2: Indicator) -> Spline64 {
    Spline64::new(SplineConfig64::simple(n, r, i1, i2, F::constant_power(1.0, r))).unwrap()
}

fn uniform(count: usize, seed: u64) -> Vec<f64> {
    // splitmix64, enough for spreading sample points
    let mut s = seed;
    (0..count)
        .map(|_| {
            s = s.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = s;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            z ^= z >> 31;
            TAU * (z >> 11) as f64 / (1u64 << 53) as f64
        })
        .collect()
}

#[test]
fn cardinality_sigma0() {
    for (i1, i2) in PAIRS {
        for r in 1..=3 {
            for n in [3, 5, 9] {
                let s = sigma0(n, r, i1, i2);
                let g = s.config().interpolation_grid();
                for k in 1..=n {
                    for i in 1..=n {
                        let v = s.fundamental_value(k, g.node(i)).unwrap();
                        let want = if i == k { 1.0 } else { 0.0 };
                        assert!((v.value - want).abs() <= 1e-8, "N={n} r={r} {i1:?}{i2:?} k={k} i={i}: {}", v.value);
                        assert!(!v.truncation_incomplete);
                    }
                }
            }
        }
    }
}

#[test]
fn partition_of_unity() {
    let ts = uniform(100, 7);
    for (i1, i2) in PAIRS {
        for r in 1..=3 {
            for n in [3, 5, 9] {
                let s = sigma0(n, r, i1, i2);
                for &t in &ts {
                    let sum: f64 = (1..=n).map(|k| s.fundamental_value(k, t).unwrap().value).sum();
                    assert!((sum - 1.0).abs() <= 1e-8, "N={n} r={r} {i1:?}{i2:?} t={t}: {sum}");
                }
            }
        }
    }
}

#[test]
fn global_scale_invariance() {
    let factors = [
        F::constant_power(1.0, 1),
        F::sinc_power(PI / 9.0, 1),
        F::bump_poly(0.5, 1),
        F::transformed(trigspline::Transform::Arctan, trigspline::BaseFamily::ConstantPower, 1.0, 1),
    ];
    let ts = uniform(40, 11);
    for f in factors {
        for (i1, i2) in PAIRS {
            let base = Spline64::new(SplineConfig64::simple(9, 1, i1, i2, f.clone())).unwrap();
            for scale in [1e-3, 1e3] {
                let s = Spline64::new(SplineConfig64::simple(9, 1, i1, i2, f.clone().scaled(scale))).unwrap();
                for &t in &ts {
                    let a = base.fundamental_value(3, t).unwrap().value;
                    let b = s.fundamental_value(3, t).unwrap().value;
                    assert!((a - b).abs() <= 1e-8, "{} s={scale}: {a} vs {b}", f.family());
                }
            }
        }
    }
}

#[test]
fn translation_covariance() {
    for (i1, i2) in PAIRS {
        let s = sigma0(7, 2, i1, i2);
        for &t in &uniform(20, 3) {
            for k in 2..=7 {
                let a = s.fundamental_value(k, t).unwrap().value;
                let b = s.fundamental_value(1, t - TAU * (k - 1) as f64 / 7.0).unwrap().value;
                assert!((a - b).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn collapsed_matches_general_formula() {
    for (i1, i2) in PAIRS {
        for r in 1..=2 {
            let s = Spline64::new(SplineConfig64::simple(9, r, i1, i2, F::sinc_power(0.4, r))).unwrap();
            for &t in &uniform(20, 5) {
                let a = s.fundamental_value(4, t).unwrap().value;
                let b = s.fundamental_value_general(4, t).unwrap().value;
                assert!((a - b).abs() < 1e-12, "{a} vs {b}");
            }
        }
    }
}

#[test]
fn polynomial_mode_is_trigonometric_interpolation() {
    let n = 9;
    let cfg = SplineConfig64::simple(n, 1, Indicator::Zero, Indicator::Zero, F::constant_power(1.0, 1))
        .with_filters(FilterVectors::polynomial());
    let s = Spline64::new(cfg).unwrap();
    assert!((s.fundamental_value(1, 0.0).unwrap().value - 1.0).abs() < 1e-14);
    for &t in &uniform(10, 2) {
        let d = (1.0 + 2.0 * (1..=4).map(|j| (j as f64 * t).cos()).sum::<f64>()) / n as f64;
        assert!((s.fundamental_value(1, t).unwrap().value - d).abs() < 1e-13);
    }
}

#[test]
fn general_filters_stay_cardinal() {
    let filters = FilterVectors::new([1.0, 0.5, 0.8], [0.7, 0.9, 0.3]);
    for (i1, i2) in PAIRS {
        let cfg = SplineConfig64::simple(5, 2, i1, i2, F::constant_power(1.0, 2)).with_filters(filters);
        let s = Spline64::new(cfg).unwrap();
        let g = s.config().interpolation_grid();
        for k in 1..=5 {
            for i in 1..=5 {
                let v = s.fundamental_value(k, g.node(i)).unwrap().value;
                let want = if i == k { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-10, "{i1:?}{i2:?} k={k} i={i}: {v}");
            }
        }
    }
}

#[test]
fn sign_changing_sinc_equals_constant_sign_sigma0() {
    let n = 9;
    for r in 1..=2 {
        for (i1, i2) in PAIRS {
            let a = sigma0(n, r, i1, i2);
            let cfg = SplineConfig64::simple(n, r, i1, i2, F::sinc_power(PI / n as f64, r))
                .with_sign_variant(SignVariant::SignChanging);
            let b = Spline64::new(cfg).unwrap();
            let worst = (0..512)
                .map(|i| {
                    let t = TAU * i as f64 / 512.0;
                    (a.fundamental_value(5, t).unwrap().value - b.fundamental_value(5, t).unwrap().value).abs()
                })
                .fold(0.0, f64::max);
            assert!(worst <= 1e-6, "r={r} {i1:?}{i2:?}: {worst:e}");
        }
    }
}

#[test]
fn derivatives_match_finite_differences() {
    let h = 1e-5;
    for (i1, i2) in PAIRS {
        let s = sigma0(7, 3, i1, i2);
        for &t in &uniform(10, 17) {
            for q in 1..=2 {
                let d = s.fundamental_derivative(2, t, q).unwrap().value;
                let f = |x: f64| s.fundamental_derivative(2, x, q - 1).unwrap().value;
                let fd = (f(t + h) - f(t - h)) / (2.0 * h);
                assert!((d - fd).abs() < 1e-6 * (1.0 + d.abs()), "q={q} t={t}: {d} vs {fd}");
            }
        }
    }
}

#[test]
fn interpolant_reproduces_samples_and_constants() {
    for (i1, i2) in PAIRS {
        let cfg = SplineConfig64::simple(9, 2, i1, i2, F::constant_power(1.0, 2));
        let s = Spline64::new(cfg.clone()).unwrap();
        let samples = SampleSet64::from_fn(&cfg, |t| (2.0 * t).sin() + 0.5);
        let g = cfg.interpolation_grid();
        for k in 1..=9 {
            let v = s.interpolant_value(&samples, g.node(k)).unwrap().value;
            assert!((v - samples.values[k - 1]).abs() < 1e-10);
        }
        let ones = SampleSet64::new(vec![2.5; 9], 9).unwrap();
        for &t in &uniform(5, 1) {
            assert!((s.interpolant_value(&ones, t).unwrap().value - 2.5).abs() < 1e-10);
        }
    }
}

#[test]
fn values_are_periodic() {
    let s = sigma0(5, 1, Indicator::One, Indicator::Zero);
    for &t in &uniform(10, 4) {
        let a = s.fundamental_value(2, t).unwrap().value;
        let b = s.fundamental_value(2, t + TAU).unwrap().value;
        let c = s.fundamental_value(2, t - 3.0 * TAU).unwrap().value;
        assert!((a - b).abs() < 1e-12 && (a - c).abs() < 1e-12);
    }
}
