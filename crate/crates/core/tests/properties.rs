use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use trigspline::{
    BaseFamily, Error, FactorSpec64 as F, Indicator, SignVariant, Spline64, SplineConfig64, Transform,
};

fn indicator() -> impl Strategy<Value = Indicator> {
    prop_oneof![Just(Indicator::Zero), Just(Indicator::One)]
}

fn odd_n() -> impl Strategy<Value = usize> {
    (1usize..=6).prop_map(|h| 2 * h + 1)
}

fn transform() -> impl Strategy<Value = Transform<f64>> {
    prop_oneof![
        Just(Transform::Sin),
        Just(Transform::Arcsin),
        Just(Transform::Tan),
        Just(Transform::Arctan),
        (1.5f64..20.0).prop_map(|a| Transform::Log { a }),
        (0.2f64..5.0).prop_map(|a| Transform::Exp { a }),
        (2u32..6).prop_map(|m| Transform::Root { m }),
    ]
}

/// A factor of decay order `1 + r`.
fn factor(r: u32) -> impl Strategy<Value = F> {
    prop_oneof![
        (0.2f64..3.0).prop_map(move |a| F::constant_power(a, r)),
        (0.3f64..1.5).prop_map(move |a| F::sinc_power(a, r)),
        (transform(), 0.1f64..0.9).prop_map(move |(t, a)| F::transformed(t, BaseFamily::ConstantPower, a, r)),
        // narrower bumps vanish at the aliasing points and leave zero denominators
        (1.1f64..2.5).prop_map(move |a| F::bump_poly(a, r.min(4))),
    ]
}

/// `None` when the factor makes a channel denominator vanish, which is a
/// legitimate outcome for sign-changing factors.
fn build(cfg: &SplineConfig64) -> Option<Spline64> {
    let s = Spline64::new(cfg.clone()).unwrap();
    match s.fundamental_value(1, 0.0) {
        Ok(_) => Some(s),
        Err(Error::DenominatorDegenerate { .. }) => None,
        Err(e) => panic!("{e}"),
    }
}

fn config() -> impl Strategy<Value = SplineConfig64> {
    (odd_n(), 1u32..=3, indicator(), indicator()).prop_flat_map(|(n, r, i1, i2)| {
        factor(r).prop_map(move |f| SplineConfig64::simple(n, r, i1, i2, f))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cardinal_at_interpolation_nodes(cfg in config(), k_seed in 0usize..64) {
        let s = build(&cfg);
        prop_assume!(s.is_some());
        let s = s.unwrap();
        let k = 1 + k_seed % cfg.n;
        let g = cfg.interpolation_grid();
        for i in 1..=cfg.n {
            let v = s.fundamental_value(k, g.node(i)).unwrap().value;
            let want = if i == k { 1.0 } else { 0.0 };
            prop_assert!((v - want).abs() < 1e-8, "k={} i={} v={}", k, i, v);
        }
    }

    #[test]
    fn partition_of_unity(cfg in config(), t in 0.0f64..TAU) {
        let s = build(&cfg);
        prop_assume!(s.is_some());
        let s = s.unwrap();
        let sum: f64 = (1..=cfg.n).map(|k| s.fundamental_value(k, t).unwrap().value).sum();
        prop_assert!((sum - 1.0).abs() < 1e-8, "{}", sum);
    }

    #[test]
    fn global_scale_cancels(cfg in config(), t in 0.0f64..TAU, e in -3.0f64..3.0) {
        let scaled = cfg.clone().with_factor(cfg.factor.clone().scaled(10f64.powf(e)));
        let s = build(&cfg);
        prop_assume!(s.is_some());
        let a = s.unwrap().fundamental_value(1, t).unwrap().value;
        let b = Spline64::new(scaled).unwrap().fundamental_value(1, t).unwrap().value;
        prop_assert!((a - b).abs() < 1e-8);
    }

    #[test]
    fn rotation_by_one_node(cfg in config(), t in 0.0f64..TAU) {
        let s = build(&cfg);
        prop_assume!(s.is_some());
        let s = s.unwrap();
        let step = TAU / cfg.n as f64;
        for k in 1..cfg.n {
            let a = s.fundamental_value(k + 1, t + step).unwrap().value;
            let b = s.fundamental_value(k, t).unwrap().value;
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn reported_bound_is_within_epsilon(cfg in config(), t in 0.0f64..TAU) {
        let s = build(&cfg);
        prop_assume!(s.is_some());
        let v = s.unwrap().fundamental_value(1, t).unwrap();
        prop_assert!(!v.truncation_incomplete);
        prop_assert!(v.tail_bound <= cfg.truncation.epsilon);
    }

    #[test]
    fn sign_changing_sinc_at_pi_over_n_matches_sigma0(n in odd_n(), r in 1u32..=2, i1 in indicator(), i2 in indicator(), t in 0.0f64..TAU) {
        let a = Spline64::new(SplineConfig64::simple(n, r, i1, i2, F::constant_power(1.0, r))).unwrap();
        let b = Spline64::new(
            SplineConfig64::simple(n, r, i1, i2, F::sinc_power(PI / n as f64, r)).with_sign_variant(SignVariant::SignChanging),
        ).unwrap();
        let (x, y) = (a.fundamental_value(1, t).unwrap().value, b.fundamental_value(1, t).unwrap().value);
        prop_assert!((x - y).abs() < 1e-8, "{} vs {}", x, y);
    }

    #[test]
    fn envelope_bounds_values(r in 1u32..=3, f in (1u32..=3).prop_flat_map(factor), from in 1u64..500) {
        let _ = r;
        let e = f.tail_envelope(from);
        for j in from..from + 200 {
            prop_assert!(f.value(j).unwrap().abs() <= e * (1.0 + 1e-12));
        }
    }

    #[test]
    fn factor_json_round_trip(f in (1u32..=3).prop_flat_map(factor), extra in 0.1f64..2.0) {
        let specs = [
            f.clone(),
            f.clone().scaled(extra),
            F::product(f.clone(), F::alternating_power(extra, 1)),
            F::composite(vec![extra, 0.5, 0.25], f.clone()),
        ];
        for spec in specs {
            let text = serde_json::to_string(&spec).unwrap();
            let back: F = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(&back, &spec);
            for j in [1u64, 2, 7, 40] {
                prop_assert_eq!(back.value(j).unwrap(), spec.value(j).unwrap());
            }
        }
    }
}
