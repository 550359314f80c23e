use proptest::prelude::*;
use regret_core::allais::{allais_menu, classify, superadditivity_gap, AllaisPattern};
use regret_core::savage::{break_egg_margin, omelet_acts, prefer_act, regret_of_not, OmeletParams};
use regret_core::{RegretKernel, Utility, UtilityCurve};

fn kernel() -> impl Strategy<Value = RegretKernel> {
    prop_oneof![
        (0.05f64..20.0).prop_map(|b| RegretKernel::sinh(b).unwrap()),
        (1.1f64..10.0, 0.1f64..2.0).prop_map(|(a, b)| RegretKernel::exponential(a, b).unwrap()),
        (0.1f64..5.0).prop_map(|a| RegretKernel::linear(a).unwrap()),
        Just(RegretKernel::Tanh),
    ]
}

fn params() -> impl Strategy<Value = OmeletParams> {
    (
        0.0f64..=1.0,
        5.5f64..8.0,
        1.0f64..5.0,
        -8.0f64..-0.5,
        -4.0f64..-1e-9,
        -1.0f64..0.0,
    )
        .prop_map(|(p, u6, u5, u_minus5, z, w)| OmeletParams {
            p,
            u6,
            u5,
            u_minus5,
            z,
            w,
        })
}

proptest! {
    #[test]
    fn paradox_requires_superadditivity_and_concavity(k in kernel(), gamma in 1e-4f64..2.0, scale in 0.01f64..100.0) {
        let menu = allais_menu(scale, 0.0).unwrap();
        let u = UtilityCurve::log(gamma).unwrap();
        let c = classify(&menu, &k, &u).unwrap();
        if c.pattern == Some(AllaisPattern::IAndIV) {
            let (u0, u1, u5) = (
                u.relative_utile(menu.o0).unwrap(),
                u.relative_utile(menu.o1).unwrap(),
                u.relative_utile(menu.o5).unwrap(),
            );
            prop_assert!(superadditivity_gap(&k, u1 - u0, u5 - u1) > 0.0);
            prop_assert!(u5 - u1 < u1 - u0);
        }
    }

    #[test]
    fn linear_utility_never_gives_the_paradox(k in kernel(), scale in 0.01f64..2.0) {
        let menu = allais_menu(scale, 0.0).unwrap();
        let c = classify(&menu, &k, &UtilityCurve::linear()).unwrap();
        prop_assert_ne!(c.pattern, Some(AllaisPattern::IAndIV));
    }

    #[test]
    fn scale_trades_against_threshold(beta in 0.05f64..20.0, gamma in 1e-4f64..1.0, s in 1e-3f64..1e3) {
        let k = RegretKernel::sinh(beta).unwrap();
        let a = classify(&allais_menu(s, 0.0).unwrap(), &k, &UtilityCurve::log(gamma).unwrap()).unwrap();
        let b = classify(&allais_menu(1.0, 0.0).unwrap(), &k, &UtilityCurve::log(gamma / s).unwrap()).unwrap();
        let close = |x: f64, y: f64, scale: f64| (x - y).abs() <= 1e-11 * scale;
        prop_assert!(close(a.first.value, b.first.value, a.first.scale));
        prop_assert!(close(a.second.value, b.second.value, a.second.scale));
        if !a.boundary && !b.boundary {
            let margin = |v: f64, sc: f64| v.abs() > 1e-9 * sc;
            if margin(a.first.value, a.first.scale) && margin(a.second.value, a.second.scale) {
                prop_assert_eq!(a.pattern, b.pattern);
            }
        }
    }

    #[test]
    fn engine_matches_the_closed_form(params in params()) {
        let f = RegretKernel::linear(2.0).unwrap();
        let acts = omelet_acts(&params).unwrap();
        let v = prefer_act(&acts.a1, &acts.a2, &f, &params.states()).unwrap();
        let margin = break_egg_margin(&params);
        prop_assert!((v.regret_difference + 2.0 * margin).abs() <= 1e-12 * v.scale);
    }

    #[test]
    fn discarding_hides_the_unused_egg(params in params(), dz in -1.0f64..0.0) {
        let f = RegretKernel::linear(2.0).unwrap();
        let moved = OmeletParams { z: params.z + dz, ..params };
        let a = omelet_acts(&params).unwrap();
        let b = omelet_acts(&moved).unwrap();
        for cf in [&a.a1, &a.a3] {
            let r = regret_of_not(cf, &a.a2, &f, &params.states()).unwrap();
            let cf_b = if std::ptr::eq(cf, &a.a1) { &b.a1 } else { &b.a3 };
            prop_assert_eq!(r, regret_of_not(cf_b, &b.a2, &f, &moved.states()).unwrap());
        }
    }

    #[test]
    fn breaking_feels_the_unused_egg(params in params()) {
        prop_assume!(params.p < 1.0 && params.z <= -1e-5);
        let f = RegretKernel::linear(2.0).unwrap();
        let delta = 1e-6;
        let moved = OmeletParams { z: params.z + delta, ..params };
        let d = |q: &OmeletParams| {
            let acts = omelet_acts(q).unwrap();
            prefer_act(&acts.a1, &acts.a2, &f, &q.states()).unwrap().regret_difference
        };
        let change = d(&moved) - d(&params);
        prop_assert!(change != 0.0);
        prop_assert!((change - (1.0 - params.p) * delta).abs() <= 1e-9);
    }
}
