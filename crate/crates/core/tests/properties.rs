use indiff_core::factor::{expect_over_alpha, FactorNode};
use indiff_core::measure::{martingale_residual, solve_beta};
use indiff_core::pricer::{IndifferenceProblem, PricingSettings, Side};
use indiff_core::levy::validate_triplet;
use indiff_core::{ConditionMode, HaraUtility, LevyMeasure, LevyTriplet, SolverSettings};
use proptest::prelude::*;

fn atoms() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-0.9f64..1.0, 0.01f64..3.0), 0..5)
}

fn utility() -> impl Strategy<Value = HaraUtility> {
    prop_oneof![
        Just(HaraUtility::Log),
        (-3.0f64..0.9).prop_filter("p != 0", |p| p.abs() > 0.05).prop_map(|p| HaraUtility::Power { p }),
        (0.1f64..5.0).prop_map(|gamma| HaraUtility::Exp { gamma }),
    ]
}

fn factor_nodes() -> impl Strategy<Value = Vec<FactorNode>> {
    prop::collection::vec((-2.0f64..2.0, 0.05f64..1.0), 2..8).prop_map(|raw| {
        let total: f64 = raw.iter().map(|r| r.1).sum();
        raw.into_iter().map(|(u, w)| FactorNode { u, weight: w / total }).collect()
    })
}

proptest! {
    #[test]
    fn nu_integral_is_linear_and_positive(a in atoms(), c1 in -3.0f64..3.0, c2 in -3.0f64..3.0) {
        let nu = LevyMeasure::atoms(&a);
        let f = |x: f64| x * x;
        let g = |x: f64| (2.0 * x).exp();
        let lhs = nu.integrate(|x| c1 * f(x) + c2 * g(x)).unwrap();
        let rhs = c1 * nu.integrate(f).unwrap() + c2 * nu.integrate(g).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        prop_assert!(nu.integrate(f).unwrap() >= 0.0);
    }

    #[test]
    fn corrected_residual_increases_in_beta(
        b in -0.5f64..0.5,
        s2 in 0.0f64..0.3,
        a in atoms(),
        u in utility(),
        t1 in 0.0f64..1.0,
        t2 in 0.0f64..1.0,
    ) {
        let t = validate_triplet(LevyTriplet::new(b, s2, LevyMeasure::atoms(&a))).unwrap();
        let (lo, hi) = indiff_core::measure::admissible_interval(t.measure(), &u);
        let clip = |v: f64| v.clamp(-20.0, 20.0);
        let (lo, hi) = (clip(lo) * 0.999, clip(hi) * 0.999);
        let (x1, x2) = (lo + t1.min(t2) * (hi - lo), lo + t1.max(t2) * (hi - lo));
        let r1 = martingale_residual(&t, &u, x1, ConditionMode::Corrected).unwrap();
        let r2 = martingale_residual(&t, &u, x2, ConditionMode::Corrected).unwrap();
        prop_assert!(r2 >= r1 - 1e-12 * (1.0 + r1.abs()));
    }

    #[test]
    fn pure_diffusion_beta_is_minus_b_over_sigma2(b in -1.0f64..1.0, s2 in 0.01f64..1.0, u in utility()) {
        let t = validate_triplet(LevyTriplet::diffusion(b, s2)).unwrap();
        let s = solve_beta(&t, &u, ConditionMode::Corrected, &SolverSettings::default()).unwrap();
        prop_assert!((s.beta + b / s2).abs() <= 1e-10 * (1.0 + (b / s2).abs()));
    }

    #[test]
    fn expectation_is_linear_and_monotone(nodes in factor_nodes(), c in -2.0f64..2.0, d in 0.0f64..1.0) {
        let f = |u: f64| u.sin();
        let g = |u: f64| u * u;
        let lhs = expect_over_alpha(&nodes, |u| c * f(u) + g(u)).unwrap();
        let rhs = c * expect_over_alpha(&nodes, f).unwrap() + expect_over_alpha(&nodes, g).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12);
        let bigger = expect_over_alpha(&nodes, |u| g(u) + d).unwrap();
        prop_assert!(bigger >= expect_over_alpha(&nodes, g).unwrap() - 1e-15);
    }

    #[test]
    fn prices_are_monotone_in_the_claim(
        nodes in factor_nodes(),
        u in utility(),
        fractions in prop::collection::vec(0.05f64..0.6, 8),
        bump in 0.0f64..0.2,
        infos in prop::collection::vec(0.0f64..0.5, 8),
    ) {
        let x = 1.0;
        let n = nodes.len();
        let info: Vec<f64> = match u {
            HaraUtility::Power { .. } => infos[..n].iter().map(|h| (-h).exp()).collect(),
            _ => infos[..n].to_vec(),
        };
        let p = IndifferenceProblem::new(u, x, &nodes, &info).unwrap();
        let g1: Vec<f64> = fractions[..n].iter().map(|f| f * x).collect();
        let g2: Vec<f64> = g1.iter().enumerate().map(|(i, g)| if i == 0 { g + bump } else { *g }).collect();
        let s = PricingSettings::default();
        for side in [Side::Buyer, Side::Seller] {
            let a = p.price(&g1, side, &s).unwrap().price;
            let b = p.price(&g2, side, &s).unwrap().price;
            prop_assert!(b >= a - 1e-9, "{:?} {} {}", side, a, b);
            let lo = g1.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = g1.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(a >= lo - 1e-9 && a <= hi + 1e-9);
        }
    }

    #[test]
    fn constant_claim_prices_at_its_value(nodes in factor_nodes(), u in utility(), c in 0.05f64..0.9) {
        let info = vec![1.0; nodes.len()];
        let p = IndifferenceProblem::new(u, 1.0, &nodes, &info).unwrap();
        let g = vec![c; nodes.len()];
        for side in [Side::Buyer, Side::Seller] {
            let price = p.price(&g, side, &PricingSettings::default()).unwrap().price;
            prop_assert!((price - c).abs() < 1e-8);
        }
    }

    #[test]
    fn exp_price_ignores_common_information_shift(
        nodes in factor_nodes(),
        kl in prop::collection::vec(0.0f64..2.0, 8),
        g in prop::collection::vec(0.0f64..1.0, 8),
        shift in -5.0f64..5.0,
        gamma in 0.1f64..4.0,
    ) {
        let n = nodes.len();
        let u = HaraUtility::Exp { gamma };
        let shifted: Vec<f64> = kl[..n].iter().map(|k| k + shift).collect();
        let a = IndifferenceProblem::new(u, 1.0, &nodes, &kl[..n]).unwrap();
        let b = IndifferenceProblem::new(u, 1.0, &nodes, &shifted).unwrap();
        let s = PricingSettings::default();
        for side in [Side::Buyer, Side::Seller] {
            let pa = a.price(&g[..n], side, &s).unwrap().price;
            let pb = b.price(&g[..n], side, &s).unwrap().price;
            prop_assert!((pa - pb).abs() < 1e-12);
        }
    }
}
