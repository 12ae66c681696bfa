// SPDX-License-Identifier: Apache-2.0

use accessplan_core::pricing::{holder_objective, optimize_fee, total_cost, PricingParams};
use proptest::prelude::*;

/// Brute-force argmax over a fine grid, written without the crate's grid.
fn brute_argmax(k: f64, delta: f64, c: f64, step: f64) -> (f64, f64) {
    let n = (1.0 / step).round() as usize;
    (0..n)
        .map(|i| {
            let f = i as f64 * step;
            (f, f + k * delta * delta / (1.0 + k * f) * c)
        })
        .fold((0.0, f64::NEG_INFINITY), |best, x| {
            if x.1 > best.1 {
                x
            } else {
                best
            }
        })
}

proptest! {
    #[test]
    fn baseline_pays_plain_tariff(k in 0.01f64..50.0, c in 0.0f64..2.0, fee in 0.0f64..0.999) {
        prop_assert_eq!(total_cost(&PricingParams { e_a: 1.0, k, c_elec: c, fee }).unwrap(), c);
    }

    #[test]
    fn cost_increasing_in_excess_and_decreasing_in_fee(
        e in 1.001f64..5.0, de in 0.01f64..2.0, k in 0.1f64..10.0, c in 0.01f64..1.0,
        fee in 0.0f64..0.9, dfee in 0.01f64..0.09,
    ) {
        let p = PricingParams { e_a: e, k, c_elec: c, fee };
        let base = total_cost(&p).unwrap();
        let more_excess = total_cost(&PricingParams { e_a: e + de, ..p }).unwrap();
        let higher_fee = total_cost(&PricingParams { fee: fee + dfee, ..p }).unwrap();
        prop_assert!(more_excess > base);
        prop_assert!(higher_fee < base);
    }

    #[test]
    fn operator_surcharge_equals_holder_revenue(
        e in 1.0f64..5.0, k in 0.1f64..10.0, c in 0.0f64..1.0, fee in 0.0f64..0.99,
    ) {
        let p = PricingParams { e_a: e, k, c_elec: c, fee };
        let cost = total_cost(&p).unwrap();
        let surcharge = cost - c;
        let revenue = holder_objective(&p).unwrap() - fee;
        // both sides carry one rounding of a subtraction
        prop_assert!((surcharge - revenue).abs() <= 1e-14 * (cost + 1.0));
    }

    #[test]
    fn quadratic_in_excess(d in 0.0f64..3.0, k in 0.1f64..10.0, c in 0.01f64..1.0) {
        let cost = |delta: f64| total_cost(&PricingParams { e_a: 1.0 + delta, k, c_elec: c, fee: 0.0 }).unwrap();
        let lhs = cost(2.0 * d) - c;
        let rhs = 4.0 * (cost(d) - c);
        prop_assert!((lhs - rhs).abs() <= 1e-14 * cost(2.0 * d));
    }

    #[test]
    fn grid_agrees_with_brute_force(k in 0.1f64..20.0, d in 0.0f64..4.0, c in 0.0f64..2.0) {
        let step = 1e-3;
        let o = optimize_fee(k, d, c, step).unwrap();
        let (bf, bj) = brute_argmax(k, d, c, step);
        prop_assert!((o.fee_star - bf).abs() <= step);
        prop_assert!((o.j_star - bj).abs() <= 1e-12 * bj.abs().max(1.0));
    }
}
