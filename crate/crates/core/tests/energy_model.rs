// SPDX-License-Identifier: Apache-2.0

mod common;

use accessplan_core::catalog::Codec;
use accessplan_core::energy::{
    builtin_coefficients, burst_energy_per_gb, derive_coefficients, energy_matrix, energy_per_gb,
    energy_per_gb_full, per_video_second, power_per_home, EnergyValue, PowerParams,
};
use accessplan_core::Model;
use common::EnergyRef;
use proptest::prelude::*;

fn matrix() -> accessplan_core::energy::EnergyMatrix {
    let m = Model::builtin();
    energy_matrix(
        &m.technologies,
        &m.coefficients,
        &m.scenarios,
        &m.encodings,
        &m.split_candidates,
    )
    .unwrap()
}

#[test]
fn exact_coefficient_columns_within_tenth_of_a_percent() {
    let mx = matrix();
    for (cell, want) in common::table6() {
        if !["Td", "Te"].contains(&cell.tech.as_str()) {
            continue;
        }
        let got = mx
            .get(
                &cell.tech,
                &cell.scenario,
                cell.codec.parse().unwrap(),
                cell.nonfunc,
            )
            .unwrap();
        match want {
            EnergyRef::Joules(j) => {
                let v = got.value.joules().expect("numeric cell");
                assert!(((v - j) / j).abs() < 1e-3, "{cell:?}: {v} vs {j}");
            }
            EnergyRef::Infeasible => assert_eq!(got.value, EnergyValue::Infeasible, "{cell:?}"),
            EnergyRef::Annotation { .. } => unreachable!(),
        }
    }
}

#[test]
fn infeasible_marks_and_copper_annotations() {
    let mx = matrix();
    for (cell, want) in common::table6() {
        let got = mx
            .get(
                &cell.tech,
                &cell.scenario,
                cell.codec.parse().unwrap(),
                cell.nonfunc,
            )
            .unwrap();
        match want {
            EnergyRef::Infeasible => assert_eq!(got.value, EnergyValue::Infeasible, "{cell:?}"),
            EnergyRef::Annotation { bw, feasible } => {
                assert!((got.per_home_demand - bw).abs() < 1e-9, "{cell:?}");
                assert_eq!(got.value, EnergyValue::NotModeled { feasible }, "{cell:?}");
            }
            EnergyRef::Joules(_) => assert!(got.value.joules().is_some(), "{cell:?}"),
        }
    }
}

#[test]
fn sc2_unaffected_by_nonfunc() {
    let mx = matrix();
    for t in ["Tb", "Tc", "Td", "Te"] {
        for c in Codec::ALL {
            assert_eq!(
                mx.get(t, "Sc2", c, false).unwrap().value,
                mx.get(t, "Sc2", c, true).unwrap().value
            );
        }
    }
}

#[test]
fn ratio_scaled_cells() {
    let mx = matrix();
    let v = mx
        .get("Td", "Sc4", Codec::Avc, true)
        .unwrap()
        .value
        .joules()
        .unwrap();
    assert!((v - 214.9).abs() < 0.05);
    let v = mx
        .get("Te", "Sc3", Codec::Hevc, false)
        .unwrap()
        .value
        .joules()
        .unwrap();
    assert!((v - 3854.3).abs() < 0.05);
}

/// OLT figures back-solved from the tabulated Td coefficients. They stand in
/// for vendor data a user would supply.
fn td_user_params() -> PowerParams {
    let m = Model::builtin();
    let base = m.power_params["Td"].clone();
    let olt_share = 13531.0 / 1024.0 - (base.p_onu00 + 1.0);
    let span = 1024.0 - 100.0;
    let correction = 1.2810 * span / 1024.0 / (1.0 / 40.0 - 1.0 / 256.0);
    PowerParams {
        p_olt_port: Some(olt_share * 256.0 * 0.5),
        p_olt_user: Some(olt_share * 0.5),
        n_h0: Some(correction / 2.0),
        p_delta_olt0: Some(2.0),
        ..base
    }
}

#[test]
fn derived_coefficients_reproduce_table_with_user_params() {
    let m = Model::builtin();
    let td = m.technology("Td").unwrap();
    let c = derive_coefficients(&td_user_params(), td, 256).unwrap();
    assert!((c.a_delta - 13531.0).abs() < 1e-6);
    assert!((c.b_delta - 1.2810).abs() < 1e-9);
    // power × transfer time at the scenario bandwidth
    let p = power_per_home(&td_user_params(), td, 6.55, 256).unwrap();
    assert!((p * 1024.0 / 6.55 - energy_per_gb(c, 6.55)).abs() < 1e-9);
}

proptest! {
    #[test]
    fn short_form_matches_full_expression(
        bw in 100.0f64..=1024.0,
        port in 0.0f64..200.0, user in 0.0f64..2.0, onu in 0.0f64..25.0,
        nh0 in 0.0f64..100.0, p0 in 0.0f64..5.0,
        ns0 in prop::sample::select(vec![64u32, 128, 256, 512]),
        label in prop::sample::select(vec!["Tc", "Td", "Te"]),
    ) {
        let m = Model::builtin();
        let tech = m.technology(label).unwrap();
        // 40960 / 32 = 1280 Mbps keeps the whole range split-limited
        let n_s = 32;
        let params = PowerParams {
            p_olt_port: Some(port),
            p_olt_user: Some(user),
            n_h0: Some(nh0),
            p_delta_olt0: Some(p0),
            ..PowerParams::partial(onu, ns0)
        };
        let c = derive_coefficients(&params, tech, n_s).unwrap();
        let full = energy_per_gb_full(&params, tech, bw, n_s).unwrap();
        let short = energy_per_gb(c, bw);
        prop_assert!((full - short).abs() <= 1e-9 * short.abs().max(1e-12));
    }

    #[test]
    fn energy_strictly_decreasing(bw in 0.5f64..1000.0, d in 0.01f64..100.0, t in prop::sample::select(vec!["Tb", "Tc", "Td", "Te"])) {
        let c = builtin_coefficients()[t];
        prop_assert!(energy_per_gb(c, bw + d) < energy_per_gb(c, bw));
        prop_assert!(energy_per_gb(c, bw) > c.b_delta);
    }

    #[test]
    fn burst_never_exceeds_continuous(stream in 0.5f64..50.0, factor in 1.0f64..16.0, t in prop::sample::select(vec!["Tb", "Tc", "Td", "Te"])) {
        let c = builtin_coefficients()[t];
        let burst = burst_energy_per_gb(c, stream * factor, stream);
        let cont = energy_per_gb(c, stream);
        if factor == 1.0 {
            prop_assert_eq!(burst, cont);
        } else {
            prop_assert!(burst < cont);
        }
    }

    #[test]
    fn video_second_identity(e in 0.0f64..1e5, b in 0.1f64..100.0) {
        let v = per_video_second(e, b);
        prop_assert!((v - e * b / 1024.0).abs() <= 1e-12 * (e * b / 1024.0).max(1.0));
    }
}
