// SPDX-License-Identifier: Apache-2.0

mod common;

use accessplan_core::catalog::{Codec, DEFAULT_SPLIT_CANDIDATES};
use accessplan_core::feasibility::{
    aggregate_demand, check_feasibility, enhancement_summary, feasibility_matrix, per_home_demand,
    scenario_encoding, Enhancements, NonFunctionalModel,
};
use accessplan_core::Model;
use proptest::prelude::*;

fn codec(name: &str) -> Codec {
    name.parse().unwrap()
}

fn matrix() -> accessplan_core::feasibility::FeasibilityMatrix {
    let m = Model::builtin();
    feasibility_matrix(
        &m.technologies,
        &m.scenarios,
        &m.encodings,
        &m.split_candidates,
    )
    .unwrap()
}

#[test]
fn every_cell_matches_the_fixture() {
    let mx = matrix();
    let fixture = common::table3();
    assert_eq!(fixture.len(), 80);
    assert_eq!(mx.entries.len(), 80);
    let mismatches: Vec<_> = fixture
        .iter()
        .filter(|(c, want)| {
            mx.is_feasible(&c.tech, &c.scenario, codec(&c.codec), c.nonfunc) != *want
        })
        .map(|(c, _)| c.clone())
        .collect();
    assert!(mismatches.is_empty(), "{mismatches:#?}");
    let fixture_feasible = fixture.iter().filter(|(_, f)| *f).count();
    assert_eq!(mx.feasible_count(), fixture_feasible);
    assert_eq!(fixture_feasible, 48);
}

#[test]
fn row_spot_checks() {
    let mx = matrix();
    let sc1: Vec<_> = mx
        .entries
        .iter()
        .filter(|e| e.scenario == "Sc1" && e.cell.feasible)
        .map(|e| (e.tech.as_str(), e.nonfunc))
        .collect();
    assert_eq!(sc1, vec![("Ta", true), ("Ta", true)]);
    assert!(mx
        .entries
        .iter()
        .filter(|e| e.scenario == "Sc3" && e.codec == Codec::Hevc)
        .all(|e| e.cell.feasible));
}

/// Flip counts recounted directly on the transcribed marks.
fn naive_summary(low_group: &[&str]) -> [(usize, usize, usize, usize); 2] {
    let fixture = common::table3();
    let mark = |t: &str, s: &str, c: &str, nf: bool| {
        fixture
            .iter()
            .find(|(g, _)| g.tech == t && g.scenario == s && g.codec == c && g.nonfunc == nf)
            .unwrap()
            .1
    };
    let mut out = [(0, 0, 0, 0); 2];
    for t in common::TECHS {
        let g = usize::from(!low_group.contains(&t));
        for s in ["Sc1", "Sc2", "Sc3", "Sc4"] {
            if mark(t, s, "AVC", false) {
                out[g].0 += 1;
            }
            for c in ["AVC", "HEVC"] {
                if !mark(t, s, c, false) && mark(t, s, c, true) {
                    out[g].1 += 1;
                }
            }
            if !mark(t, s, "AVC", false) && mark(t, s, "HEVC", false) {
                out[g].2 += 1;
            }
            if !mark(t, s, "AVC", false) && mark(t, s, "HEVC", true) {
                out[g].3 += 1;
            }
        }
    }
    out
}

#[test]
fn summary_matches_naive_recount() {
    let m = Model::builtin();
    let summary = enhancement_summary(&matrix(), &m.technologies);
    let naive = naive_summary(&["Ta", "Tb"]);
    for (s, n) in summary.iter().zip(naive) {
        assert_eq!(
            (s.baseline, s.nonfunc_only, s.hevc_only, s.both),
            n,
            "{}",
            s.group
        );
    }
    assert_eq!(summary[0].technologies, vec!["Ta", "Tb"]);
    assert_eq!(
        (summary[0].pairs, summary[0].baseline, summary[0].both),
        (8, 0, 6)
    );
    assert_eq!((summary[0].nonfunc_only, summary[0].hevc_only), (4, 4));
    assert_eq!((summary[1].pairs, summary[1].baseline), (12, 9));
    assert_eq!(
        (
            summary[1].nonfunc_only,
            summary[1].hevc_only,
            summary[1].both
        ),
        (0, 0, 0)
    );
}

#[test]
fn no_effect_leaves_demand_unchanged_and_full_aggregate_is_exact() {
    let m = Model::builtin();
    for s in &m.scenarios {
        for c in Codec::ALL {
            let e = scenario_encoding(&m.encodings, s, c).unwrap();
            let off = aggregate_demand(
                s,
                e,
                Enhancements {
                    nonfunc: false,
                    codec: c,
                },
            )
            .unwrap();
            assert_eq!(off, f64::from(s.homes) * per_home_demand(s, e).unwrap());
            if s.nonfunc_model == NonFunctionalModel::NoEffect {
                let on = aggregate_demand(
                    s,
                    e,
                    Enhancements {
                        nonfunc: true,
                        codec: c,
                    },
                )
                .unwrap();
                assert_eq!(on, off);
            }
        }
    }
}

proptest! {
    #[test]
    fn lowering_bitrate_never_breaks_a_feasible_cell(
        ti in 0usize..5, si in 0usize..4, nonfunc: bool,
        hi in 0.5f64..40.0, frac in 0.05f64..1.0,
    ) {
        let m = Model::builtin();
        let tech = &m.technologies[ti];
        let sc = &m.scenarios[si];
        let mut e = scenario_encoding(&m.encodings, sc, Codec::Avc).unwrap().clone();
        let enh = Enhancements { nonfunc, codec: Codec::Avc };
        e.bitrate = hi;
        let high = check_feasibility(tech, sc, &e, enh, &DEFAULT_SPLIT_CANDIDATES).unwrap();
        e.bitrate = hi * frac;
        let low = check_feasibility(tech, sc, &e, enh, &DEFAULT_SPLIT_CANDIDATES).unwrap();
        prop_assert!(!high.feasible || low.feasible);
        for v in &low.violated_constraints {
            prop_assert!(high.violated_constraints.contains(v));
        }
    }

    #[test]
    fn nonfunc_never_increases_demand(
        si in 0usize..4, ci in 0usize..2, bitrate in 0.1f64..50.0,
        homes in 1u32..5000, ratio in 0.01f64..1.0, interval in 0.1f64..60.0, model in 0usize..3,
    ) {
        let m = Model::builtin();
        let mut sc = m.scenarios[si].clone();
        sc.homes = homes;
        sc.nonfunc_model = match model {
            0 => NonFunctionalModel::StreamCap { sync_interval: interval },
            1 => NonFunctionalModel::AggregateRatio { ratio },
            _ => NonFunctionalModel::NoEffect,
        };
        let codec = Codec::ALL[ci];
        let mut e = scenario_encoding(&m.encodings, &sc, codec).unwrap().clone();
        e.bitrate = bitrate;
        let off = aggregate_demand(&sc, &e, Enhancements { nonfunc: false, codec }).unwrap();
        let on = aggregate_demand(&sc, &e, Enhancements { nonfunc: true, codec }).unwrap();
        prop_assert!(on <= off);
        for tech in &m.technologies {
            let f_off = check_feasibility(tech, &sc, &e, Enhancements { nonfunc: false, codec }, &DEFAULT_SPLIT_CANDIDATES).unwrap();
            let f_on = check_feasibility(tech, &sc, &e, Enhancements { nonfunc: true, codec }, &DEFAULT_SPLIT_CANDIDATES).unwrap();
            prop_assert!(!f_off.feasible || f_on.feasible);
        }
    }
}
