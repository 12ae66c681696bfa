// SPDX-License-Identifier: Apache-2.0

//! Downstream demand per scenario and the technology × scenario × codec ×
//! enhancement feasibility mesh.

use crate::catalog::{
    find_encoding, max_supported_split, Codec, EncodingProfile, Grade, Resolution, TechKind,
    TechnologySpec,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FeasibilityError {
    #[error("scenario {scenario} carries {expected} video but the encoding is {got}")]
    ResolutionMismatch {
        scenario: String,
        expected: Resolution,
        got: Resolution,
    },
    #[error("enhancement codec {expected} does not match encoding codec {got}")]
    CodecMismatch { expected: Codec, got: Codec },
    #[error("no low-grade {codec} {resolution} encoding available")]
    MissingEncoding {
        codec: Codec,
        resolution: Resolution,
    },
    #[error("invalid scenario {id}: {reason}")]
    InvalidScenario { id: String, reason: String },
}

/// How non-functional technologies change the aggregate demand of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum NonFunctionalModel {
    /// Micro-registration: requests inside the arrival window share one
    /// stream per synchronization slot.
    StreamCap { sync_interval: f64 },
    /// Flat reduction of the aggregate demand by `ratio`.
    AggregateRatio { ratio: f64 },
    /// Demand is already aggregated (broadcast IPTV).
    NoEffect,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub id: String,
    pub homes: u32,
    pub channels_per_home: f64,
    /// Best-effort Internet share reserved per home, Mbps.
    #[serde(default)]
    pub reserved_internet: f64,
    pub video_class: Resolution,
    /// Seconds.
    #[serde(default = "default_window")]
    pub arrival_window: f64,
    pub nonfunc_model: NonFunctionalModel,
    pub required_split: u32,
    /// Per-technology split used instead of `required_split`.
    #[serde(default)]
    pub split_override: BTreeMap<String, u32>,
}

fn default_window() -> f64 {
    1800.0
}

impl Scenario {
    pub fn validate(&self) -> Result<(), FeasibilityError> {
        let bad = |reason: &str| {
            Err(FeasibilityError::InvalidScenario {
                id: self.id.clone(),
                reason: reason.into(),
            })
        };
        if self.homes < 1 {
            return bad("homes must be at least 1");
        }
        if !(self.channels_per_home > 0.0) {
            return bad("channels_per_home must be positive");
        }
        if !(self.reserved_internet >= 0.0) {
            return bad("reserved_internet must be non-negative");
        }
        if !(self.arrival_window > 0.0) {
            return bad("arrival_window must be positive");
        }
        if self.required_split < 1 {
            return bad("required_split must be at least 1");
        }
        match self.nonfunc_model {
            NonFunctionalModel::StreamCap { sync_interval } if !(sync_interval > 0.0) => {
                bad("sync_interval must be positive")
            }
            NonFunctionalModel::AggregateRatio { ratio } if !(ratio > 0.0 && ratio <= 1.0) => {
                bad("aggregate ratio must lie in (0, 1]")
            }
            _ => Ok(()),
        }
    }

    /// Split the tree of `tech` must serve in this scenario.
    pub fn effective_split(&self, tech: &TechnologySpec) -> u32 {
        self.split_override
            .get(&tech.label)
            .copied()
            .unwrap_or(self.required_split)
    }

    /// Number of concurrent streams under the stream-cap model.
    pub fn stream_cap(&self, sync_interval: f64) -> u32 {
        let slots = (self.arrival_window / sync_interval).ceil();
        // slots is at least 1 for positive inputs
        self.homes.min(slots as u32)
    }

    /// Ratio of aggregate demand with non-functional technologies to demand
    /// without them. 1.0 when they have no effect.
    pub fn nonfunc_ratio(&self) -> f64 {
        match self.nonfunc_model {
            NonFunctionalModel::StreamCap { sync_interval } => {
                f64::from(self.stream_cap(sync_interval)) / f64::from(self.homes)
            }
            NonFunctionalModel::AggregateRatio { ratio } => ratio,
            NonFunctionalModel::NoEffect => 1.0,
        }
    }
}

/// Reduction ratio read off the paired energy columns of the extended
/// prime-time scenarios.
pub const EXTENDED_PRIME_TIME_RATIO: f64 = 0.46875;

/// Micro-registration synchronization interval, seconds.
pub const DEFAULT_SYNC_INTERVAL: f64 = 5.0;

pub fn builtin_scenarios() -> Vec<Scenario> {
    let small_area_override: BTreeMap<String, u32> =
        [("Tb".to_string(), 128), ("Tc".to_string(), 128)].into();
    let metro = |id: &str, reserved: f64, class, model| Scenario {
        id: id.into(),
        homes: 256,
        channels_per_home: 1.85,
        reserved_internet: reserved,
        video_class: class,
        arrival_window: 1800.0,
        nonfunc_model: model,
        required_split: 256,
        split_override: small_area_override.clone(),
    };
    let ratio = NonFunctionalModel::AggregateRatio {
        ratio: EXTENDED_PRIME_TIME_RATIO,
    };
    vec![
        Scenario {
            id: "Sc1".into(),
            homes: 1000,
            channels_per_home: 1.0,
            reserved_internet: 0.0,
            video_class: Resolution::Hd,
            arrival_window: 1800.0,
            nonfunc_model: NonFunctionalModel::StreamCap {
                sync_interval: DEFAULT_SYNC_INTERVAL,
            },
            required_split: 1024,
            split_override: BTreeMap::new(),
        },
        metro("Sc2", 1.0, Resolution::Hd, NonFunctionalModel::NoEffect),
        metro("Sc3", 0.0, Resolution::Hd, ratio),
        metro("Sc4", 0.0, Resolution::Uhd4k, ratio),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Enhancements {
    pub nonfunc: bool,
    pub codec: Codec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Violation {
    PerLineLimit,
    AggregateCapacity,
    SplitUnsupported,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Violation::PerLineLimit => "PerLineLimit",
            Violation::AggregateCapacity => "AggregateCapacity",
            Violation::SplitUnsupported => "SplitUnsupported",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityCell {
    pub feasible: bool,
    /// Mbps.
    pub per_home_demand: f64,
    /// Mbps.
    pub aggregate_demand: f64,
    pub violated_constraints: Vec<Violation>,
}

impl FeasibilityCell {
    fn from_violations(per_home: f64, aggregate: f64, violations: Vec<Violation>) -> Self {
        Self {
            feasible: violations.is_empty(),
            per_home_demand: per_home,
            aggregate_demand: aggregate,
            violated_constraints: violations,
        }
    }
}

/// Dedicated downstream bandwidth per home, Mbps.
pub fn per_home_demand(
    scenario: &Scenario,
    encoding: &EncodingProfile,
) -> Result<f64, FeasibilityError> {
    if encoding.resolution != scenario.video_class {
        return Err(FeasibilityError::ResolutionMismatch {
            scenario: scenario.id.clone(),
            expected: scenario.video_class,
            got: encoding.resolution,
        });
    }
    Ok(encoding.bitrate * scenario.channels_per_home + scenario.reserved_internet)
}

/// Downstream demand of the whole (sub-)metro area, Mbps.
pub fn aggregate_demand(
    scenario: &Scenario,
    encoding: &EncodingProfile,
    enh: Enhancements,
) -> Result<f64, FeasibilityError> {
    let per_home = per_home_demand(scenario, encoding)?;
    let raw = f64::from(scenario.homes) * per_home;
    if !enh.nonfunc {
        return Ok(raw);
    }
    Ok(match scenario.nonfunc_model {
        NonFunctionalModel::StreamCap { sync_interval } => {
            f64::from(scenario.stream_cap(sync_interval)) * per_home
        }
        NonFunctionalModel::AggregateRatio { ratio } => raw * ratio,
        NonFunctionalModel::NoEffect => raw,
    })
}

/// Evaluates every constraint for one combination; all violations are
/// reported.
///
/// The capacity check always uses the scenario's full aggregate, including
/// when `split_override` shrinks the tree of a technology.
pub fn check_feasibility(
    tech: &TechnologySpec,
    scenario: &Scenario,
    encoding: &EncodingProfile,
    enh: Enhancements,
    split_candidates: &[u32],
) -> Result<FeasibilityCell, FeasibilityError> {
    if enh.codec != encoding.codec {
        return Err(FeasibilityError::CodecMismatch {
            expected: enh.codec,
            got: encoding.codec,
        });
    }
    let per_home = per_home_demand(scenario, encoding)?;
    let aggregate = aggregate_demand(scenario, encoding, enh)?;

    let mut violations = Vec::new();
    if tech.per_line_limit.is_some_and(|limit| per_home > limit) {
        violations.push(Violation::PerLineLimit);
    }
    if aggregate > tech.ds_capacity {
        violations.push(Violation::AggregateCapacity);
    }
    if tech.kind == TechKind::Pon {
        let ceiling = max_supported_split(tech, split_candidates);
        if !ceiling.supports(scenario.effective_split(tech)) {
            violations.push(Violation::SplitUnsupported);
        }
    }
    Ok(FeasibilityCell::from_violations(
        per_home, aggregate, violations,
    ))
}

/// The low-grade (best compression) profile a scenario uses for `codec`.
pub fn scenario_encoding<'a>(
    encodings: &'a [EncodingProfile],
    scenario: &Scenario,
    codec: Codec,
) -> Result<&'a EncodingProfile, FeasibilityError> {
    find_encoding(encodings, codec, scenario.video_class, Grade::Low).ok_or(
        FeasibilityError::MissingEncoding {
            codec,
            resolution: scenario.video_class,
        },
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixEntry {
    pub tech: String,
    pub scenario: String,
    pub codec: Codec,
    pub nonfunc: bool,
    pub cell: FeasibilityCell,
}

/// Feasibility of every combination, ordered scenario, codec, technology,
/// non-functional state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityMatrix {
    pub technologies: Vec<String>,
    pub scenarios: Vec<String>,
    pub entries: Vec<MatrixEntry>,
}

impl FeasibilityMatrix {
    pub fn get(
        &self,
        tech: &str,
        scenario: &str,
        codec: Codec,
        nonfunc: bool,
    ) -> Option<&FeasibilityCell> {
        self.entries
            .iter()
            .find(|e| {
                e.tech == tech && e.scenario == scenario && e.codec == codec && e.nonfunc == nonfunc
            })
            .map(|e| &e.cell)
    }

    pub fn is_feasible(&self, tech: &str, scenario: &str, codec: Codec, nonfunc: bool) -> bool {
        self.get(tech, scenario, codec, nonfunc)
            .is_some_and(|c| c.feasible)
    }

    pub fn feasible_count(&self) -> usize {
        self.entries.iter().filter(|e| e.cell.feasible).count()
    }
}

pub fn feasibility_matrix(
    catalog: &[TechnologySpec],
    scenarios: &[Scenario],
    encodings: &[EncodingProfile],
    split_candidates: &[u32],
) -> Result<FeasibilityMatrix, FeasibilityError> {
    let mut entries = Vec::with_capacity(catalog.len() * scenarios.len() * 4);
    for scenario in scenarios {
        for codec in Codec::ALL {
            let encoding = scenario_encoding(encodings, scenario, codec)?;
            for tech in catalog {
                for nonfunc in [false, true] {
                    let enh = Enhancements { nonfunc, codec };
                    let cell = check_feasibility(tech, scenario, encoding, enh, split_candidates)?;
                    entries.push(MatrixEntry {
                        tech: tech.label.clone(),
                        scenario: scenario.id.clone(),
                        codec,
                        nonfunc,
                        cell,
                    });
                }
            }
        }
    }
    Ok(FeasibilityMatrix {
        technologies: catalog.iter().map(|t| t.label.clone()).collect(),
        scenarios: scenarios.iter().map(|s| s.id.clone()).collect(),
        entries,
    })
}

/// Capacity (Mbps) at which a technology joins the high-bandwidth group.
pub const HIGH_BANDWIDTH_THRESHOLD: f64 = 40.0 * crate::units::MBPS_PER_GBPS;

/// Counts of (technology, scenario) cases that the enhancements make work,
/// for one technology group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub group: String,
    pub technologies: Vec<String>,
    /// Number of (technology, scenario) pairs.
    pub pairs: usize,
    /// Pairs functional with AVC and no non-functional technologies.
    pub baseline: usize,
    /// (technology, scenario, codec) triples fixed by non-functional
    /// technologies alone.
    pub nonfunc_only: usize,
    /// Pairs fixed by switching to HEVC alone.
    pub hevc_only: usize,
    /// Pairs fixed by HEVC together with non-functional technologies.
    pub both: usize,
}

pub fn enhancement_summary(
    matrix: &FeasibilityMatrix,
    catalog: &[TechnologySpec],
) -> Vec<GroupSummary> {
    let (low, high): (Vec<&TechnologySpec>, Vec<&TechnologySpec>) = catalog
        .iter()
        .filter(|t| matrix.technologies.contains(&t.label))
        .partition(|t| t.ds_capacity < HIGH_BANDWIDTH_THRESHOLD);
    let summarize = |name: &str, techs: &[&TechnologySpec]| {
        let mut s = GroupSummary {
            group: name.into(),
            technologies: techs.iter().map(|t| t.label.clone()).collect(),
            pairs: techs.len() * matrix.scenarios.len(),
            baseline: 0,
            nonfunc_only: 0,
            hevc_only: 0,
            both: 0,
        };
        for t in techs {
            for sc in &matrix.scenarios {
                let f = |codec, nonfunc| matrix.is_feasible(&t.label, sc, codec, nonfunc);
                let base = f(Codec::Avc, false);
                if base {
                    s.baseline += 1;
                } else {
                    if f(Codec::Hevc, false) {
                        s.hevc_only += 1;
                    }
                    if f(Codec::Hevc, true) {
                        s.both += 1;
                    }
                }
                s.nonfunc_only += Codec::ALL
                    .into_iter()
                    .filter(|&c| !f(c, false) && f(c, true))
                    .count();
            }
        }
        s
    };
    vec![summarize("<40 Gbps", &low), summarize(">=40 Gbps", &high)]
}
