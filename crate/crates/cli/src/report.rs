// SPDX-License-Identifier: Apache-2.0

//! Report records built from the planning model.
//!
//! Numbers are rounded when a report is built (1 decimal for energies in J
//! and reach, 4 for coefficients) so that the JSON form is canonical:
//! parsing a report and serializing it again reproduces the same bytes.

use accessplan_core::catalog::{max_supported_split, reach_km, Codec, SplitPlan, TechKind};
use accessplan_core::energy::{
    derive_coefficients, energy_matrix, energy_per_gb, per_video_second, EnergyValue,
};
use accessplan_core::feasibility::{
    check_feasibility, enhancement_summary, feasibility_matrix, scenario_encoding, Enhancements,
    GroupSummary,
};
use accessplan_core::microreg::{
    aggregate_streams, bandwidth_savings, generate_arrivals, ArrivalProcess, MicroRegConfig,
};
use accessplan_core::pricing::{
    bpdf_rate, delta, delta_bp, holder_objective, optimize_fee, total_cost, Diagnosis,
    PricingParams,
};
use accessplan_core::units::{mbps_to_gbps, round_to, EnergyUnit};
use accessplan_core::Model;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Split plans of the reach table.
pub const REACH_PLANS: [[u32; 2]; 4] = [[8, 8], [8, 16], [16, 16], [32, 16]];

/// Tree size the coefficient table is computed for.
pub const COEFFICIENT_SPLIT: u32 = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TechRow {
    pub label: String,
    pub name: String,
    pub kind: TechKind,
    pub ds_gbps: f64,
    pub us_gbps: f64,
    pub optical_budget: Option<f64>,
    pub attenuation: Option<f64>,
    pub per_line_limit: Option<f64>,
    pub max_split: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodingRow {
    pub codec: String,
    pub resolution: String,
    pub grade: String,
    pub bitrate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioRow {
    pub id: String,
    pub homes: u32,
    pub channels_per_home: f64,
    pub reserved_internet: f64,
    pub video_class: String,
    pub required_split: u32,
    pub nonfunc_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogReport {
    pub technologies: Vec<TechRow>,
    pub encodings: Vec<EncodingRow>,
    pub scenarios: Vec<ScenarioRow>,
    pub split_candidates: Vec<u32>,
}

pub fn catalog_report(model: &Model) -> CatalogReport {
    CatalogReport {
        technologies: model
            .technologies
            .iter()
            .map(|t| TechRow {
                label: t.label.clone(),
                name: t.name.clone(),
                kind: t.kind,
                ds_gbps: round_to(mbps_to_gbps(t.ds_capacity), 2),
                us_gbps: round_to(mbps_to_gbps(t.us_capacity), 2),
                optical_budget: t.optical_budget,
                attenuation: t.attenuation,
                per_line_limit: t.per_line_limit,
                max_split: max_supported_split(t, &model.split_candidates).to_string(),
            })
            .collect(),
        encodings: model
            .encodings
            .iter()
            .map(|e| EncodingRow {
                codec: e.codec.to_string(),
                resolution: e.resolution.to_string(),
                grade: format!("{:?}", e.grade).to_lowercase(),
                bitrate: e.bitrate,
            })
            .collect(),
        scenarios: model
            .scenarios
            .iter()
            .map(|s| ScenarioRow {
                id: s.id.clone(),
                homes: s.homes,
                channels_per_home: s.channels_per_home,
                reserved_internet: s.reserved_internet,
                video_class: s.video_class.to_string(),
                required_split: s.required_split,
                nonfunc_ratio: round_to(s.nonfunc_ratio(), 5),
            })
            .collect(),
        split_candidates: model.split_candidates.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReachRow {
    pub tech: String,
    pub split: String,
    pub total_split: u64,
    /// km, `None` when not reachable.
    pub reach_km: Option<f64>,
    pub max_split: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReachReport {
    pub rows: Vec<ReachRow>,
}

/// Reach of the selected technologies (all when `tech` is `None`) over
/// `plans` (the reach-table plans when empty).
pub fn reach_report(
    model: &Model,
    tech: Option<&str>,
    plans: &[Vec<u32>],
) -> Result<ReachReport, CliError> {
    let techs = match tech {
        Some(label) => vec![model
            .technology(label)
            .ok_or_else(|| CliError::UnknownIdentifier(format!("technology `{label}`")))?],
        None => model.technologies.iter().collect(),
    };
    let plans: Vec<SplitPlan> = if plans.is_empty() {
        REACH_PLANS
            .iter()
            .map(|p| SplitPlan::new(p.to_vec()).expect("static plan"))
            .collect()
    } else {
        plans
            .iter()
            .map(|p| SplitPlan::new(p.clone()).map_err(|e| CliError::Usage(e.to_string())))
            .collect::<Result<_, _>>()?
    };
    let mut rows = Vec::new();
    for t in techs {
        let ceiling = max_supported_split(t, &model.split_candidates).to_string();
        for plan in &plans {
            rows.push(ReachRow {
                tech: t.label.clone(),
                split: plan.to_string(),
                total_split: plan.total(),
                reach_km: reach_km(t, plan).ok().map(|km| round_to(km, 1)),
                max_split: ceiling.clone(),
            });
        }
    }
    Ok(ReachReport { rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReachTableRow {
    pub label: String,
    pub name: String,
    pub ds_gbps: f64,
    pub us_gbps: f64,
    pub optical_budget: Option<f64>,
    pub attenuation: Option<f64>,
    pub reach_km: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Report {
    pub splits: Vec<String>,
    pub rows: Vec<ReachTableRow>,
}

pub fn table1(model: &Model) -> Table1Report {
    let plans: Vec<SplitPlan> = REACH_PLANS
        .iter()
        .map(|p| SplitPlan::new(p.to_vec()).expect("static plan"))
        .collect();
    Table1Report {
        splits: plans.iter().map(|p| p.to_string()).collect(),
        rows: model
            .technologies
            .iter()
            .map(|t| ReachTableRow {
                label: t.label.clone(),
                name: t.name.clone(),
                ds_gbps: round_to(mbps_to_gbps(t.ds_capacity), 2),
                us_gbps: round_to(mbps_to_gbps(t.us_capacity), 2),
                optical_budget: t.optical_budget,
                attenuation: t.attenuation,
                reach_km: plans
                    .iter()
                    .map(|p| reach_km(t, p).ok().map(|km| round_to(km, 1)))
                    .collect(),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityRow {
    pub scenario: String,
    pub codec: Codec,
    pub tech: String,
    pub nonfunc: bool,
    pub feasible: bool,
    pub per_home_demand: f64,
    pub aggregate_demand: f64,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table3Report {
    pub technologies: Vec<String>,
    pub scenarios: Vec<String>,
    pub feasible_count: usize,
    pub cells: Vec<FeasibilityRow>,
}

pub fn table3(model: &Model) -> Result<Table3Report, CliError> {
    let mx = feasibility_matrix(
        &model.technologies,
        &model.scenarios,
        &model.encodings,
        &model.split_candidates,
    )?;
    Ok(Table3Report {
        technologies: mx.technologies.clone(),
        scenarios: mx.scenarios.clone(),
        feasible_count: mx.feasible_count(),
        cells: mx
            .entries
            .iter()
            .map(|e| FeasibilityRow {
                scenario: e.scenario.clone(),
                codec: e.codec,
                tech: e.tech.clone(),
                nonfunc: e.nonfunc,
                feasible: e.cell.feasible,
                per_home_demand: round_to(e.cell.per_home_demand, 2),
                aggregate_demand: round_to(e.cell.aggregate_demand, 1),
                violations: e
                    .cell
                    .violated_constraints
                    .iter()
                    .map(|v| v.to_string())
                    .collect(),
            })
            .collect(),
    })
}

/// Functional count stated in prose for the high-bandwidth group, which
/// disagrees with the recount of the mesh.
pub const HIGH_GROUP_NARRATIVE_COUNT: &str = "6/12";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table4Report {
    pub groups: Vec<GroupSummary>,
    pub notes: Vec<String>,
}

pub fn table4(model: &Model) -> Result<Table4Report, CliError> {
    let mx = feasibility_matrix(
        &model.technologies,
        &model.scenarios,
        &model.encodings,
        &model.split_candidates,
    )?;
    let groups = enhancement_summary(&mx, &model.technologies);
    let notes = groups
        .iter()
        .filter(|g| g.group.starts_with(">="))
        .map(|g| {
            format!(
                "{} baseline: recount from the feasibility mesh {}/{}; narrative count {}",
                g.group, g.baseline, g.pairs, HIGH_GROUP_NARRATIVE_COUNT
            )
        })
        .collect();
    Ok(Table4Report { groups, notes })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub tech: String,
    pub a_delta: f64,
    pub b_delta: f64,
    /// Present when complete power parameters are configured.
    pub derived_a_delta: Option<f64>,
    pub derived_b_delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table5Report {
    pub split: u32,
    pub rows: Vec<CoefficientRow>,
}

pub fn table5(model: &Model) -> Table5Report {
    let rows = model
        .coefficients
        .iter()
        .map(|(label, c)| {
            let derived = model
                .technology(label)
                .zip(model.power_params.get(label))
                .and_then(|(t, p)| derive_coefficients(p, t, COEFFICIENT_SPLIT).ok());
            CoefficientRow {
                tech: label.clone(),
                a_delta: round_to(c.a_delta, 4),
                b_delta: round_to(c.b_delta, 4),
                derived_a_delta: derived.map(|d| round_to(d.a_delta, 4)),
                derived_b_delta: derived.map(|d| round_to(d.b_delta, 4)),
            }
        })
        .collect();
    Table5Report {
        split: COEFFICIENT_SPLIT,
        rows,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Ok,
    Infeasible,
    NotModeled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyRow {
    pub scenario: String,
    pub codec: Codec,
    pub tech: String,
    pub nonfunc: bool,
    pub per_home_demand: f64,
    pub status: CellStatus,
    pub feasible: bool,
    /// Energy per Gb in `unit`.
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table6Report {
    pub unit: EnergyUnit,
    pub technologies: Vec<String>,
    pub scenarios: Vec<String>,
    pub cells: Vec<EnergyRow>,
    pub notes: Vec<String>,
}

pub fn table6(model: &Model, unit: EnergyUnit) -> Result<Table6Report, CliError> {
    let mx = energy_matrix(
        &model.technologies,
        &model.coefficients,
        &model.scenarios,
        &model.encodings,
        &model.split_candidates,
    )?;
    let cells = mx
        .entries
        .iter()
        .map(|e| {
            let (status, feasible, value) = match e.value {
                EnergyValue::Joules { value } => (
                    CellStatus::Ok,
                    true,
                    Some(round_to(unit.from_joules(value), unit.decimals())),
                ),
                EnergyValue::Infeasible => (CellStatus::Infeasible, false, None),
                EnergyValue::NotModeled { feasible } => (CellStatus::NotModeled, feasible, None),
            };
            EnergyRow {
                scenario: e.scenario.clone(),
                codec: e.codec,
                tech: e.tech.clone(),
                nonfunc: e.nonfunc,
                per_home_demand: round_to(e.per_home_demand, 2),
                status,
                feasible,
                value,
            }
        })
        .collect();
    let notes = vec![
        "Tb and Tc coefficients are tabulated rounded; their cells can sit about 1% off values computed from unrounded coefficients".to_string(),
        "values with non-functional technologies are the plain values scaled by the scenario's demand ratio".to_string(),
        "copper (Ta) carries only the per-home demand annotation".to_string(),
    ];
    Ok(Table6Report {
        unit,
        technologies: mx.technologies,
        scenarios: mx.scenarios,
        cells,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhatIfReport {
    pub tech: String,
    pub scenario: String,
    pub codec: Codec,
    pub nonfunc: bool,
    pub feasible: bool,
    pub per_home_demand: f64,
    pub aggregate_demand: f64,
    pub violations: Vec<String>,
    pub unit: EnergyUnit,
    /// Per Gb downloaded.
    pub energy_per_gb: Option<f64>,
    /// Per second of video watched.
    pub energy_per_video_second: Option<f64>,
}

pub fn whatif(
    model: &Model,
    tech: &str,
    scenario: &str,
    codec: Codec,
    nonfunc: bool,
    unit: EnergyUnit,
) -> Result<WhatIfReport, CliError> {
    let t = model
        .technology(tech)
        .ok_or_else(|| CliError::UnknownIdentifier(format!("technology `{tech}`")))?;
    let s = model
        .scenario(scenario)
        .ok_or_else(|| CliError::UnknownIdentifier(format!("scenario `{scenario}`")))?;
    let encoding = scenario_encoding(&model.encodings, s, codec)?;
    let cell = check_feasibility(
        t,
        s,
        encoding,
        Enhancements { nonfunc, codec },
        &model.split_candidates,
    )?;
    let joules = match model.coefficients.get(&t.label) {
        Some(&c) if cell.feasible && t.kind == TechKind::Pon => {
            let e = energy_per_gb(c, cell.per_home_demand);
            Some(if nonfunc { e * s.nonfunc_ratio() } else { e })
        }
        _ => None,
    };
    let shown = |j: f64| round_to(unit.from_joules(j), unit.decimals());
    Ok(WhatIfReport {
        tech: t.label.clone(),
        scenario: s.id.clone(),
        codec,
        nonfunc,
        feasible: cell.feasible,
        per_home_demand: round_to(cell.per_home_demand, 2),
        aggregate_demand: round_to(cell.aggregate_demand, 1),
        violations: cell
            .violated_constraints
            .iter()
            .map(|v| v.to_string())
            .collect(),
        unit,
        energy_per_gb: joules.map(shown),
        energy_per_video_second: joules
            .map(|j| per_video_second(j, encoding.bitrate))
            .map(|j| round_to(unit.from_joules(j), unit.decimals() + 2)),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MicroRegReport {
    pub viewers: usize,
    pub window: f64,
    pub interval: f64,
    pub bitrate: f64,
    pub capacity: f64,
    pub seed: u64,
    pub process: ArrivalProcess,
    pub active_streams: u64,
    pub max_wait: f64,
    pub aggregate_bandwidth: f64,
    pub savings: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct MicroRegArgs {
    pub viewers: usize,
    pub window: f64,
    pub interval: f64,
    pub bitrate: f64,
    pub capacity: f64,
    pub seed: u64,
    pub process: ArrivalProcess,
}

pub fn microreg(args: MicroRegArgs) -> Result<MicroRegReport, CliError> {
    if !(args.capacity > 0.0) {
        return Err(CliError::Usage("capacity must be positive".into()));
    }
    let config = MicroRegConfig {
        sync_interval: args.interval,
        window: args.window,
        stream_bitrate: args.bitrate,
        rng_seed: args.seed,
        ..Default::default()
    };
    config.validate()?;
    let requests = generate_arrivals(args.viewers, args.window, args.process, args.seed);
    let result = aggregate_streams(&requests, &config)?;
    Ok(MicroRegReport {
        viewers: args.viewers,
        window: args.window,
        interval: args.interval,
        bitrate: args.bitrate,
        capacity: args.capacity,
        seed: args.seed,
        process: args.process,
        active_streams: result.active_streams,
        max_wait: round_to(result.max_wait, 6),
        aggregate_bandwidth: round_to(result.aggregate_bandwidth, 3),
        savings: round_to(bandwidth_savings(&result, args.capacity), 6),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PricingReport {
    pub delta: f64,
    /// Skewed per-kWh rate with the fee-adjusted excess.
    pub bpdf_rate: f64,
    pub total_cost: f64,
    pub objective: f64,
    pub fee: f64,
    pub fee_star: Option<f64>,
    pub diagnosis: Option<Diagnosis>,
    pub interior_critical_point: Option<f64>,
}

/// Evaluates the tariff at `fee`, or at the revenue-maximizing fee when
/// `grid` is given.
pub fn pricing(
    e_a: f64,
    k: f64,
    c_elec: f64,
    fee: f64,
    grid: Option<f64>,
) -> Result<PricingReport, CliError> {
    let d = delta(e_a)?;
    let optimum = grid
        .map(|step| optimize_fee(k, d, c_elec, step))
        .transpose()?;
    let fee = optimum.map_or(fee, |o| o.fee_star);
    let params = PricingParams {
        e_a,
        k,
        c_elec,
        fee,
    };
    let r = |v: f64| round_to(v, 10);
    Ok(PricingReport {
        delta: r(d),
        bpdf_rate: r(bpdf_rate(k, delta_bp(d, k, fee), c_elec)),
        total_cost: r(total_cost(&params)?),
        objective: r(holder_objective(&params)?),
        fee: r(fee),
        fee_star: optimum.map(|o| r(o.fee_star)),
        diagnosis: optimum.map(|o| o.diagnosis),
        interior_critical_point: optimum.and_then(|o| o.interior_critical_point).map(r),
    })
}
