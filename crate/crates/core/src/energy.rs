// SPDX-License-Identifier: Apache-2.0

//! Differential power and energy per Gb downloaded.
//!
//! Per active home the differential power is the OLT share plus the ONU
//! power:
//!
//! ```text
//! P = (P_port + N_h·P_user)/N_h
//!   + {P_onu00 + hi·step/(hi−lo) − lo·step/(hi−lo)}·N_s/N_h
//!   + N_h0·P_olt0·BW/(hi−lo)·(1/40 − 1/N_s0)
//! ```
//!
//! where `lo`/`hi` are the 100 Mbps and 1 Gbps ONU anchors and `step` the
//! ONU power difference between them. Downloading 1 Gb takes `1024/BW`
//! seconds, so in the split-limited regime (`N_h = N_s`) the energy per Gb
//! collapses to `A/BW + B`.
//!
//! Burst transmission sends the stream at `bw_burst` for a fraction
//! `bw_stream/bw_burst` of the time; the ONU sits in quasi-off mode between
//! bursts and draws nothing. That duty-cycled port sharing is what yields the
//! roughly fourfold saving of burst-mode HEVC over continuous AVC.

use crate::catalog::{Codec, EncodingProfile};
use crate::catalog::{TechKind, TechnologySpec};
use crate::feasibility::{
    check_feasibility, per_home_demand, scenario_encoding, Enhancements, FeasibilityError, Scenario,
};
use crate::units::MB_PER_GB;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnergyError {
    #[error("power parameters for {label} lack `{field}`")]
    MissingParams { label: String, field: &'static str },
    #[error(transparent)]
    Feasibility(#[from] FeasibilityError),
}

/// One anchor of the ONU power interpolation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OnuAnchor {
    /// Mbps.
    pub bandwidth: f64,
    /// W, relative to the zero-offset power.
    pub power: f64,
}

/// Inputs of the differential power model for one technology.
///
/// The OLT figures (`p_olt_port`, `p_olt_user`, `n_h0`, `p_delta_olt0`) are
/// optional: they come from vendor data that is not bundled, and the built-in
/// coefficient table is used when they are absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerParams {
    #[serde(default)]
    pub p_olt_port: Option<f64>,
    #[serde(default)]
    pub p_olt_user: Option<f64>,
    pub p_onu00: f64,
    pub n_s0: u32,
    #[serde(default)]
    pub n_h0: Option<f64>,
    #[serde(default)]
    pub p_delta_olt0: Option<f64>,
    #[serde(default = "default_low_anchor")]
    pub onu_interp_low: OnuAnchor,
    #[serde(default = "default_high_anchor")]
    pub onu_interp_high: OnuAnchor,
}

fn default_low_anchor() -> OnuAnchor {
    OnuAnchor {
        bandwidth: 100.0,
        power: 0.0,
    }
}

fn default_high_anchor() -> OnuAnchor {
    OnuAnchor {
        bandwidth: 1024.0,
        power: 1.0,
    }
}

/// The OLT correction term divides by this port count.
const OLT_CORRECTION_PORTS: f64 = 40.0;

struct CompleteParams {
    p_olt_port: f64,
    p_olt_user: f64,
    n_h0: f64,
    p_delta_olt0: f64,
}

impl PowerParams {
    /// Zero-offset ONU power and reference split only.
    pub fn partial(p_onu00: f64, n_s0: u32) -> Self {
        Self {
            p_olt_port: None,
            p_olt_user: None,
            p_onu00,
            n_s0,
            n_h0: None,
            p_delta_olt0: None,
            onu_interp_low: default_low_anchor(),
            onu_interp_high: default_high_anchor(),
        }
    }

    fn complete(&self, label: &str) -> Result<CompleteParams, EnergyError> {
        let need = |v: Option<f64>, field| {
            v.ok_or(EnergyError::MissingParams {
                label: label.to_string(),
                field,
            })
        };
        Ok(CompleteParams {
            p_olt_port: need(self.p_olt_port, "p_olt_port")?,
            p_olt_user: need(self.p_olt_user, "p_olt_user")?,
            n_h0: need(self.n_h0, "n_h0")?,
            p_delta_olt0: need(self.p_delta_olt0, "p_delta_olt0")?,
        })
    }

    fn anchor_span(&self) -> f64 {
        self.onu_interp_high.bandwidth - self.onu_interp_low.bandwidth
    }

    /// ONU interpolation term, W (1 W for the default anchors).
    fn onu_interpolation(&self) -> f64 {
        let step = self.onu_interp_high.power - self.onu_interp_low.power;
        let span = self.anchor_span();
        self.onu_interp_high.bandwidth * step / span - self.onu_interp_low.bandwidth * step / span
    }

    /// OLT correction factor, per Mbps of downstream bandwidth.
    fn olt_correction(&self, c: &CompleteParams) -> f64 {
        c.n_h0 * c.p_delta_olt0 / self.anchor_span()
            * (1.0 / OLT_CORRECTION_PORTS - 1.0 / f64::from(self.n_s0))
    }
}

/// Zero-offset ONU power and N_s,0 for the PON technologies.
pub fn builtin_power_params() -> BTreeMap<String, PowerParams> {
    [
        ("Tb", 8.0, 64),
        ("Tc", 13.0, 64),
        ("Td", 12.0, 256),
        ("Te", 19.0, 128),
    ]
    .into_iter()
    .map(|(l, p, n)| (l.to_string(), PowerParams::partial(p, n)))
    .collect()
}

/// Short-form coefficients: energy per Gb = `a_delta / BW + b_delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyCoefficients {
    /// W·Mb.
    pub a_delta: f64,
    /// J.
    pub b_delta: f64,
}

/// Coefficient table for N_s = 256.
pub fn builtin_coefficients() -> BTreeMap<String, EnergyCoefficients> {
    [
        ("Tb", 9228.0, 0.0312),
        ("Tc", 14480.0, 0.3751),
        ("Td", 13531.0, 1.2810),
        ("Te", 21368.0, 4.2286),
    ]
    .into_iter()
    .map(|(l, a, b)| {
        (
            l.to_string(),
            EnergyCoefficients {
                a_delta: a,
                b_delta: b,
            },
        )
    })
    .collect()
}

/// Active homes sharing the port: min(split, capacity / per-home demand).
/// The quotient is kept fractional.
pub fn n_active_homes(n_s: f64, bw_max: f64, bw_d: f64) -> f64 {
    assert!(bw_d > 0.0, "bandwidth must be positive");
    n_s.min(bw_max / bw_d)
}

/// Differential power per active home, W.
pub fn power_per_home(
    params: &PowerParams,
    tech: &TechnologySpec,
    bw_d: f64,
    n_s: u32,
) -> Result<f64, EnergyError> {
    assert!(bw_d > 0.0, "bandwidth must be positive");
    let c = params.complete(&tech.label)?;
    let n_s = f64::from(n_s);
    let n_h = n_active_homes(n_s, tech.ds_capacity, bw_d);
    let olt = (c.p_olt_port + n_h * c.p_olt_user) / n_h;
    let onu = (params.p_onu00 + params.onu_interpolation()) * n_s / n_h;
    let correction = params.olt_correction(&c) * bw_d;
    Ok(olt + onu + correction)
}

/// Energy per Gb through the full power expression, J.
pub fn energy_per_gb_full(
    params: &PowerParams,
    tech: &TechnologySpec,
    bw_d: f64,
    n_s: u32,
) -> Result<f64, EnergyError> {
    Ok(MB_PER_GB / bw_d * power_per_home(params, tech, bw_d, n_s)?)
}

/// Collapses the power expression into short-form coefficients, valid
/// wherever the port is split-limited (`bw_d ≤ ds_capacity / n_s`).
pub fn derive_coefficients(
    params: &PowerParams,
    tech: &TechnologySpec,
    n_s: u32,
) -> Result<EnergyCoefficients, EnergyError> {
    let c = params.complete(&tech.label)?;
    let per_home_watts =
        c.p_olt_port / f64::from(n_s) + c.p_olt_user + params.p_onu00 + params.onu_interpolation();
    Ok(EnergyCoefficients {
        a_delta: MB_PER_GB * per_home_watts,
        b_delta: MB_PER_GB * params.olt_correction(&c),
    })
}

/// J per Gb downloaded at `bw_d` Mbps.
pub fn energy_per_gb(coeffs: EnergyCoefficients, bw_d: f64) -> f64 {
    assert!(bw_d > 0.0, "bandwidth must be positive");
    coeffs.a_delta / bw_d + coeffs.b_delta
}

/// Converts J per Gb into J per second of video at `bitrate` Mbps.
pub fn per_video_second(e_per_gb: f64, bitrate: f64) -> f64 {
    assert!(bitrate > 0.0, "bitrate must be positive");
    e_per_gb / (MB_PER_GB / bitrate)
}

/// J per Gb of stream data when it is sent in bursts at `bw_burst`.
///
/// Only transmission time is charged: the duty cycle `bw_stream / bw_burst`
/// scales the continuous energy at the burst rate.
pub fn burst_energy_per_gb(coeffs: EnergyCoefficients, bw_burst: f64, bw_stream: f64) -> f64 {
    assert!(
        bw_stream > 0.0 && bw_burst >= bw_stream,
        "burst rate must be at least the stream rate"
    );
    let duty = bw_stream / bw_burst;
    duty * energy_per_gb(coeffs, bw_burst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnergyValue {
    /// J per Gb.
    Joules {
        value: f64,
    },
    Infeasible,
    /// Copper technologies carry only the demand annotation.
    NotModeled {
        feasible: bool,
    },
}

impl EnergyValue {
    pub fn joules(&self) -> Option<f64> {
        match self {
            EnergyValue::Joules { value } => Some(*value),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyEntry {
    pub tech: String,
    pub scenario: String,
    pub codec: Codec,
    pub nonfunc: bool,
    /// Mbps.
    pub per_home_demand: f64,
    pub value: EnergyValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyMatrix {
    pub technologies: Vec<String>,
    pub scenarios: Vec<String>,
    pub entries: Vec<EnergyEntry>,
}

impl EnergyMatrix {
    pub fn get(
        &self,
        tech: &str,
        scenario: &str,
        codec: Codec,
        nonfunc: bool,
    ) -> Option<&EnergyEntry> {
        self.entries.iter().find(|e| {
            e.tech == tech && e.scenario == scenario && e.codec == codec && e.nonfunc == nonfunc
        })
    }
}

/// Energy per Gb for every combination.
///
/// With non-functional technologies the value is scaled by the scenario's
/// demand ratio. Infeasible combinations carry no number; technologies
/// without coefficients (copper) are `NotModeled`.
pub fn energy_matrix(
    catalog: &[TechnologySpec],
    coeffs: &BTreeMap<String, EnergyCoefficients>,
    scenarios: &[Scenario],
    encodings: &[EncodingProfile],
    split_candidates: &[u32],
) -> Result<EnergyMatrix, EnergyError> {
    let mut entries = Vec::new();
    for scenario in scenarios {
        for codec in Codec::ALL {
            let encoding = scenario_encoding(encodings, scenario, codec)?;
            let bw_d = per_home_demand(scenario, encoding)?;
            for tech in catalog {
                let base = coeffs.get(&tech.label).map(|&c| energy_per_gb(c, bw_d));
                for nonfunc in [false, true] {
                    let enh = Enhancements { nonfunc, codec };
                    let cell = check_feasibility(tech, scenario, encoding, enh, split_candidates)?;
                    let value = match base {
                        _ if tech.kind == TechKind::Copper => EnergyValue::NotModeled {
                            feasible: cell.feasible,
                        },
                        None => EnergyValue::NotModeled {
                            feasible: cell.feasible,
                        },
                        Some(_) if !cell.feasible => EnergyValue::Infeasible,
                        Some(e) => EnergyValue::Joules {
                            value: if nonfunc {
                                e * scenario.nonfunc_ratio()
                            } else {
                                e
                            },
                        },
                    };
                    entries.push(EnergyEntry {
                        tech: tech.label.clone(),
                        scenario: scenario.id.clone(),
                        codec,
                        nonfunc,
                        per_home_demand: bw_d,
                        value,
                    });
                }
            }
        }
    }
    Ok(EnergyMatrix {
        technologies: catalog.iter().map(|t| t.label.clone()).collect(),
        scenarios: scenarios.iter().map(|s| s.id.clone()).collect(),
        entries,
    })
}
