// SPDX-License-Identifier: Apache-2.0

//! Unit conventions.
//!
//! Bandwidth is carried in Mbps throughout, with binary prefixes
//! (1 Gbps = 1024 Mbps, 1 Gb = 1024 Mb). Energy is carried in joules.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Mbps per Gbps (binary).
pub const MBPS_PER_GBPS: f64 = 1024.0;

/// Megabits in one gigabit (binary).
pub const MB_PER_GB: f64 = 1024.0;

pub fn gbps_to_mbps(gbps: f64) -> f64 {
    gbps * MBPS_PER_GBPS
}

pub fn mbps_to_gbps(mbps: f64) -> f64 {
    mbps / MBPS_PER_GBPS
}

/// Presentation unit for energy figures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum EnergyUnit {
    #[default]
    #[serde(rename = "J")]
    Joule,
    #[serde(rename = "Wh")]
    WattHour,
    #[serde(rename = "kcal")]
    KilocalorieTh,
    #[serde(rename = "BTU")]
    Btu,
}

const WH_PER_J: f64 = 0.000278;
const J_PER_KCAL_TH: f64 = 4184.0;
const J_PER_BTU: f64 = 1055.06;

impl EnergyUnit {
    pub fn from_joules(self, joules: f64) -> f64 {
        match self {
            EnergyUnit::Joule => joules,
            EnergyUnit::WattHour => joules * WH_PER_J,
            EnergyUnit::KilocalorieTh => joules / J_PER_KCAL_TH,
            EnergyUnit::Btu => joules / J_PER_BTU,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            EnergyUnit::Joule => "J",
            EnergyUnit::WattHour => "Wh",
            EnergyUnit::KilocalorieTh => "kcal",
            EnergyUnit::Btu => "BTU",
        }
    }

    /// Decimal places used when printing a value in this unit.
    pub fn decimals(self) -> usize {
        match self {
            EnergyUnit::Joule => 1,
            EnergyUnit::WattHour | EnergyUnit::KilocalorieTh => 4,
            EnergyUnit::Btu => 3,
        }
    }
}

impl fmt::Display for EnergyUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for EnergyUnit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "J" | "j" => Ok(EnergyUnit::Joule),
            "Wh" | "wh" => Ok(EnergyUnit::WattHour),
            "kcal" => Ok(EnergyUnit::KilocalorieTh),
            "BTU" | "btu" => Ok(EnergyUnit::Btu),
            other => Err(format!(
                "unknown energy unit `{other}` (expected J, Wh, kcal or BTU)"
            )),
        }
    }
}

/// Round half away from zero to `decimals` places.
pub fn round_to(value: f64, decimals: usize) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    (value * scale).round() / scale
}
