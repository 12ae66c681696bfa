// SPDX-License-Identifier: Apache-2.0

//! Built-in technology and codec data, split plans and the optical reach model.

use crate::units::gbps_to_mbps;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Loss per two-way split stage, in dB.
pub const SPLIT_LOSS_DB_PER_DOUBLING: f64 = 3.5;

/// Fiber patching margin used when a technology does not set its own.
pub const DEFAULT_PATCH_MARGIN_DB: f64 = 3.0;

/// Total splits probed when looking for a technology's split ceiling.
pub const DEFAULT_SPLIT_CANDIDATES: [u32; 5] = [64, 128, 256, 512, 1024];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("split losses exhaust the optical budget of {label} at S={split}")]
    NotReachable { label: String, split: u64 },
    #[error("invalid split plan: {0}")]
    InvalidSplit(String),
    #[error("invalid technology {label}: {reason}")]
    InvalidTechnology { label: String, reason: String },
    #[error("invalid encoding profile: {0}")]
    InvalidEncoding(String),
}

/// Per-level split factors of a multi-level PON tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SplitPlan {
    levels: Vec<u32>,
    total: u64,
}

impl SplitPlan {
    pub fn new(levels: Vec<u32>) -> Result<Self, CatalogError> {
        if levels.is_empty() {
            return Err(CatalogError::InvalidSplit(
                "at least one level required".into(),
            ));
        }
        if let Some(bad) = levels.iter().find(|&&s| s == 0) {
            return Err(CatalogError::InvalidSplit(format!(
                "split factor {bad} < 1"
            )));
        }
        let total = levels
            .iter()
            .try_fold(1u64, |acc, &s| acc.checked_mul(u64::from(s)))
            .ok_or_else(|| CatalogError::InvalidSplit("total split overflows".into()))?;
        Ok(Self { levels, total })
    }

    /// Single-level plan with the given total split.
    pub fn single(total: u32) -> Result<Self, CatalogError> {
        Self::new(vec![total])
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Splitter loss summed level by level, in dB.
    pub fn loss_db(&self) -> f64 {
        self.levels
            .iter()
            .map(|&s| SPLIT_LOSS_DB_PER_DOUBLING * f64::from(s).log2())
            .sum()
    }
}

impl fmt::Display for SplitPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.levels.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TechKind {
    Copper,
    Pon,
}

/// One access technology.
///
/// Capacities are in Mbps (binary prefixes), budgets in dB, attenuation in
/// dB/km. `per_line_limit = None` means the per-home line is not a constraint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TechnologySpec {
    pub label: String,
    pub name: String,
    pub ds_capacity: f64,
    pub us_capacity: f64,
    #[serde(default)]
    pub optical_budget: Option<f64>,
    #[serde(default)]
    pub attenuation: Option<f64>,
    #[serde(default = "default_patch_margin")]
    pub patch_margin: f64,
    #[serde(default)]
    pub per_line_limit: Option<f64>,
    pub kind: TechKind,
    #[serde(default)]
    pub fixed_reach: Option<f64>,
}

fn default_patch_margin() -> f64 {
    DEFAULT_PATCH_MARGIN_DB
}

impl TechnologySpec {
    pub fn pon(label: &str, name: &str, ds_gbps: f64, us_gbps: f64, ob: f64, alpha: f64) -> Self {
        Self {
            label: label.into(),
            name: name.into(),
            ds_capacity: gbps_to_mbps(ds_gbps),
            us_capacity: gbps_to_mbps(us_gbps),
            optical_budget: Some(ob),
            attenuation: Some(alpha),
            patch_margin: DEFAULT_PATCH_MARGIN_DB,
            per_line_limit: None,
            kind: TechKind::Pon,
            fixed_reach: None,
        }
    }

    pub fn validate(&self) -> Result<(), CatalogError> {
        let bad = |reason: &str| {
            Err(CatalogError::InvalidTechnology {
                label: self.label.clone(),
                reason: reason.into(),
            })
        };
        if self.label.is_empty() {
            return bad("empty label");
        }
        if !(self.ds_capacity > 0.0 && self.us_capacity > 0.0) {
            return bad("capacities must be positive");
        }
        if self.per_line_limit.is_some_and(|l| l <= 0.0) {
            return bad("per_line_limit must be positive");
        }
        match self.kind {
            TechKind::Pon => match (self.optical_budget, self.attenuation) {
                (Some(_), Some(a)) if a > 0.0 => {}
                (Some(_), Some(_)) => return bad("attenuation must be positive"),
                _ => return bad("pon technologies need optical_budget and attenuation"),
            },
            TechKind::Copper => match self.fixed_reach {
                Some(r) if r > 0.0 => {}
                _ => return bad("copper technologies need a positive fixed_reach"),
            },
        }
        if self.patch_margin < 0.0 {
            return bad("patch_margin must be non-negative");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Codec {
    #[serde(rename = "AVC")]
    Avc,
    #[serde(rename = "HEVC")]
    Hevc,
}

impl Codec {
    pub const ALL: [Codec; 2] = [Codec::Avc, Codec::Hevc];

    pub fn as_str(self) -> &'static str {
        match self {
            Codec::Avc => "AVC",
            Codec::Hevc => "HEVC",
        }
    }
}

impl fmt::Display for Codec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Codec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "AVC" | "H264" | "H.264" => Ok(Codec::Avc),
            "HEVC" | "H265" | "H.265" => Ok(Codec::Hevc),
            _ => Err(format!("unknown codec `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Resolution {
    #[serde(rename = "HD")]
    Hd,
    #[serde(rename = "4K")]
    Uhd4k,
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Resolution::Hd => "HD",
            Resolution::Uhd4k => "4K",
        })
    }
}

/// Quality grade of a codec operating point (the low grade is the best
/// compression performance).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grade {
    Low,
    High,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EncodingProfile {
    pub codec: Codec,
    pub resolution: Resolution,
    pub grade: Grade,
    /// Mbps.
    pub bitrate: f64,
}

impl EncodingProfile {
    pub fn new(codec: Codec, resolution: Resolution, grade: Grade, bitrate: f64) -> Self {
        Self {
            codec,
            resolution,
            grade,
            bitrate,
        }
    }

    pub fn validate(&self) -> Result<(), CatalogError> {
        if self.bitrate > 0.0 && self.bitrate.is_finite() {
            Ok(())
        } else {
            Err(CatalogError::InvalidEncoding(format!(
                "{} {} bitrate must be positive",
                self.codec, self.resolution
            )))
        }
    }
}

/// Legacy HD bitrate used for the narrative Sc1/Sc2 totals, in Mbps.
pub const LEGACY_HD_BITRATE: f64 = 5.26;

/// The legacy 5.26 Mbps HD AVC operating point. Not part of
/// [`builtin_encodings`]; the tables use the low-grade entries.
pub fn legacy_hd_encoding() -> EncodingProfile {
    EncodingProfile::new(Codec::Avc, Resolution::Hd, Grade::Low, LEGACY_HD_BITRATE)
}

pub fn builtin_catalog() -> Vec<TechnologySpec> {
    let ta = TechnologySpec {
        label: "Ta".into(),
        name: "OC-48".into(),
        ds_capacity: gbps_to_mbps(2.49),
        us_capacity: gbps_to_mbps(2.49),
        optical_budget: None,
        attenuation: None,
        patch_margin: DEFAULT_PATCH_MARGIN_DB,
        // ADSL/VDSL drop: 7/3 Mbps DS/US
        per_line_limit: Some(7.0),
        kind: TechKind::Copper,
        fixed_reach: Some(4.5),
    };
    vec![
        ta,
        TechnologySpec::pon("Tb", "GPON B+", 2.5, 1.25, 28.0, 0.6),
        // GEM and BI sub-variants share every parameter
        TechnologySpec::pon("Tc", "40G TDM PON", 40.0, 10.0, 31.0, 0.6),
        TechnologySpec::pon("Td", "TWDM", 40.0, 10.0, 35.0, 0.4),
        TechnologySpec::pon("Te", "OFDM", 40.0, 10.0, 34.5, 0.6),
    ]
}

pub fn builtin_encodings() -> Vec<EncodingProfile> {
    use Codec::*;
    use Grade::*;
    use Resolution::*;
    vec![
        EncodingProfile::new(Avc, Hd, Low, 6.0),
        EncodingProfile::new(Hevc, Hd, High, 4.9),
        EncodingProfile::new(Hevc, Hd, Low, 3.0),
        EncodingProfile::new(Avc, Uhd4k, Low, 16.0),
        EncodingProfile::new(Hevc, Uhd4k, High, 20.0),
        EncodingProfile::new(Hevc, Uhd4k, Low, 8.0),
    ]
}

/// Looks up the profile for a codec, resolution and grade.
pub fn find_encoding(
    encodings: &[EncodingProfile],
    codec: Codec,
    resolution: Resolution,
    grade: Grade,
) -> Option<&EncodingProfile> {
    encodings
        .iter()
        .find(|e| e.codec == codec && e.resolution == resolution && e.grade == grade)
}

/// Maximum reach in km of `tech` with the given split plan.
///
/// Copper technologies return their fixed reach regardless of the split.
/// A PON whose remaining budget after margin and split losses is zero or
/// negative is [`CatalogError::NotReachable`].
pub fn reach_km(tech: &TechnologySpec, split: &SplitPlan) -> Result<f64, CatalogError> {
    match tech.kind {
        TechKind::Copper => tech
            .fixed_reach
            .ok_or_else(|| CatalogError::InvalidTechnology {
                label: tech.label.clone(),
                reason: "copper technology without fixed_reach".into(),
            }),
        TechKind::Pon => {
            let (ob, alpha) = match (tech.optical_budget, tech.attenuation) {
                (Some(ob), Some(alpha)) => (ob, alpha),
                _ => {
                    return Err(CatalogError::InvalidTechnology {
                        label: tech.label.clone(),
                        reason: "pon technology without optical_budget/attenuation".into(),
                    })
                }
            };
            let budget = ob - tech.patch_margin - split.loss_db();
            if budget <= 0.0 {
                return Err(CatalogError::NotReachable {
                    label: tech.label.clone(),
                    split: split.total(),
                });
            }
            Ok(budget / alpha)
        }
    }
}

/// Split ceiling of a technology over a candidate set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitCeiling {
    /// Split does not apply (copper drop lines).
    Unlimited,
    Limited(u32),
    /// None of the candidates is reachable.
    Unreachable,
}

impl SplitCeiling {
    /// Whether a tree with total split `split` is supported.
    pub fn supports(self, split: u32) -> bool {
        match self {
            SplitCeiling::Unlimited => true,
            SplitCeiling::Limited(max) => split <= max,
            SplitCeiling::Unreachable => false,
        }
    }
}

impl fmt::Display for SplitCeiling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitCeiling::Unlimited => f.write_str("unlimited"),
            SplitCeiling::Limited(s) => write!(f, "{s}"),
            SplitCeiling::Unreachable => f.write_str("none"),
        }
    }
}

/// Largest candidate total split with a positive reach.
///
/// `candidates` must be sorted ascending.
pub fn max_supported_split(tech: &TechnologySpec, candidates: &[u32]) -> SplitCeiling {
    if tech.kind == TechKind::Copper {
        return SplitCeiling::Unlimited;
    }
    debug_assert!(candidates.windows(2).all(|w| w[0] <= w[1]));
    candidates
        .iter()
        .rev()
        .find(|&&s| {
            SplitPlan::single(s)
                .ok()
                .and_then(|plan| reach_km(tech, &plan).ok())
                .is_some()
        })
        .map_or(SplitCeiling::Unreachable, |&s| SplitCeiling::Limited(s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tech(label: &str) -> TechnologySpec {
        builtin_catalog()
            .into_iter()
            .find(|t| t.label == label)
            .unwrap()
    }

    fn plan(levels: &[u32]) -> SplitPlan {
        SplitPlan::new(levels.to_vec()).unwrap()
    }

    #[test]
    fn catalog_entries() {
        let cat = builtin_catalog();
        assert_eq!(cat.len(), 5);
        let labels: Vec<_> = cat.iter().map(|t| t.label.as_str()).collect();
        assert_eq!(labels, ["Ta", "Tb", "Tc", "Td", "Te"]);
        for t in &cat {
            t.validate().unwrap();
        }
        let tb = tech("Tb");
        assert_eq!(tb.optical_budget, Some(28.0));
        assert_eq!(tb.attenuation, Some(0.6));
        assert_eq!(tb.us_capacity, 1280.0);
        let td = tech("Td");
        assert_eq!(td.ds_capacity, 40.0 * 1024.0);
        assert_eq!(td.optical_budget, Some(35.0));
        let ta = tech("Ta");
        assert_eq!(ta.per_line_limit, Some(7.0));
        assert_eq!(ta.fixed_reach, Some(4.5));
        assert_eq!(ta.kind, TechKind::Copper);
    }

    #[test]
    fn encoding_entries() {
        let enc = builtin_encodings();
        assert_eq!(enc.len(), 6);
        let get = |c, r, g| find_encoding(&enc, c, r, g).unwrap().bitrate;
        assert_eq!(get(Codec::Hevc, Resolution::Hd, Grade::Low), 3.0);
        assert_eq!(get(Codec::Avc, Resolution::Uhd4k, Grade::Low), 16.0);
        assert_eq!(get(Codec::Hevc, Resolution::Uhd4k, Grade::High), 20.0);
        assert_eq!(get(Codec::Hevc, Resolution::Hd, Grade::High), 4.9);
        for res in [Resolution::Hd, Resolution::Uhd4k] {
            assert!(get(Codec::Hevc, res, Grade::Low) <= get(Codec::Avc, res, Grade::Low));
        }
    }

    #[test]
    fn reach_examples() {
        assert!((reach_km(&tech("Td"), &plan(&[8, 8])).unwrap() - 27.5).abs() < 1e-12);
        let tb = reach_km(&tech("Tb"), &plan(&[8, 16])).unwrap();
        assert!((tb - 0.8333).abs() < 1e-3);
        assert!(matches!(
            reach_km(&tech("Tb"), &plan(&[16, 16])),
            Err(CatalogError::NotReachable { split: 256, .. })
        ));
        let tc = tech("Tc");
        assert!((reach_km(&tc, &plan(&[1])).unwrap() - (31.0 - 3.0) / 0.6).abs() < 1e-12);
    }

    #[test]
    fn zero_budget_is_not_reachable() {
        // 31 - 3 - 28 = 0
        assert!(reach_km(&tech("Tc"), &plan(&[16, 16])).is_err());
        // 34.5 - 3 - 31.5 = 0
        assert!(reach_km(&tech("Te"), &plan(&[32, 16])).is_err());
    }

    #[test]
    fn copper_ignores_split() {
        let ta = tech("Ta");
        assert_eq!(reach_km(&ta, &plan(&[32, 16])).unwrap(), 4.5);
        assert_eq!(
            max_supported_split(&ta, &DEFAULT_SPLIT_CANDIDATES),
            SplitCeiling::Unlimited
        );
    }

    #[test]
    fn split_ceilings() {
        let c = &DEFAULT_SPLIT_CANDIDATES;
        assert_eq!(
            max_supported_split(&tech("Tb"), c),
            SplitCeiling::Limited(128)
        );
        assert_eq!(
            max_supported_split(&tech("Tc"), c),
            SplitCeiling::Limited(128)
        );
        assert_eq!(
            max_supported_split(&tech("Td"), c),
            SplitCeiling::Limited(512)
        );
        assert_eq!(
            max_supported_split(&tech("Te"), c),
            SplitCeiling::Limited(256)
        );
        assert_eq!(
            max_supported_split(&tech("Tb"), &[256, 512]),
            SplitCeiling::Unreachable
        );
    }

    #[test]
    fn invalid_inputs() {
        assert!(SplitPlan::new(vec![]).is_err());
        assert!(SplitPlan::new(vec![8, 0]).is_err());
        let mut t = tech("Tb");
        t.attenuation = None;
        assert!(t.validate().is_err());
        let mut t = tech("Ta");
        t.fixed_reach = None;
        assert!(t.validate().is_err());
        let mut t = tech("Td");
        t.ds_capacity = 0.0;
        assert!(t.validate().is_err());
    }

    #[test]
    fn user_plans_accept_non_powers_of_two() {
        let p = plan(&[3, 5]);
        assert_eq!(p.total(), 15);
        assert!((p.loss_db() - 3.5 * 15f64.log2()).abs() < 1e-12);
        assert_eq!(p.to_string(), "(3, 5)");
    }
}
