// SPDX-License-Identifier: Apache-2.0

//! JSON configuration overriding or extending the built-in data.
//!
//! Every array entry whose key (technology label, scenario id, or
//! codec/resolution/grade triple for encodings) matches a built-in replaces
//! it; new keys are appended. `split_candidates` replaces the default list.
//! Unknown fields are rejected.

use crate::catalog::{
    builtin_catalog, builtin_encodings, CatalogError, EncodingProfile, TechnologySpec,
    DEFAULT_SPLIT_CANDIDATES,
};
use crate::energy::{builtin_coefficients, builtin_power_params, EnergyCoefficients, PowerParams};
use crate::feasibility::{builtin_scenarios, FeasibilityError, Scenario};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported schema_version {0} (expected {SCHEMA_VERSION})")]
    UnsupportedSchema(u32),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Scenario(#[from] FeasibilityError),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema_version: u32,
    #[serde(default)]
    pub technologies: Vec<TechnologySpec>,
    #[serde(default)]
    pub encodings: Vec<EncodingProfile>,
    #[serde(default)]
    pub split_candidates: Option<Vec<u32>>,
    #[serde(default)]
    pub scenarios: Vec<Scenario>,
    #[serde(default)]
    pub coefficients: BTreeMap<String, EnergyCoefficients>,
    #[serde(default)]
    pub power_params: BTreeMap<String, PowerParams>,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: Config = serde_json::from_str(text)?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(ConfigError::UnsupportedSchema(cfg.schema_version));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }
}

/// Everything the planners read: technologies, codecs, scenarios and energy
/// data.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub technologies: Vec<TechnologySpec>,
    pub encodings: Vec<EncodingProfile>,
    pub split_candidates: Vec<u32>,
    pub scenarios: Vec<Scenario>,
    pub coefficients: BTreeMap<String, EnergyCoefficients>,
    pub power_params: BTreeMap<String, PowerParams>,
}

impl Default for Model {
    fn default() -> Self {
        Self::builtin()
    }
}

fn merge_by_key<T, K: PartialEq>(base: &mut Vec<T>, overrides: Vec<T>, key: impl Fn(&T) -> K) {
    for item in overrides {
        match base.iter_mut().find(|b| key(b) == key(&item)) {
            Some(slot) => *slot = item,
            None => base.push(item),
        }
    }
}

impl Model {
    pub fn builtin() -> Self {
        Self {
            technologies: builtin_catalog(),
            encodings: builtin_encodings(),
            split_candidates: DEFAULT_SPLIT_CANDIDATES.to_vec(),
            scenarios: builtin_scenarios(),
            coefficients: builtin_coefficients(),
            power_params: builtin_power_params(),
        }
    }

    /// Built-ins with `config` applied on top, validated.
    pub fn with_config(config: Config) -> Result<Self, ConfigError> {
        let mut model = Self::builtin();
        merge_by_key(&mut model.technologies, config.technologies, |t| {
            t.label.clone()
        });
        merge_by_key(&mut model.encodings, config.encodings, |e| {
            (e.codec, e.resolution, e.grade)
        });
        merge_by_key(&mut model.scenarios, config.scenarios, |s| s.id.clone());
        if let Some(c) = config.split_candidates {
            model.split_candidates = c;
        }
        model.coefficients.extend(config.coefficients);
        model.power_params.extend(config.power_params);
        model.validate()?;
        Ok(model)
    }

    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        match path {
            Some(p) => Self::with_config(Config::load(p)?),
            None => Ok(Self::builtin()),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for t in &self.technologies {
            t.validate()?;
        }
        for e in &self.encodings {
            e.validate()?;
        }
        for s in &self.scenarios {
            s.validate()?;
        }
        if self.split_candidates.is_empty() || self.split_candidates.contains(&0) {
            return Err(ConfigError::Invalid(
                "split_candidates must be a non-empty list of positive splits".into(),
            ));
        }
        if !self.split_candidates.windows(2).all(|w| w[0] < w[1]) {
            return Err(ConfigError::Invalid(
                "split_candidates must be strictly ascending".into(),
            ));
        }
        for (label, c) in &self.coefficients {
            if !(c.a_delta > 0.0 && c.b_delta >= 0.0) {
                return Err(ConfigError::Invalid(format!(
                    "coefficients for {label}: a_delta must be positive and b_delta non-negative"
                )));
            }
        }
        for (label, p) in &self.power_params {
            let powers = [p.p_olt_port, p.p_olt_user, Some(p.p_onu00), p.p_delta_olt0];
            if powers.into_iter().flatten().any(|w| w < 0.0) {
                return Err(ConfigError::Invalid(format!(
                    "power_params for {label}: negative power"
                )));
            }
            if p.onu_interp_high.bandwidth <= p.onu_interp_low.bandwidth {
                return Err(ConfigError::Invalid(format!(
                    "power_params for {label}: ONU anchors must be increasing in bandwidth"
                )));
            }
        }
        let mut labels: Vec<&str> = self.technologies.iter().map(|t| t.label.as_str()).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(ConfigError::Invalid("duplicate technology label".into()));
        }
        Ok(())
    }

    pub fn technology(&self, label: &str) -> Option<&TechnologySpec> {
        self.technologies
            .iter()
            .find(|t| t.label.eq_ignore_ascii_case(label))
    }

    pub fn scenario(&self, id: &str) -> Option<&Scenario> {
        self.scenarios
            .iter()
            .find(|s| s.id.eq_ignore_ascii_case(id))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::TechKind;

    #[test]
    fn empty_config_is_builtin() {
        let m = Model::with_config(Config::from_json(r#"{"schema_version": 1}"#).unwrap()).unwrap();
        assert_eq!(m, Model::builtin());
    }

    #[test]
    fn adds_a_technology_without_code_changes() {
        let text = r#"{
            "schema_version": 1,
            "technologies": [{
                "label": "Tf", "name": "DWDM-TDMA", "ds_capacity": 327680, "us_capacity": 327680,
                "optical_budget": 60.0, "attenuation": 0.2, "kind": "pon"
            }],
            "split_candidates": [64, 128, 256, 512, 1024, 2048, 4096, 8192]
        }"#;
        let m = Model::with_config(Config::from_json(text).unwrap()).unwrap();
        let tf = m.technology("Tf").unwrap();
        assert_eq!(tf.kind, TechKind::Pon);
        assert_eq!(tf.patch_margin, 3.0);
        assert_eq!(m.technologies.len(), 6);
        assert_eq!(m.split_candidates.len(), 8);
    }

    #[test]
    fn overrides_replace_builtins() {
        let text = r#"{"schema_version": 1,
            "encodings": [{"codec": "AVC", "resolution": "HD", "grade": "low", "bitrate": 5.26}],
            "coefficients": {"Tb": {"a_delta": 9216.0, "b_delta": 0.0}}}"#;
        let m = Model::with_config(Config::from_json(text).unwrap()).unwrap();
        assert_eq!(m.encodings.len(), 6);
        assert_eq!(m.encodings[0].bitrate, 5.26);
        assert_eq!(m.coefficients["Tb"].a_delta, 9216.0);
    }

    #[test]
    fn unknown_fields_rejected() {
        let err = Config::from_json(r#"{"schema_version": 1, "technologys": []}"#).unwrap_err();
        assert!(matches!(err, ConfigError::Parse(_)));
        let text = r#"{"schema_version": 1, "technologies": [{
            "label": "Tb", "name": "x", "ds_capacity": 1, "us_capacity": 1,
            "optical_budget": 28, "attenuation": 0.6, "kind": "pon", "atenuation": 1}]}"#;
        assert!(Config::from_json(text).is_err());
    }

    #[test]
    fn schema_version_checked() {
        assert!(matches!(
            Config::from_json(r#"{"schema_version": 2}"#),
            Err(ConfigError::UnsupportedSchema(2))
        ));
        assert!(Config::from_json("{}").is_err());
    }

    #[test]
    fn invalid_values_rejected() {
        let text = r#"{"schema_version": 1, "technologies": [{
            "label": "Tb", "name": "x", "ds_capacity": 1, "us_capacity": 1, "kind": "pon"}]}"#;
        assert!(Model::with_config(Config::from_json(text).unwrap()).is_err());
        let text = r#"{"schema_version": 1, "split_candidates": [256, 64]}"#;
        assert!(Model::with_config(Config::from_json(text).unwrap()).is_err());
    }

    #[test]
    fn lookup_is_case_insensitive() {
        let m = Model::builtin();
        assert_eq!(m.technology("td").unwrap().label, "Td");
        assert_eq!(m.scenario("sc3").unwrap().id, "Sc3");
        assert!(m.technology("Tz").is_none());
    }
}
