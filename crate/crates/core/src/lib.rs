// SPDX-License-Identifier: Apache-2.0

//! Planning engine for metro-access broadband networks.
//!
//! The crate answers four questions for every combination of access
//! technology, service scenario, video codec and non-functional enhancement:
//!
//! * can the optical tree reach the homes at the required split ([`catalog`]),
//! * is the downstream service deliverable ([`feasibility`]),
//! * what is the differential energy per Gb downloaded ([`energy`]),
//! * what would a best-practice-skewed electricity tariff cost ([`pricing`]).
//!
//! [`microreg`] simulates the stream aggregation that motivates the
//! stream-cap model used by the first scenario. [`config`] loads the JSON
//! overrides accepted by the command-line front end.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod config;
pub mod energy;
pub mod feasibility;
pub mod microreg;
pub mod pricing;
pub mod units;

pub use catalog::{
    builtin_catalog, builtin_encodings, max_supported_split, reach_km, Codec, EncodingProfile,
    Grade, Resolution, SplitCeiling, SplitPlan, TechKind, TechnologySpec,
};
pub use config::{Config, ConfigError, Model};
pub use energy::{EnergyCoefficients, PowerParams};
pub use feasibility::{Enhancements, FeasibilityCell, NonFunctionalModel, Scenario, Violation};
pub use microreg::{AggregationResult, MicroRegConfig, ViewerRequest};
pub use pricing::PricingParams;
