// SPDX-License-Identifier: Apache-2.0

//! Report building and rendering behind the `accessplan` binary.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod app;
pub mod render;
pub mod report;

use accessplan_core::catalog::CatalogError;
use accessplan_core::energy::EnergyError;
use accessplan_core::feasibility::FeasibilityError;
use accessplan_core::microreg::MicroRegError;
use accessplan_core::pricing::PricingError;
use accessplan_core::ConfigError;
use thiserror::Error;

pub use render::{render, Format, Render};

/// Exit status for a what-if whose cell is infeasible.
pub const EXIT_INFEASIBLE: u8 = 1;
/// Exit status for usage, configuration and lookup errors.
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("bad config: {0}")]
    BadConfig(#[from] ConfigError),
    #[error("unknown {0}")]
    UnknownIdentifier(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Feasibility(#[from] FeasibilityError),
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error(transparent)]
    MicroReg(#[from] MicroRegError),
    #[error(transparent)]
    Pricing(#[from] PricingError),
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        EXIT_USAGE
    }
}
