// SPDX-License-Identifier: Apache-2.0

//! Best Practice Delta Factor (BPDF) tariffs.
//!
//! A practice that needs `e_a` kWh where the best practice needs 1 kWh pays
//! for its excess at a rate skewed by the excess itself, so the total energy
//! cost grows with the square of the excess. A licence fee paid to the
//! best-practice holder virtually shrinks the excess.
//!
//! The holder's revenue `J(fee) = fee + c·K·Δ²/(1 + K·fee)` is convex in the
//! fee, so its stationary point is a minimum and the maximum over `[0, 1)`
//! sits on a boundary. [`optimize_fee`] reports both the grid argmax and the
//! analytic stationary point so that this is visible to callers.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Normalized price of one delivered service, $. Fees are expressed as a
/// fraction of it.
pub const SERVICE_PRICE: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PricingError {
    #[error("energy per service {0} kWh is below the best-practice baseline of 1 kWh")]
    BelowBaseline(f64),
    #[error("invalid pricing parameter: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PricingParams {
    /// kWh per service with the operator's practice.
    pub e_a: f64,
    /// Intensity factor.
    pub k: f64,
    /// $ per kWh.
    pub c_elec: f64,
    /// Licence fee per service, $ (< $1).
    pub fee: f64,
}

impl PricingParams {
    pub fn validate(&self) -> Result<(), PricingError> {
        delta(self.e_a)?;
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(PricingError::InvalidParams("K must be positive".into()));
        }
        if !(self.c_elec >= 0.0 && self.c_elec.is_finite()) {
            return Err(PricingError::InvalidParams(
                "electricity price must be non-negative".into(),
            ));
        }
        validate_fee(self.fee)
    }
}

fn validate_fee(fee: f64) -> Result<(), PricingError> {
    if (0.0..SERVICE_PRICE).contains(&fee) {
        Ok(())
    } else {
        Err(PricingError::InvalidParams(format!(
            "fee {fee} outside [0, 1)"
        )))
    }
}

/// Excess consumption over the best practice, kWh.
pub fn delta(e_a: f64) -> Result<f64, PricingError> {
    if e_a >= 1.0 && e_a.is_finite() {
        Ok(e_a - 1.0)
    } else {
        Err(PricingError::BelowBaseline(e_a))
    }
}

/// Excess after the licence-fee adjustment.
pub fn delta_bp(delta: f64, k: f64, fee: f64) -> f64 {
    delta / (1.0 + k * fee / SERVICE_PRICE)
}

/// Skewed price per kWh of excess: `K · Δ · c`. Pass either the plain or the
/// fee-adjusted excess.
pub fn bpdf_rate(k: f64, delta: f64, c_elec: f64) -> f64 {
    k * delta * c_elec
}

/// BPDF revenue on top of the plain tariff: `c·K·Δ²/(1 + K·fee)`.
fn differential_revenue(k: f64, delta: f64, c_elec: f64, fee: f64) -> f64 {
    k * delta * delta / (1.0 + k * fee / SERVICE_PRICE) * c_elec
}

/// Energy cost of one service, $.
pub fn total_cost(params: &PricingParams) -> Result<f64, PricingError> {
    params.validate()?;
    let d = delta(params.e_a)?;
    Ok(params.c_elec + differential_revenue(params.k, d, params.c_elec, params.fee))
}

/// Best-practice holder's revenue per service: fee plus all BPDF revenue.
pub fn holder_objective(params: &PricingParams) -> Result<f64, PricingError> {
    params.validate()?;
    let d = delta(params.e_a)?;
    Ok(params.fee + differential_revenue(params.k, d, params.c_elec, params.fee))
}

fn objective(k: f64, delta: f64, c_elec: f64, fee: f64) -> f64 {
    fee + differential_revenue(k, delta, c_elec, fee)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Diagnosis {
    Boundary,
    Interior,
}

impl fmt::Display for Diagnosis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Diagnosis::Boundary => "boundary",
            Diagnosis::Interior => "interior",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeeOptimum {
    pub fee_star: f64,
    pub j_star: f64,
    /// Stationary point of J in (0, 1), a minimum.
    pub interior_critical_point: Option<f64>,
    pub diagnosis: Diagnosis,
}

/// Fees searched: `i · grid_step` for every `i` with `i · grid_step < 1`.
pub fn fee_grid(grid_step: f64) -> impl Iterator<Item = f64> {
    let n = ((SERVICE_PRICE - grid_step) / grid_step + 1e-9).floor() as usize;
    (0..=n).map(move |i| i as f64 * grid_step)
}

/// Stationary point of J: `(K·Δ·√c − 1)/K`, when it lies in (0, 1).
pub fn stationary_fee(k: f64, delta: f64, c_elec: f64) -> Option<f64> {
    let f = (k * delta * c_elec.sqrt() - 1.0) / k;
    (f > 0.0 && f < SERVICE_PRICE).then_some(f)
}

/// Grid search for the fee maximizing the holder's revenue. Ties go to the
/// smaller fee.
pub fn optimize_fee(
    k: f64,
    delta: f64,
    c_elec: f64,
    grid_step: f64,
) -> Result<FeeOptimum, PricingError> {
    if !(grid_step > 0.0 && grid_step < SERVICE_PRICE) {
        return Err(PricingError::InvalidParams(
            "grid step must lie in (0, 1)".into(),
        ));
    }
    if !(k > 0.0) || !(delta >= 0.0) || !(c_elec >= 0.0) {
        return Err(PricingError::InvalidParams(
            "K > 0, Δ ≥ 0 and c ≥ 0 required".into(),
        ));
    }
    let mut best = (0.0, objective(k, delta, c_elec, 0.0));
    let mut last = 0.0;
    for fee in fee_grid(grid_step) {
        let j = objective(k, delta, c_elec, fee);
        if j > best.1 {
            best = (fee, j);
        }
        last = fee;
    }
    let diagnosis = if best.0 == 0.0 || best.0 == last {
        Diagnosis::Boundary
    } else {
        Diagnosis::Interior
    };
    Ok(FeeOptimum {
        fee_star: best.0,
        j_star: best.1,
        interior_critical_point: stationary_fee(k, delta, c_elec),
        diagnosis,
    })
}
