// SPDX-License-Identifier: Apache-2.0

//! Micro-registration: asynchronous video-start requests are held until the
//! next synchronization boundary so that every request landing in the same
//! slot shares one stream through the metro bottleneck.
//!
//! Requests snap forward (a viewer waits at most one interval and never
//! skips content). Slot `k` opens at `k · sync_interval`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MicroRegError {
    #[error("{0:?} micro-registration is not supported")]
    Unsupported(RegistrationPolicy),
    #[error("invalid micro-registration config: {0}")]
    InvalidConfig(String),
    #[error("request arrival {arrival} outside window [0, {window})")]
    ArrivalOutsideWindow { arrival: f64, window: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ViewerRequest {
    /// Seconds from the window start.
    pub arrival: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegistrationPolicy {
    /// Snap to the next boundary.
    #[default]
    Immediate,
    /// Not modeled.
    Delayed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArrivalProcess {
    /// Independent uniform arrivals over the window.
    #[default]
    Uniform,
    /// Exponential inter-arrival gaps, rescaled so that exactly `n` arrivals
    /// fall in the window. Returned sorted.
    Poisson,
}

impl fmt::Display for ArrivalProcess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArrivalProcess::Uniform => "uniform",
            ArrivalProcess::Poisson => "poisson",
        })
    }
}

impl FromStr for ArrivalProcess {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(ArrivalProcess::Uniform),
            "poisson" => Ok(ArrivalProcess::Poisson),
            _ => Err(format!(
                "unknown arrival process `{s}` (expected uniform or poisson)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MicroRegConfig {
    /// Seconds.
    pub sync_interval: f64,
    /// Seconds.
    pub window: f64,
    /// Mbps per stream.
    pub stream_bitrate: f64,
    pub rng_seed: u64,
    #[serde(default)]
    pub policy: RegistrationPolicy,
}

impl Default for MicroRegConfig {
    fn default() -> Self {
        Self {
            sync_interval: 5.0,
            window: 1800.0,
            stream_bitrate: 5.0,
            rng_seed: 0,
            policy: RegistrationPolicy::Immediate,
        }
    }
}

impl MicroRegConfig {
    pub fn validate(&self) -> Result<(), MicroRegError> {
        if !(self.sync_interval > 0.0 && self.sync_interval.is_finite()) {
            return Err(MicroRegError::InvalidConfig(
                "sync_interval must be positive".into(),
            ));
        }
        if !(self.window > 0.0 && self.window.is_finite()) {
            return Err(MicroRegError::InvalidConfig(
                "window must be positive".into(),
            ));
        }
        if !(self.stream_bitrate >= 0.0) {
            return Err(MicroRegError::InvalidConfig(
                "stream_bitrate must be non-negative".into(),
            ));
        }
        Ok(())
    }

    /// Number of slot boundaries strictly after t = 0 up to the window end.
    pub fn slot_count(&self) -> u64 {
        (self.window / self.sync_interval).ceil() as u64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregationResult {
    pub active_streams: u64,
    /// Slot index per request, in request order.
    pub assignments: Vec<u64>,
    /// Seconds.
    pub max_wait: f64,
    /// Mbps.
    pub aggregate_bandwidth: f64,
    /// Filled in by [`AggregationResult::with_reference`].
    pub savings_vs_capacity: Option<f64>,
}

impl AggregationResult {
    pub fn with_reference(mut self, reference_capacity: f64) -> Self {
        self.savings_vs_capacity = Some(bandwidth_savings(&self, reference_capacity));
        self
    }
}

/// Draws `n` arrivals in `[0, window)`, deterministic for a given seed.
pub fn generate_arrivals(
    n: usize,
    window: f64,
    process: ArrivalProcess,
    seed: u64,
) -> Vec<ViewerRequest> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match process {
        ArrivalProcess::Uniform => (0..n)
            .map(|_| ViewerRequest {
                arrival: rng.random_range(0.0..window),
            })
            .collect(),
        ArrivalProcess::Poisson => {
            // n + 1 gaps; the last one closes the window
            let gaps: Vec<f64> = (0..=n).map(|_| Exp1.sample(&mut rng)).collect();
            let total: f64 = gaps.iter().sum();
            let mut t = 0.0;
            gaps[..n]
                .iter()
                .map(|g| {
                    t += g;
                    let arrival = (t / total * window).min(prev_float(window));
                    ViewerRequest { arrival }
                })
                .collect()
        }
    }
}

fn prev_float(x: f64) -> f64 {
    f64::from_bits(x.to_bits() - 1)
}

/// Coalesces requests into one stream per occupied synchronization slot.
pub fn aggregate_streams(
    requests: &[ViewerRequest],
    config: &MicroRegConfig,
) -> Result<AggregationResult, MicroRegError> {
    config.validate()?;
    if config.policy != RegistrationPolicy::Immediate {
        return Err(MicroRegError::Unsupported(config.policy));
    }
    let interval = config.sync_interval;
    let mut assignments = Vec::with_capacity(requests.len());
    let mut slots = BTreeSet::new();
    let mut max_wait: f64 = 0.0;
    for r in requests {
        if !(r.arrival >= 0.0 && r.arrival < config.window) {
            return Err(MicroRegError::ArrivalOutsideWindow {
                arrival: r.arrival,
                window: config.window,
            });
        }
        let slot = (r.arrival / interval).ceil() as u64;
        // rounding in the division can put the boundary a hair before the arrival
        let wait = (slot as f64 * interval - r.arrival).max(0.0);
        max_wait = max_wait.max(wait);
        slots.insert(slot);
        assignments.push(slot);
    }
    let active_streams = slots.len() as u64;
    Ok(AggregationResult {
        active_streams,
        assignments,
        max_wait,
        aggregate_bandwidth: active_streams as f64 * config.stream_bitrate,
        savings_vs_capacity: None,
    })
}

/// Fraction of `reference_capacity` left unused; negative when the aggregate
/// exceeds it.
pub fn bandwidth_savings(result: &AggregationResult, reference_capacity: f64) -> f64 {
    assert!(
        reference_capacity > 0.0,
        "reference capacity must be positive"
    );
    1.0 - result.aggregate_bandwidth / reference_capacity
}
