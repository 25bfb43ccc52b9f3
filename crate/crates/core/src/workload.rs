//! Per-element processing demands of an application.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::Tier;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WorkloadError {
    #[error("no processing time given for the {0} tier")]
    MissingProcTime(Tier),
    #[error("{field} must be a finite value >= 0, got {value}")]
    Negative { field: &'static str, value: f64 },
}

/// What one endpoint's data stream asks of the infrastructure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkloadProfile {
    /// Seconds of one full core needed to process a data element, per tier.
    pub proc_time: BTreeMap<Tier, f64>,
    /// Seconds of one full endpoint core needed to preprocess an element
    /// before it is offloaded.
    pub pre_time: f64,
    /// Elements generated per second per endpoint (Hz).
    pub rate: f64,
    /// Size of one element in Mbit.
    pub element_size: f64,
}

impl WorkloadProfile {
    pub fn new(proc_time: impl IntoIterator<Item = (Tier, f64)>, pre_time: f64, rate: f64, element_size: f64) -> Self {
        Self { proc_time: proc_time.into_iter().collect(), pre_time, rate, element_size }
    }

    /// The image-classification profile behind the worked examples:
    /// 0.11 s per element on an endpoint core, 0.14 s on edge and cloud
    /// cores, 1 ms preprocessing, 5 Hz, 0.54 Mbit per element (2.7 Mbit/s).
    ///
    /// No cloud figure was measured; the edge value stands in for it.
    pub fn reference() -> Self {
        Self::new([(Tier::Cloud, 0.14), (Tier::Edge, 0.14), (Tier::Endpoint, 0.11)], 0.001, 5.0, 0.54)
    }

    /// Data generated per second per endpoint, in Mbit/s.
    pub fn data_rate(&self) -> f64 {
        self.rate * self.element_size
    }

    pub fn proc_time_for(&self, tier: Tier) -> Result<f64, WorkloadError> {
        self.proc_time.get(&tier).copied().ok_or(WorkloadError::MissingProcTime(tier))
    }

    pub fn with_rate(mut self, rate: f64) -> Self {
        self.rate = rate;
        self
    }

    /// Multiplies every per-tier processing time by `factor`.
    pub fn with_proc_scale(mut self, factor: f64) -> Self {
        for t in self.proc_time.values_mut() {
            *t *= factor;
        }
        self
    }

    pub fn check(&self) -> Result<(), WorkloadError> {
        let nonneg = |field, value: f64| {
            if value >= 0.0 && value.is_finite() {
                Ok(())
            } else {
                Err(WorkloadError::Negative { field, value })
            }
        };
        for v in self.proc_time.values() {
            nonneg("proc_time", *v)?;
        }
        nonneg("pre_time", self.pre_time)?;
        nonneg("rate", self.rate)?;
        nonneg("element_size", self.element_size)
    }
}
