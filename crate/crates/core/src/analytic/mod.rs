//! First-order offloading model.
//!
//! A placement is viable when every demand it places on the infrastructure
//! fits within the matching capacity:
//!
//! * processing locally: `T_proc(endpoint) * R <= C_e * Q_e`
//! * offloading to a worker serving `E` endpoints:
//!   - `T_proc(worker) * R * E <= C_o * Q_o` (worker capacity)
//!   - `T_pre * R <= C_e * Q_e` (preprocessing on the endpoint)
//!   - `R * S <= B` (link bandwidth)
//!
//! Demand equal to capacity is viable; only strictly greater demand fails.

mod heatmap;
mod placement;

use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::config::Tier;
use crate::topology::{capacity_of, demand_on_worker, Device, Link};
use crate::workload::{WorkloadError, WorkloadProfile};

pub use heatmap::{heatmap, reference_markers, HeatmapGrid, HeatmapSpec, Marker, MarkerResult};
pub use placement::{
    classify, evaluate_placements, OffloadTarget, Placement, PlacementClass, PlacementFamily, PlacementPolicy,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error(transparent)]
    Workload(#[from] WorkloadError),
    #[error("offloading between endpoints has no slot in the cloud/edge/endpoint family")]
    PeerOffload,
    #[error("invalid heatmap grid: {0}")]
    InvalidGrid(String),
    #[error("placement policy must order endpoint, edge and cloud exactly once each")]
    InvalidPolicy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    WorkerCapacity,
    PreprocessCapacity,
    Bandwidth,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::WorkerCapacity => "worker-capacity",
            Condition::PreprocessCapacity => "preprocess-capacity",
            Condition::Bandwidth => "bandwidth",
        })
    }
}

/// Demand as a percentage of capacity. Serialized as a number, or as the
/// string `"unbounded"` when positive demand meets zero capacity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SystemLoad {
    Percent(f64),
    Unbounded,
}

impl SystemLoad {
    /// The load as a float; `f64::INFINITY` when unbounded.
    pub fn value(self) -> f64 {
        match self {
            SystemLoad::Percent(p) => p,
            SystemLoad::Unbounded => f64::INFINITY,
        }
    }

    pub fn exceeds_capacity(self) -> bool {
        self.value() > 100.0
    }
}

impl fmt::Display for SystemLoad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemLoad::Percent(p) => write!(f, "{p:.2}%"),
            SystemLoad::Unbounded => f.write_str("unbounded"),
        }
    }
}

impl Serialize for SystemLoad {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            SystemLoad::Percent(p) => s.serialize_f64(*p),
            SystemLoad::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

impl<'de> Deserialize<'de> for SystemLoad {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = SystemLoad;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a percentage or \"unbounded\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<SystemLoad, E> {
                Ok(SystemLoad::Percent(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<SystemLoad, E> {
                Ok(SystemLoad::Percent(v as f64))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<SystemLoad, E> {
                Ok(SystemLoad::Percent(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<SystemLoad, E> {
                if v == "unbounded" {
                    Ok(SystemLoad::Unbounded)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// `demand / capacity * 100`, with zero demand always at 0%.
pub fn system_load(demand: f64, capacity: f64) -> SystemLoad {
    if demand == 0.0 {
        SystemLoad::Percent(0.0)
    } else if capacity <= 0.0 {
        SystemLoad::Unbounded
    } else {
        SystemLoad::Percent(demand / capacity * 100.0)
    }
}

/// One inequality of the model, evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub condition: Condition,
    /// Core-seconds per second, or Mbit/s for the bandwidth check.
    pub demand: f64,
    pub capacity: f64,
    pub passed: bool,
}

impl ConditionCheck {
    fn new(condition: Condition, demand: f64, capacity: f64) -> Self {
        Self { condition, demand, capacity, passed: demand <= capacity }
    }

    pub fn load(&self) -> SystemLoad {
        system_load(self.demand, self.capacity)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub viable: bool,
    pub failed_conditions: Vec<Condition>,
    /// Load at the processing location.
    pub load_percent: SystemLoad,
    /// Mbit/s each endpoint sends; zero when nothing leaves the endpoint.
    pub required_bandwidth: f64,
    pub checks: Vec<ConditionCheck>,
}

impl Verdict {
    fn from_checks(checks: Vec<ConditionCheck>, required_bandwidth: f64) -> Self {
        let failed_conditions: Vec<Condition> = checks.iter().filter(|c| !c.passed).map(|c| c.condition).collect();
        let load_percent = checks
            .iter()
            .find(|c| c.condition == Condition::WorkerCapacity)
            .map(ConditionCheck::load)
            .expect("worker capacity is always checked");
        Self { viable: failed_conditions.is_empty(), failed_conditions, load_percent, required_bandwidth, checks }
    }

    pub fn check(&self, condition: Condition) -> Option<&ConditionCheck> {
        self.checks.iter().find(|c| c.condition == condition)
    }
}

/// Can the endpoint keep up with its own data?
pub fn local_viability(workload: &WorkloadProfile, endpoint: &Device) -> Result<Verdict, WorkloadError> {
    let demand = demand_on_worker(workload, Tier::Endpoint, 1)?;
    let check = ConditionCheck::new(Condition::WorkerCapacity, demand, capacity_of(endpoint));
    Ok(Verdict::from_checks(vec![check], 0.0))
}

/// Can `target`, serving `endpoints` endpoints over `link`, take the work?
///
/// All three conditions are evaluated and every failing one is reported.
pub fn offload_viability(
    workload: &WorkloadProfile,
    endpoint: &Device,
    target: &Device,
    endpoints: u32,
    link: &Link,
) -> Result<Verdict, WorkloadError> {
    let worker = ConditionCheck::new(
        Condition::WorkerCapacity,
        demand_on_worker(workload, target.tier, endpoints)?,
        capacity_of(target),
    );
    let preprocess =
        ConditionCheck::new(Condition::PreprocessCapacity, workload.pre_time * workload.rate, capacity_of(endpoint));
    let data_rate = workload.data_rate();
    let bandwidth = ConditionCheck::new(Condition::Bandwidth, data_rate, link.bandwidth_mbps);
    Ok(Verdict::from_checks(vec![worker, preprocess, bandwidth], data_rate))
}
