//! Concrete devices, links and endpoint-to-worker assignments derived from
//! a [`DeploymentConfig`], plus the capacity and demand arithmetic shared by
//! the analytic model and the simulator.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{validate, DeploymentConfig, Diagnostic, Tier, TierPair};
use crate::workload::{WorkloadError, WorkloadProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DeviceId(pub u32);

impl fmt::Display for DeviceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Worker,
    Controller,
    Source,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Device {
    pub id: DeviceId,
    pub tier: Tier,
    pub cores: u32,
    /// Fraction of each core available to the device.
    pub quota: f64,
    pub role: Role,
}

impl Device {
    /// A free-standing device, used when evaluating the model without a
    /// full topology.
    pub fn spec(tier: Tier, cores: u32, quota: f64) -> Self {
        Self { id: DeviceId(0), tier, cores, quota, role: Role::Worker }
    }

    pub fn capacity(&self) -> f64 {
        capacity_of(self)
    }
}

/// Core-seconds of work the device completes per wall-clock second.
pub fn capacity_of(device: &Device) -> f64 {
    f64::from(device.cores) * device.quota
}

/// Core-seconds per second that `endpoints` endpoints push onto one worker
/// in `tier`.
pub fn demand_on_worker(workload: &WorkloadProfile, tier: Tier, endpoints: u32) -> Result<f64, WorkloadError> {
    Ok(workload.proc_time_for(tier)? * workload.rate * f64::from(endpoints))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub from: Tier,
    pub to: Tier,
    pub latency_avg_ms: f64,
    pub latency_sd_ms: f64,
    pub bandwidth_mbps: f64,
}

impl Link {
    pub fn new(pair: TierPair, latency_avg_ms: f64, latency_sd_ms: f64, bandwidth_mbps: f64) -> Self {
        let (from, to) = pair.tiers();
        Self { from, to, latency_avg_ms, latency_sd_ms, bandwidth_mbps }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TopologyError {
    #[error("the deployment has no endpoints to generate data")]
    NoEndpoints,
    #[error("no tier can host workers: a lone endpoint has no peer to offload to")]
    NoWorkerTier,
    #[error("{endpoints} endpoints cannot be divided evenly over {workers} workers")]
    NotDivisible { endpoints: u32, workers: u32 },
    #[error("no {what} configured for the {link} link")]
    MissingLink { link: TierPair, what: &'static str },
    #[error("configuration has {} error(s)", .0.iter().filter(|d| d.is_error()).count())]
    Invalid(Vec<Diagnostic>),
}

/// How the devices of a configuration split into workers, controllers and
/// data sources.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorkerPlan {
    pub worker_tier: Tier,
    pub workers: u32,
    /// Cloud devices that run the control plane instead of work.
    pub controllers: u32,
    pub sources: u32,
    pub endpoints_per_worker: u32,
    pub link: TierPair,
}

/// Decides where workers live.
///
/// * Edge devices present: every edge device is a worker, cloud devices are
///   controllers.
/// * Only cloud: every cloud device is a worker when that divides the
///   endpoints evenly; otherwise, if dropping one device makes it divide,
///   that device is the controller.
/// * Only endpoints: the first half (rounded down) of the endpoints serve
///   the remaining ones.
pub fn plan_workers(config: &DeploymentConfig) -> Result<WorkerPlan, TopologyError> {
    let d = config.devices_per_tier;
    if d.endpoint == 0 {
        return Err(TopologyError::NoEndpoints);
    }
    let (worker_tier, workers, controllers, sources) = if d.edge > 0 {
        (Tier::Edge, d.edge, d.cloud, d.endpoint)
    } else if d.cloud > 0 {
        if d.endpoint.is_multiple_of(d.cloud) {
            (Tier::Cloud, d.cloud, 0, d.endpoint)
        } else if d.cloud > 1 && d.endpoint.is_multiple_of(d.cloud - 1) {
            (Tier::Cloud, d.cloud - 1, 1, d.endpoint)
        } else {
            return Err(TopologyError::NotDivisible { endpoints: d.endpoint, workers: d.cloud });
        }
    } else {
        if d.endpoint < 2 {
            return Err(TopologyError::NoWorkerTier);
        }
        let workers = d.endpoint / 2;
        (Tier::Endpoint, workers, 0, d.endpoint - workers)
    };
    if sources % workers != 0 {
        return Err(TopologyError::NotDivisible { endpoints: sources, workers });
    }
    Ok(WorkerPlan {
        worker_tier,
        workers,
        controllers,
        sources,
        endpoints_per_worker: sources / workers,
        link: TierPair::new(worker_tier, Tier::Endpoint),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub devices: Vec<Device>,
    /// Every link named in the configuration.
    pub links: Vec<Link>,
    pub worker_tier: Tier,
    /// Endpoints served by each worker.
    pub endpoints_per_worker: u32,
    /// Worker id to the endpoints it serves, in id order.
    pub assignment: BTreeMap<DeviceId, Vec<DeviceId>>,
    /// The endpoint-to-worker link; `None` when endpoints process their own data.
    pub worker_link: Option<Link>,
}

/// Materializes a validated configuration.
pub fn build_topology(config: &DeploymentConfig) -> Result<Topology, TopologyError> {
    let plan = plan_workers(config)?;
    let latency =
        config.latency.get(&plan.link).ok_or(TopologyError::MissingLink { link: plan.link, what: "latency" })?;
    let bandwidth =
        *config.throughput.get(&plan.link).ok_or(TopologyError::MissingLink { link: plan.link, what: "throughput" })?;
    let diags = validate(config);
    if diags.iter().any(Diagnostic::is_error) {
        return Err(TopologyError::Invalid(diags));
    }

    let counts = config.devices_per_tier;
    let mut devices = Vec::with_capacity((counts.cloud + counts.edge + counts.endpoint) as usize);
    let mut next_id = 0u32;
    for tier in Tier::ALL {
        for i in 0..counts.get(tier) {
            let role = match (tier, plan.worker_tier) {
                (Tier::Cloud, Tier::Cloud) if i < plan.controllers => Role::Controller,
                (Tier::Cloud, Tier::Cloud) => Role::Worker,
                (Tier::Cloud, _) => Role::Controller,
                (Tier::Edge, _) => Role::Worker,
                (Tier::Endpoint, Tier::Endpoint) if i < plan.workers => Role::Worker,
                (Tier::Endpoint, _) => Role::Source,
            };
            devices.push(Device {
                id: DeviceId(next_id),
                tier,
                cores: config.cores_per_device.get(tier),
                quota: config.quota_per_cpu.get(tier),
                role,
            });
            next_id += 1;
        }
    }

    let workers: Vec<DeviceId> = devices.iter().filter(|d| d.role == Role::Worker).map(|d| d.id).collect();
    let mut assignment: BTreeMap<DeviceId, Vec<DeviceId>> = workers.iter().map(|w| (*w, Vec::new())).collect();
    let sources = devices.iter().filter(|d| d.role == Role::Source);
    for (i, src) in sources.enumerate() {
        let w = workers[i % workers.len()];
        assignment.get_mut(&w).expect("worker present").push(src.id);
    }

    let mut links: Vec<Link> = config
        .throughput
        .iter()
        .filter_map(|(pair, bw)| config.latency.get(pair).map(|l| Link::new(*pair, l.avg_ms, l.sd_ms, *bw)))
        .collect();
    links.sort_by_key(|l| TierPair::new(l.from, l.to));

    Ok(Topology {
        devices,
        links,
        worker_tier: plan.worker_tier,
        endpoints_per_worker: plan.endpoints_per_worker,
        assignment,
        worker_link: Some(Link::new(plan.link, latency.avg_ms, latency.sd_ms, bandwidth)),
    })
}

impl Topology {
    /// `endpoints` endpoints that each process their own data locally.
    pub fn local(endpoints: u32, cores: u32, quota: f64) -> Self {
        let devices: Vec<Device> = (0..endpoints)
            .map(|i| Device { id: DeviceId(i), tier: Tier::Endpoint, cores, quota, role: Role::Worker })
            .collect();
        let assignment = devices.iter().map(|d| (d.id, vec![d.id])).collect();
        Self {
            devices,
            links: Vec::new(),
            worker_tier: Tier::Endpoint,
            endpoints_per_worker: 1,
            assignment,
            worker_link: None,
        }
    }

    pub fn is_local(&self) -> bool {
        self.worker_link.is_none()
    }

    pub fn device(&self, id: DeviceId) -> Option<&Device> {
        // ids are dense and assigned in order
        self.devices.get(id.0 as usize).filter(|d| d.id == id)
    }

    pub fn workers(&self) -> impl Iterator<Item = &Device> {
        self.devices.iter().filter(|d| d.role == Role::Worker)
    }

    /// Devices that generate data: sources, or every worker for local processing.
    pub fn data_sources(&self) -> impl Iterator<Item = &Device> {
        let local = self.is_local();
        self.devices.iter().filter(move |d| d.role == Role::Source || (local && d.role == Role::Worker))
    }

    pub fn controllers(&self) -> impl Iterator<Item = &Device> {
        self.devices.iter().filter(|d| d.role == Role::Controller)
    }

    /// A representative worker; all workers in a topology are identical.
    pub fn worker_spec(&self) -> Option<&Device> {
        self.workers().next()
    }

    /// A representative data source.
    pub fn source_spec(&self) -> Option<&Device> {
        self.data_sources().next()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("topology serializes")
    }
}
