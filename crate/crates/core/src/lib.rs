//! Deployment planning for the cloud / edge / endpoint compute continuum.
//!
//! * [`config`] reads and writes deployment descriptions and ships the four
//!   reference deployments.
//! * [`topology`] turns a description into workers, sources and links.
//! * [`analytic`] decides whether a workload fits a placement and maps the
//!   preferred placement over a grid of workloads.
//! * [`sim`] replays the generate, preprocess, transfer and process pipeline
//!   as a discrete-event simulation to cross-check the model.
//! * [`cli`] backs the `continuum-planner` binary.

pub mod analytic;
pub mod cli;
pub mod config;
pub mod sim;
pub mod topology;
pub mod workload;

pub use analytic::{
    classify, heatmap, local_viability, offload_viability, system_load, Condition, HeatmapGrid, HeatmapSpec,
    PlacementClass, PlacementFamily, PlacementPolicy, SystemLoad, Verdict,
};
pub use config::{load_preset, parse_config, render_config, validate, DeploymentConfig, Preset, Tier};
pub use sim::{latency_breakdown, measured_load, simulate, SimParams, SimReport};

pub use topology::{build_topology, capacity_of, demand_on_worker, Device, Link, Topology};
pub use workload::WorkloadProfile;
