//! The two worked examples: an image classifier on a single endpoint core
//! share, then the same stream offloaded with another endpoint's to an edge
//! worker.
//!
//! cargo run --example predict_viability

use continuum_planner::analytic::Condition;
use continuum_planner::config::{LatencySpec, TierPair};
use continuum_planner::{local_viability, offload_viability, Device, Link, Tier, WorkloadProfile};

fn main() {
    let w = WorkloadProfile::reference();
    let endpoint = Device::spec(Tier::Endpoint, 1, 0.5);
    let edge = Device::spec(Tier::Edge, 2, 0.75);
    let lat = LatencySpec { avg_ms: 7.5, sd_ms: 2.5 };
    let link = Link::new(TierPair::new(Tier::Edge, Tier::Endpoint), lat.avg_ms, lat.sd_ms, 8.0);

    let local = local_viability(&w, &endpoint).unwrap();
    println!("local:   viable={} load={}", local.viable, local.load_percent);

    let off = offload_viability(&w, &endpoint, &edge, 2, &link).unwrap();
    println!("offload: viable={} load={}", off.viable, off.load_percent);
    for c in [Condition::WorkerCapacity, Condition::PreprocessCapacity, Condition::Bandwidth] {
        let check = off.check(c).unwrap();
        println!("  {c:<20} {:.4} of {:.4} -> {}", check.demand, check.capacity, check.load());
    }
    println!("{}", serde_json::to_string_pretty(&off).unwrap());
}
