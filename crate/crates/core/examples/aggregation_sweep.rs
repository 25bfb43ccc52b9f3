//! Load on one worker as more endpoints share it: model against simulation.
//!
//! cargo run --release --example aggregation_sweep

use continuum_planner::config::TierTriple;
use continuum_planner::{
    build_topology, demand_on_worker, simulate, system_load, Preset, SimParams, Tier, WorkloadProfile,
};

fn main() {
    let w = WorkloadProfile::reference();
    println!("{:>3} {:>10} {:>10} {:>12}", "E", "model %", "sim %", "backlog end");
    for endpoints in [1u32, 2, 3, 4, 5] {
        let mut config = Preset::EdgeSmall.config();
        config.devices_per_tier = TierTriple::new(1, 1, endpoints);
        let topo = build_topology(&config).unwrap();
        let worker = topo.worker_spec().unwrap();
        let model = system_load(demand_on_worker(&w, Tier::Edge, endpoints).unwrap(), worker.capacity());

        let duration = 2000.0 / (w.rate * f64::from(endpoints));
        let report = simulate(&topo, &w, &SimParams::new(duration, 7)).unwrap();
        let stats = &report.workers[0];
        println!(
            "{endpoints:>3} {:>10} {:>10.2} {:>12}",
            model.to_string(),
            stats.measured_load_percent,
            stats.backlog_at_end
        );
    }
}
