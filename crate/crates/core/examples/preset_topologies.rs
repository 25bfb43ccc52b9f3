//! Build the topology of every bundled deployment and summarize it.
//!
//! cargo run --example preset_topologies -- [--json]

use continuum_planner::{build_topology, Preset};

fn main() {
    let json = std::env::args().any(|a| a == "--json");
    for preset in Preset::ALL {
        let topo = build_topology(&preset.config()).expect("presets are valid");
        if json {
            println!("{}", topo.to_json());
            continue;
        }
        let worker = topo.worker_spec().unwrap();
        println!(
            "{:<11} workers: {:>2} x {} ({} cores x {}), sources: {}, controllers: {}, endpoints/worker: {}",
            preset.name(),
            topo.workers().count(),
            topo.worker_tier,
            worker.cores,
            worker.quota,
            topo.data_sources().count(),
            topo.controllers().count(),
            topo.endpoints_per_worker,
        );
        if let Some(link) = &topo.worker_link {
            println!(
                "            link {}-{}: {} ms (sd {}), {} Mbit/s",
                link.from, link.to, link.latency_avg_ms, link.latency_sd_ms, link.bandwidth_mbps
            );
        }
    }
}
