//! Simulate one deployment and print where the latency goes.
//!
//! cargo run --example simulate_pipeline -- [preset] [seed]

use continuum_planner::{build_topology, load_preset, simulate, SimParams, WorkloadProfile};

fn main() {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "edge-small".into());
    let seed = args.next().map_or(1, |s| s.parse().expect("numeric seed"));

    let config = load_preset(&name).expect("known preset");
    let topo = build_topology(&config).unwrap();
    let report = simulate(&topo, &WorkloadProfile::reference(), &SimParams::new(30.0, seed)).unwrap();

    let latency = report.latency.unwrap();
    let b = report.breakdown.unwrap();
    println!("{name}: {} elements, mean {:.2} ms, sd {:.2} ms", latency.count, latency.mean_ms, latency.sd_ms);
    println!("  communication {:.2} ms", b.communication_ms);
    println!("  compute       {:.2} ms", b.compute_ms);
    println!("  queueing      {:.2} ms", b.queueing_ms);
    for w in report.workers.iter().take(3) {
        println!(
            "  worker {}: load {:.2}%, busy {:.2}%, backlog {} -> {}",
            w.worker, w.measured_load_percent, w.busy_percent, w.backlog_at_warmup, w.backlog_at_end
        );
    }
    if report.workers.len() > 3 {
        println!("  ... {} more workers", report.workers.len() - 3);
    }
}
