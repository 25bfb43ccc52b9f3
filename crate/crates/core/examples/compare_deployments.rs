//! Average latency breakdown of the four bundled deployments over three
//! seeds each.
//!
//! cargo run --release --example compare_deployments

use continuum_planner::cli::compare_deployments;
use continuum_planner::{build_topology, Preset, WorkloadProfile};

fn main() {
    let deployments: Vec<_> =
        Preset::ALL.iter().map(|p| (p.name().to_string(), build_topology(&p.config()).unwrap())).collect();
    let rows = compare_deployments(&deployments, &WorkloadProfile::reference(), 60.0, 3, 1).unwrap();

    println!("{:<11} {:>16} {:>14} {:>10} {:>10}", "deployment", "total ms", "comm ms", "compute", "queue");
    for r in &rows {
        println!(
            "{:<11} {:>8.2} ± {:<5.2} {:>14.2} {:>10.2} {:>10.2}",
            r.deployment,
            r.total_ms.mean,
            r.total_ms.sd,
            r.communication_ms.mean,
            r.compute_ms.mean,
            r.queueing_ms.mean
        );
    }
}
