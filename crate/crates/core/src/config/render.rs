use std::fmt::{Display, Write};

use super::{DeploymentConfig, TierTriple};

/// Renders a configuration in canonical form: infrastructure first, then
/// benchmark, with latency links before throughput links.
///
/// Numbers use the shortest representation that parses back to the same
/// value, so `parse_config(render_config(c))` reproduces `c`.
pub fn render_config(config: &DeploymentConfig) -> String {
    let mut out = String::new();
    out.push_str("[infrastructure]\n");
    if let Some(h) = &config.hypervisor {
        let _ = writeln!(out, "hypervisor = {h}");
    }
    if let Some(p) = config.thread_pinning {
        let _ = writeln!(out, "thread_pinning = {}", bool_str(p));
    }

    out.push_str("\n# VM settings for cloud, edge, endpoint\n");
    let _ = writeln!(out, "devices_per_tier = {}", triple(&config.devices_per_tier));
    let _ = writeln!(out, "cores_per_device = {}", triple(&config.cores_per_device));
    let _ = writeln!(out, "quota_per_cpu = {}", triple(&config.quota_per_cpu));

    if !config.latency.is_empty() {
        out.push_str("\n# Latency (ms): average,variability\n");
        for (pair, l) in &config.latency {
            let _ = writeln!(out, "{pair} = {},{}", l.avg_ms, l.sd_ms);
        }
    }
    if !config.throughput.is_empty() {
        out.push_str("\n# Throughput (Mbit): average\n");
        for (pair, mbit) in &config.throughput {
            let _ = writeln!(out, "{pair} = {mbit}");
        }
    }
    if let Some(addrs) = &config.machine_address {
        let _ = writeln!(out, "\nmachine_address = {}", addrs.join(","));
    }

    let b = &config.benchmark;
    out.push_str("\n[benchmark]\n");
    let _ = writeln!(out, "use_benchmark = {}", bool_str(b.use_benchmark));
    let _ = writeln!(out, "data_generation_frequency = {}", b.data_generation_frequency);
    let _ = writeln!(out, "application = {}", b.application);
    let _ = writeln!(out, "resource_manager = {}", b.resource_manager);
    out
}

fn bool_str(b: bool) -> &'static str {
    if b {
        "True"
    } else {
        "False"
    }
}

fn triple<T: Copy + Display>(t: &TierTriple<T>) -> String {
    format!("{},{},{}", t.cloud, t.edge, t.endpoint)
}
