use super::{DeploymentConfig, Diagnostic, Tier};
use crate::topology::plan_workers;

/// Checks every invariant a configuration must satisfy before a topology
/// can be built from it.
///
/// The result is empty of errors exactly when [`crate::topology::build_topology`]
/// would succeed. Emulation-only keys produce warnings.
pub fn validate(config: &DeploymentConfig) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    if config.hypervisor.is_some() {
        out.push(Diagnostic::warning("infrastructure.hypervisor", "emulation-only setting, ignored"));
    }
    if config.thread_pinning.is_some() {
        out.push(Diagnostic::warning("infrastructure.thread_pinning", "emulation-only setting, ignored"));
    }
    if config.machine_address.is_some() {
        out.push(Diagnostic::warning("infrastructure.machine_address", "emulation-only setting, ignored"));
    }

    for tier in Tier::ALL {
        let devices = config.devices_per_tier.get(tier);
        let cores = config.cores_per_device.get(tier);
        let quota = config.quota_per_cpu.get(tier);
        if devices > 0 {
            if !(quota > 0.0 && quota <= 1.0) {
                out.push(Diagnostic::error(
                    "infrastructure.quota_per_cpu",
                    format!("{tier} quota {quota} must lie in (0, 1] for a tier with devices"),
                ));
            }
            if cores == 0 {
                out.push(Diagnostic::error(
                    "infrastructure.cores_per_device",
                    format!("{tier} has {devices} device(s) but 0 cores"),
                ));
            }
        } else if !(0.0..=1.0).contains(&quota) {
            out.push(Diagnostic::error(
                "infrastructure.quota_per_cpu",
                format!("{tier} quota {quota} must lie in [0, 1]"),
            ));
        }
    }

    for (pair, l) in &config.latency {
        if !(l.avg_ms >= 0.0 && l.avg_ms.is_finite()) {
            out.push(Diagnostic::error(
                format!("infrastructure.{pair}"),
                format!("average latency {} ms must be >= 0", l.avg_ms),
            ));
        }
        if !(l.sd_ms >= 0.0 && l.sd_ms.is_finite()) {
            out.push(Diagnostic::error(
                format!("infrastructure.{pair}"),
                format!("latency variability {} ms must be >= 0", l.sd_ms),
            ));
        }
    }
    for (pair, mbit) in &config.throughput {
        if !(*mbit > 0.0 && mbit.is_finite()) {
            out.push(Diagnostic::error(
                format!("infrastructure.{pair}"),
                format!("throughput {mbit} Mbit/s must be > 0"),
            ));
        }
    }

    let rate = config.benchmark.data_generation_frequency;
    if !(rate >= 0.0 && rate.is_finite()) {
        out.push(Diagnostic::error("benchmark.data_generation_frequency", format!("rate {rate} Hz must be >= 0")));
    }

    match plan_workers(config) {
        Ok(plan) => {
            let key = format!("infrastructure.{}", plan.link);
            if !config.latency.contains_key(&plan.link) {
                out.push(Diagnostic::error(
                    &key,
                    format!("latency for the {} link is required by this topology", plan.link),
                ));
            }
            if !config.throughput.contains_key(&plan.link) {
                out.push(Diagnostic::error(
                    &key,
                    format!("throughput for the {} link is required by this topology", plan.link),
                ));
            }
        }
        Err(e) => out.push(Diagnostic::error("infrastructure.devices_per_tier", e.to_string())),
    }

    out
}
