use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::{BenchmarkConfig, ConfigError, DeploymentConfig, LatencySpec, Tier, TierPair, TierTriple};

/// The four reference deployments used for the latency and load experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Preset {
    Cloud,
    EdgeLarge,
    EdgeSmall,
    Mist,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Cloud, Preset::EdgeLarge, Preset::EdgeSmall, Preset::Mist];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Cloud => "cloud",
            Preset::EdgeLarge => "edge-large",
            Preset::EdgeSmall => "edge-small",
            Preset::Mist => "mist",
        }
    }

    pub fn config(self) -> DeploymentConfig {
        // (devices, cores, quota, worker link, latency avg/sd, resource manager)
        let (devices, cores, quota, link, latency, manager) = match self {
            Preset::Cloud => (
                TierTriple::new(11, 0, 40),
                TierTriple::new(4, 0, 1),
                TierTriple::new(1.0, 0.0, 0.5),
                TierPair::new(Tier::Cloud, Tier::Endpoint),
                LatencySpec { avg_ms: 45.0, sd_ms: 5.0 },
                "kubernetes",
            ),
            Preset::EdgeLarge => (
                TierTriple::new(1, 10, 40),
                TierTriple::new(4, 4, 1),
                TierTriple::new(1.0, 1.0, 0.5),
                TierPair::new(Tier::Edge, Tier::Endpoint),
                LatencySpec { avg_ms: 30.0, sd_ms: 5.0 },
                "kubeedge",
            ),
            Preset::EdgeSmall => (
                TierTriple::new(1, 10, 20),
                TierTriple::new(4, 2, 1),
                TierTriple::new(1.0, 0.75, 0.5),
                TierPair::new(Tier::Edge, Tier::Endpoint),
                LatencySpec { avg_ms: 7.5, sd_ms: 2.5 },
                "kubeedge",
            ),
            Preset::Mist => (
                TierTriple::new(0, 0, 20),
                TierTriple::new(0, 0, 2),
                TierTriple::new(0.0, 0.0, 0.5),
                TierPair::new(Tier::Endpoint, Tier::Endpoint),
                LatencySpec { avg_ms: 7.5, sd_ms: 2.5 },
                "none",
            ),
        };

        let mut latencies = BTreeMap::new();
        let mut throughput = BTreeMap::new();
        if devices.cloud > 0 {
            let cc = TierPair::new(Tier::Cloud, Tier::Cloud);
            latencies.insert(cc, LatencySpec { avg_ms: 1.0, sd_ms: 0.0 });
            throughput.insert(cc, 1000.0);
        }
        latencies.insert(link, latency);
        throughput.insert(link, 8.0);

        DeploymentConfig {
            hypervisor: None,
            thread_pinning: None,
            devices_per_tier: devices,
            cores_per_device: cores,
            quota_per_cpu: quota,
            latency: latencies,
            throughput,
            machine_address: None,
            benchmark: BenchmarkConfig {
                use_benchmark: true,
                data_generation_frequency: 5.0,
                application: "image_classification".to_string(),
                resource_manager: manager.to_string(),
            },
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| ConfigError::UnknownPreset(s.to_string()))
    }
}

/// Looks up a reference deployment by name (`cloud`, `edge-large`,
/// `edge-small` or `mist`).
pub fn load_preset(name: &str) -> Result<DeploymentConfig, ConfigError> {
    name.parse::<Preset>().map(Preset::config)
}
