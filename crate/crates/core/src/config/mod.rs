//! Deployment configuration: the section-based `key = value` format, its
//! validation diagnostics, canonical rendering and the four reference
//! deployment presets.

mod parse;
mod preset;
mod render;
mod validate;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parse::{parse_config, ParsedConfig};
pub use preset::{load_preset, Preset};
pub use render::render_config;
pub use validate::validate;

/// A layer of the compute continuum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Cloud,
    Edge,
    Endpoint,
}

impl Tier {
    pub const ALL: [Tier; 3] = [Tier::Cloud, Tier::Edge, Tier::Endpoint];

    pub fn as_str(self) -> &'static str {
        match self {
            Tier::Cloud => "cloud",
            Tier::Edge => "edge",
            Tier::Endpoint => "endpoint",
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tier {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cloud" => Ok(Tier::Cloud),
            "edge" => Ok(Tier::Edge),
            "endpoint" => Ok(Tier::Endpoint),
            other => Err(format!("unknown tier `{other}`")),
        }
    }
}

/// One value per tier, always written in the order cloud, edge, endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TierTriple<T> {
    pub cloud: T,
    pub edge: T,
    pub endpoint: T,
}

impl<T: Copy> TierTriple<T> {
    pub fn new(cloud: T, edge: T, endpoint: T) -> Self {
        Self { cloud, edge, endpoint }
    }

    pub fn get(&self, tier: Tier) -> T {
        match tier {
            Tier::Cloud => self.cloud,
            Tier::Edge => self.edge,
            Tier::Endpoint => self.endpoint,
        }
    }

    pub fn as_array(&self) -> [T; 3] {
        [self.cloud, self.edge, self.endpoint]
    }
}

/// Unordered pair of tiers naming a network link, e.g. `cloud_to_endpoint`.
///
/// Links are symmetric, so the pair is stored with the tiers sorted and
/// only that orientation is accepted as a key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct TierPair {
    low: Tier,
    high: Tier,
}

impl TierPair {
    pub fn new(a: Tier, b: Tier) -> Self {
        if a <= b {
            Self { low: a, high: b }
        } else {
            Self { low: b, high: a }
        }
    }

    pub fn tiers(self) -> (Tier, Tier) {
        (self.low, self.high)
    }

    pub fn key(self) -> String {
        format!("{}_to_{}", self.low, self.high)
    }

    /// Parses a canonical `a_to_b` key. The reversed orientation is
    /// reported separately so the caller can point at the canonical name.
    pub fn parse_key(key: &str) -> Option<Result<Self, String>> {
        let (a, b) = key.split_once("_to_")?;
        let a = a.parse::<Tier>().ok()?;
        let b = b.parse::<Tier>().ok()?;
        let pair = TierPair::new(a, b);
        if (a, b) == (pair.low, pair.high) {
            Some(Ok(pair))
        } else {
            Some(Err(pair.key()))
        }
    }
}

impl fmt::Display for TierPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_to_{}", self.low, self.high)
    }
}

impl From<TierPair> for String {
    fn from(p: TierPair) -> String {
        p.key()
    }
}

impl TryFrom<String> for TierPair {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        match TierPair::parse_key(&s) {
            Some(Ok(p)) => Ok(p),
            Some(Err(canonical)) => Err(format!("non-canonical link key `{s}`, use `{canonical}`")),
            None => Err(format!("`{s}` is not a tier-pair key")),
        }
    }
}

/// Link latency in milliseconds: mean and standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencySpec {
    pub avg_ms: f64,
    pub sd_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkConfig {
    pub use_benchmark: bool,
    /// Elements generated per second per endpoint.
    pub data_generation_frequency: f64,
    pub application: String,
    pub resource_manager: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeploymentConfig {
    /// Emulation-only; kept verbatim.
    pub hypervisor: Option<String>,
    /// Emulation-only; kept verbatim.
    pub thread_pinning: Option<bool>,
    pub devices_per_tier: TierTriple<u32>,
    pub cores_per_device: TierTriple<u32>,
    pub quota_per_cpu: TierTriple<f64>,
    pub latency: BTreeMap<TierPair, LatencySpec>,
    /// Mbit/s per link.
    pub throughput: BTreeMap<TierPair, f64>,
    /// Emulation-only; kept verbatim.
    pub machine_address: Option<Vec<String>>,
    pub benchmark: BenchmarkConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    /// `section.key`, or just the section / `<document>` for structural problems.
    pub key: String,
    pub line: Option<usize>,
    pub message: String,
}

impl Diagnostic {
    pub fn error(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self { severity: Severity::Error, key: key.into(), line: None, message: message.into() }
    }

    pub fn warning(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self { severity: Severity::Warning, key: key.into(), line: None, message: message.into() }
    }

    pub fn at_line(mut self, line: usize) -> Self {
        self.line = Some(line);
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        match self.line {
            Some(line) => write!(f, "{sev}: line {line}: {}: {}", self.key, self.message),
            None => write!(f, "{sev}: {}: {}", self.key, self.message),
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("configuration rejected: {}", summarize(.0))]
    Rejected(Vec<Diagnostic>),
    #[error("unknown preset `{0}` (expected one of cloud, edge-large, edge-small, mist)")]
    UnknownPreset(String),
}

impl ConfigError {
    pub fn diagnostics(&self) -> &[Diagnostic] {
        match self {
            ConfigError::Rejected(d) => d,
            ConfigError::UnknownPreset(_) => &[],
        }
    }
}

fn summarize(diags: &[Diagnostic]) -> String {
    diags.iter().filter(|d| d.is_error()).map(|d| d.to_string()).collect::<Vec<_>>().join("; ")
}
