use std::collections::{BTreeMap, HashSet};

use super::{validate, BenchmarkConfig, ConfigError, DeploymentConfig, Diagnostic, LatencySpec, TierPair, TierTriple};

/// A configuration that passed parsing and validation, together with the
/// warnings raised along the way.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedConfig {
    pub config: DeploymentConfig,
    pub warnings: Vec<Diagnostic>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Section {
    Infrastructure,
    Benchmark,
}

impl Section {
    fn name(self) -> &'static str {
        match self {
            Section::Infrastructure => "infrastructure",
            Section::Benchmark => "benchmark",
        }
    }
}

/// Tier-pair keys appear twice in a section: once as `average,variability`
/// latency and once as a single throughput figure. The arity decides which.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Slot {
    Plain(&'static str),
    Latency(TierPair),
    Throughput(TierPair),
}

#[derive(Default)]
struct Fields {
    hypervisor: Option<String>,
    thread_pinning: Option<bool>,
    devices_per_tier: Option<TierTriple<u32>>,
    cores_per_device: Option<TierTriple<u32>>,
    quota_per_cpu: Option<TierTriple<f64>>,
    latency: BTreeMap<TierPair, LatencySpec>,
    throughput: BTreeMap<TierPair, f64>,
    machine_address: Option<Vec<String>>,
    use_benchmark: Option<bool>,
    data_generation_frequency: Option<f64>,
    application: Option<String>,
    resource_manager: Option<String>,
}

const INFRASTRUCTURE_KEYS: [&str; 6] =
    ["hypervisor", "thread_pinning", "devices_per_tier", "cores_per_device", "quota_per_cpu", "machine_address"];
const BENCHMARK_KEYS: [&str; 4] = ["use_benchmark", "data_generation_frequency", "application", "resource_manager"];

/// Parses and validates a configuration document.
///
/// On success the returned warnings contain one entry per emulation-only
/// key. Any error diagnostic, syntactic or semantic, rejects the document.
pub fn parse_config(text: &str) -> Result<ParsedConfig, ConfigError> {
    let mut diags = Vec::new();
    let mut fields = Fields::default();
    let mut section: Option<Section> = None;
    let mut seen_sections = HashSet::new();
    let mut seen_slots: HashSet<(Section, Slot)> = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }

        if let Some(rest) = line.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                diags.push(
                    Diagnostic::error("<document>", format!("malformed section header `{line}`")).at_line(line_no),
                );
                section = None;
                continue;
            };
            let sec = match name.trim() {
                "infrastructure" => Section::Infrastructure,
                "benchmark" => Section::Benchmark,
                other => {
                    diags.push(Diagnostic::error(other, "unknown section").at_line(line_no));
                    section = None;
                    continue;
                }
            };
            if !seen_sections.insert(sec) {
                diags.push(Diagnostic::error(sec.name(), "duplicate section").at_line(line_no));
            }
            section = Some(sec);
            continue;
        }

        let Some((key, value)) = line.split_once('=') else {
            diags.push(
                Diagnostic::error("<document>", format!("expected `key = value`, found `{line}`")).at_line(line_no),
            );
            continue;
        };
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() {
            diags.push(Diagnostic::error("<document>", "empty key").at_line(line_no));
            continue;
        }
        let Some(sec) = section else {
            diags.push(Diagnostic::error(key, "key outside of a section").at_line(line_no));
            continue;
        };
        let qualified = format!("{}.{key}", sec.name());

        let slot = match classify_key(sec, key, value) {
            Ok(slot) => slot,
            Err(msg) => {
                diags.push(Diagnostic::error(&qualified, msg).at_line(line_no));
                continue;
            }
        };
        if !seen_slots.insert((sec, slot)) {
            diags.push(Diagnostic::error(&qualified, "duplicate key in section").at_line(line_no));
            continue;
        }
        if let Err(msg) = assign(&mut fields, slot, value) {
            diags.push(Diagnostic::error(&qualified, msg).at_line(line_no));
        }
    }

    if diags.iter().any(Diagnostic::is_error) {
        return Err(ConfigError::Rejected(diags));
    }

    let config = match assemble(fields) {
        Ok(c) => c,
        Err(missing) => return Err(ConfigError::Rejected(missing)),
    };

    let mut all = diags;
    all.extend(validate(&config));
    if all.iter().any(Diagnostic::is_error) {
        return Err(ConfigError::Rejected(all));
    }
    Ok(ParsedConfig { config, warnings: all })
}

fn classify_key(sec: Section, key: &str, value: &str) -> Result<Slot, String> {
    match sec {
        Section::Infrastructure => {
            if let Some(k) = INFRASTRUCTURE_KEYS.iter().find(|k| **k == key) {
                return Ok(Slot::Plain(k));
            }
            match TierPair::parse_key(key) {
                Some(Ok(pair)) => match value.split(',').count() {
                    1 => Ok(Slot::Throughput(pair)),
                    2 => Ok(Slot::Latency(pair)),
                    n => Err(format!(
                        "link keys take `average,variability` (latency) or a single throughput value, got {n} values"
                    )),
                },
                Some(Err(canonical)) => Err(format!("links are symmetric; write this link as `{canonical}`")),
                None => Err("unknown key".to_string()),
            }
        }
        Section::Benchmark => {
            BENCHMARK_KEYS.iter().find(|k| **k == key).map(|k| Slot::Plain(k)).ok_or_else(|| "unknown key".to_string())
        }
    }
}

fn assign(f: &mut Fields, slot: Slot, value: &str) -> Result<(), String> {
    match slot {
        Slot::Plain("hypervisor") => f.hypervisor = Some(value.to_string()),
        Slot::Plain("thread_pinning") => f.thread_pinning = Some(parse_bool(value)?),
        Slot::Plain("devices_per_tier") => f.devices_per_tier = Some(parse_triple(value, parse_count)?),
        Slot::Plain("cores_per_device") => f.cores_per_device = Some(parse_triple(value, parse_count)?),
        Slot::Plain("quota_per_cpu") => f.quota_per_cpu = Some(parse_triple(value, parse_number)?),
        Slot::Plain("machine_address") => {
            f.machine_address = Some(if value.is_empty() {
                Vec::new()
            } else {
                value.split(',').map(|s| s.trim().to_string()).collect()
            })
        }
        Slot::Plain("use_benchmark") => f.use_benchmark = Some(parse_bool(value)?),
        Slot::Plain("data_generation_frequency") => f.data_generation_frequency = Some(parse_number(value)?),
        Slot::Plain("application") => f.application = Some(value.to_string()),
        Slot::Plain("resource_manager") => f.resource_manager = Some(value.to_string()),
        Slot::Plain(other) => unreachable!("unhandled key {other}"),
        Slot::Latency(pair) => {
            let (avg, sd) = value.split_once(',').expect("arity checked");
            let spec = LatencySpec { avg_ms: parse_number(avg)?, sd_ms: parse_number(sd)? };
            f.latency.insert(pair, spec);
        }
        Slot::Throughput(pair) => {
            f.throughput.insert(pair, parse_number(value)?);
        }
    }
    Ok(())
}

fn assemble(f: Fields) -> Result<DeploymentConfig, Vec<Diagnostic>> {
    let mut missing = Vec::new();
    let mut need = |present: bool, key: &str| {
        if !present {
            missing.push(Diagnostic::error(key, "required key is missing"));
        }
    };
    need(f.devices_per_tier.is_some(), "infrastructure.devices_per_tier");
    need(f.cores_per_device.is_some(), "infrastructure.cores_per_device");
    need(f.quota_per_cpu.is_some(), "infrastructure.quota_per_cpu");
    need(f.use_benchmark.is_some(), "benchmark.use_benchmark");
    need(f.data_generation_frequency.is_some(), "benchmark.data_generation_frequency");
    need(f.application.is_some(), "benchmark.application");
    need(f.resource_manager.is_some(), "benchmark.resource_manager");
    if !missing.is_empty() {
        return Err(missing);
    }

    Ok(DeploymentConfig {
        hypervisor: f.hypervisor,
        thread_pinning: f.thread_pinning,
        devices_per_tier: f.devices_per_tier.unwrap(),
        cores_per_device: f.cores_per_device.unwrap(),
        quota_per_cpu: f.quota_per_cpu.unwrap(),
        latency: f.latency,
        throughput: f.throughput,
        machine_address: f.machine_address,
        benchmark: BenchmarkConfig {
            use_benchmark: f.use_benchmark.unwrap(),
            data_generation_frequency: f.data_generation_frequency.unwrap(),
            application: f.application.unwrap(),
            resource_manager: f.resource_manager.unwrap(),
        },
    })
}

fn parse_bool(v: &str) -> Result<bool, String> {
    match v {
        "True" | "true" => Ok(true),
        "False" | "false" => Ok(false),
        _ => Err(format!("expected True or False, found `{v}`")),
    }
}

fn parse_number(v: &str) -> Result<f64, String> {
    let v = v.trim();
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("`{v}` is not a finite number")),
    }
}

fn parse_count(v: &str) -> Result<u32, String> {
    let v = v.trim();
    v.parse::<u32>().map_err(|_| format!("`{v}` is not a non-negative integer"))
}

fn parse_triple<T: Copy>(v: &str, item: fn(&str) -> Result<T, String>) -> Result<TierTriple<T>, String> {
    let parts: Vec<&str> = v.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected 3 comma-separated values (cloud,edge,endpoint), found {}", parts.len()));
    }
    Ok(TierTriple::new(item(parts[0])?, item(parts[1])?, item(parts[2])?))
}
