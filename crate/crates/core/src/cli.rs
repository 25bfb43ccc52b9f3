//! Command-line front end: `validate`, `predict`, `heatmap`, `simulate`
//! and `compare`.
//!
//! Every JSON document the commands emit carries a `manifest` with the
//! resolved configuration, workload, seed and command parameters, which is
//! enough to reproduce the numbers.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::analytic::{
    heatmap, local_viability, offload_viability, reference_markers, HeatmapSpec, OffloadTarget, PlacementFamily,
    PlacementPolicy, SystemLoad, Verdict,
};
use crate::config::{load_preset, parse_config, ConfigError, DeploymentConfig, Diagnostic, Tier};
use crate::sim::{simulate, SimParams, SimReport};
use crate::topology::{build_topology, Topology};
use crate::workload::WorkloadProfile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "continuum-planner", version, about = "Plan and check cloud/edge/endpoint deployments")]
pub struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Base seed for every random draw.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Write the main output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a configuration file and list its diagnostics.
    Validate { path: PathBuf },
    /// Evaluate local and offloaded processing for one deployment.
    Predict {
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        workload: WorkloadArgs,
    },
    /// Classify the preferred placement over a grid of rates and processing times.
    Heatmap {
        /// Deployments whose workers form the offload options (edge or cloud
        /// workers only). Defaults to edge-small plus cloud.
        #[arg(long = "preset", value_delimiter = ',')]
        presets: Vec<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        workload: WorkloadArgs,
        #[arg(long, default_value_t = 20.0)]
        rmax: f64,
        #[arg(long, default_value_t = 0.44)]
        tmax: f64,
        #[arg(long, default_value_t = 41)]
        resolution: usize,
        /// Preference order, e.g. `endpoint,edge,cloud`.
        #[arg(long)]
        policy: Option<String>,
    },
    /// Run one pipeline simulation.
    Simulate {
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        workload: WorkloadArgs,
        /// Simulated seconds.
        #[arg(long, default_value_t = 60.0)]
        duration: f64,
        /// Seconds excluded from metrics; defaults to 10% of the duration.
        #[arg(long)]
        warmup: Option<f64>,
        #[arg(long)]
        max_elements: Option<u64>,
        /// Write the per-element trace as CSV to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Simulate several deployments with repeated seeds and compare latencies.
    Compare {
        #[arg(long = "preset", value_delimiter = ',', required = true)]
        presets: Vec<String>,
        #[command(flatten)]
        workload: WorkloadArgs,
        #[arg(long, default_value_t = 3)]
        repeats: u32,
        #[arg(long, default_value_t = 60.0)]
        duration: f64,
    },
}

#[derive(Debug, Args)]
pub struct TargetArgs {
    /// One of cloud, edge-large, edge-small, mist.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    pub preset: Option<String>,
    /// Path to a configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Workload overrides. Unset values come from `--workload`, or from the
/// reference profile, with the rate taken from the deployment's
/// `data_generation_frequency`.
#[derive(Debug, Args, Default)]
pub struct WorkloadArgs {
    /// JSON workload profile file.
    #[arg(long)]
    pub workload: Option<PathBuf>,
    #[arg(long)]
    pub tproc_endpoint: Option<f64>,
    #[arg(long)]
    pub tproc_edge: Option<f64>,
    #[arg(long)]
    pub tproc_cloud: Option<f64>,
    #[arg(long)]
    pub tpre: Option<f64>,
    /// Elements per second per endpoint.
    #[arg(long)]
    pub rate: Option<f64>,
    /// Mbit per element.
    #[arg(long)]
    pub size: Option<f64>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::UnknownPreset(_) => CliError::Usage(e.to_string()),
            ConfigError::Rejected(_) => CliError::Config(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestDeployment {
    pub name: String,
    pub config: DeploymentConfig,
}

/// Everything needed to reproduce a command's numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub deployments: Vec<ManifestDeployment>,
    pub workload: Option<WorkloadProfile>,
    pub seed: Option<u64>,
    pub parameters: serde_json::Value,
    pub tool_version: String,
    pub timestamp_unix: u64,
}

impl RunManifest {
    fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            deployments: Vec::new(),
            workload: None,
            seed: None,
            parameters: serde_json::Value::Null,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_unix: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code. Output goes to `stdout` unless `--out`
/// names a file; errors go to `stderr`.
pub fn run_from_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match run(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Validate { path } => cmd_validate(cli, path, stdout),
        Command::Predict { target, workload } => cmd_predict(cli, target, workload, stdout),
        Command::Heatmap { presets, config, workload, rmax, tmax, resolution, policy } => {
            let grid = HeatmapSpec {
                rate_max: *rmax,
                proc_time_max: *tmax,
                rate_steps: *resolution,
                proc_time_steps: *resolution,
                reference_tier: Tier::Endpoint,
            };
            cmd_heatmap(cli, presets, config.as_deref(), workload, grid, policy.as_deref(), stdout)
        }
        Command::Simulate { target, workload, duration, warmup, max_elements, trace } => {
            let params = SimParams {
                duration: *duration,
                warmup: warmup.unwrap_or(duration * 0.1),
                seed: cli.seed,
                max_elements: *max_elements,
            };
            cmd_simulate(cli, target, workload, params, trace.as_deref(), stdout)
        }
        Command::Compare { presets, workload, repeats, duration } => {
            cmd_compare(cli, presets, workload, *repeats, *duration, stdout)
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Sends `text` to `--out` when given, otherwise to stdout.
fn emit(cli: &Cli, stdout: &mut dyn Write, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => write_file(path, text),
        None => {
            stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source })
        }
    }
}

fn emit_json(cli: &Cli, stdout: &mut dyn Write, value: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("json");
    text.push('\n');
    emit(cli, stdout, &text)
}

fn load_target(target: &TargetArgs) -> Result<(String, DeploymentConfig), CliError> {
    match (&target.preset, &target.config) {
        (Some(name), _) => Ok((name.clone(), load_preset(name)?)),
        (None, Some(path)) => {
            let text = read(path)?;
            Ok((path.display().to_string(), parse_config(&text)?.config))
        }
        (None, None) => Err(CliError::Usage("one of --preset or --config is required".into())),
    }
}

fn topology_of(config: &DeploymentConfig) -> Result<Topology, CliError> {
    build_topology(config).map_err(|e| CliError::Config(e.to_string()))
}

fn resolve_workload(args: &WorkloadArgs, config: Option<&DeploymentConfig>) -> Result<WorkloadProfile, CliError> {
    let mut w = match &args.workload {
        Some(path) => serde_json::from_str(&read(path)?)
            .map_err(|e| CliError::Usage(format!("{}: invalid workload file: {e}", path.display())))?,
        None => {
            let mut w = WorkloadProfile::reference();
            if let Some(c) = config {
                w.rate = c.benchmark.data_generation_frequency;
            }
            w
        }
    };
    for (tier, v) in
        [(Tier::Endpoint, args.tproc_endpoint), (Tier::Edge, args.tproc_edge), (Tier::Cloud, args.tproc_cloud)]
    {
        if let Some(v) = v {
            w.proc_time.insert(tier, v);
        }
    }
    if let Some(v) = args.tpre {
        w.pre_time = v;
    }
    if let Some(v) = args.rate {
        w.rate = v;
    }
    if let Some(v) = args.size {
        w.element_size = v;
    }
    w.check().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(w)
}

fn cmd_validate(cli: &Cli, path: &Path, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let text = read(path)?;
    let (config, diagnostics): (Option<DeploymentConfig>, Vec<Diagnostic>) = match parse_config(&text) {
        Ok(parsed) => (Some(parsed.config), parsed.warnings),
        Err(e) => (None, e.diagnostics().to_vec()),
    };
    let errors = diagnostics.iter().filter(|d| d.is_error()).count();

    if cli.json {
        let mut manifest = RunManifest::new("validate");
        if let Some(c) = &config {
            manifest.deployments.push(ManifestDeployment { name: path.display().to_string(), config: c.clone() });
        }
        emit_json(cli, stdout, &json!({ "manifest": manifest, "valid": errors == 0, "diagnostics": diagnostics }))?;
    } else {
        let mut out = String::new();
        for d in &diagnostics {
            let _ = writeln!(out, "{d}");
        }
        let warnings = diagnostics.len() - errors;
        let _ = writeln!(out, "{}: {errors} error(s), {warnings} warning(s)", path.display());
        emit(cli, stdout, &out)?;
    }
    Ok(if errors == 0 { EXIT_OK } else { EXIT_CONFIG })
}

fn verdict_text(out: &mut String, title: &str, v: &Verdict) {
    let status = if v.viable { "VIABLE" } else { "NOT VIABLE" };
    let _ = writeln!(out, "{title}: {status}, load {}", v.load_percent);
    for c in &v.checks {
        let unit = if c.condition == crate::analytic::Condition::Bandwidth { " Mbit/s" } else { "" };
        let rel = if c.passed { "<=" } else { "> " };
        let _ = writeln!(
            out,
            "  {:<20} {:>10.4} {rel} {:<10.4}{unit} ({})",
            c.condition.to_string(),
            c.demand,
            c.capacity,
            c.load()
        );
    }
}

fn cmd_predict(cli: &Cli, target: &TargetArgs, wargs: &WorkloadArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let (name, config) = load_target(target)?;
    let workload = resolve_workload(wargs, Some(&config))?;
    let topo = topology_of(&config)?;
    let endpoint = topo.source_spec().expect("topology has sources").clone();
    let worker = topo.worker_spec().expect("topology has workers").clone();
    let link = topo.worker_link.expect("offload topology has a link");

    let local = local_viability(&workload, &endpoint).map_err(|e| CliError::Usage(e.to_string()))?;
    let offload = offload_viability(&workload, &endpoint, &worker, topo.endpoints_per_worker, &link)
        .map_err(|e| CliError::Usage(e.to_string()))?;

    if cli.json {
        let mut manifest = RunManifest::new("predict");
        manifest.deployments.push(ManifestDeployment { name: name.clone(), config });
        manifest.workload = Some(workload);
        emit_json(
            cli,
            stdout,
            &json!({
                "manifest": manifest,
                "deployment": name,
                "local": local,
                "offload": {
                    "worker_tier": topo.worker_tier,
                    "endpoints_per_worker": topo.endpoints_per_worker,
                    "verdict": offload,
                },
            }),
        )?;
    } else {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "deployment {name}: {} worker(s) in the {} tier, {} endpoint(s) per worker",
            topo.workers().count(),
            topo.worker_tier,
            topo.endpoints_per_worker
        );
        let _ = writeln!(
            out,
            "workload: rate {} Hz, data {} Mbit/s per endpoint, preprocess {} s",
            workload.rate,
            workload.data_rate(),
            workload.pre_time
        );
        verdict_text(&mut out, &format!("local on endpoint ({} core(s) x {})", endpoint.cores, endpoint.quota), &local);
        verdict_text(
            &mut out,
            &format!("offload to {} worker ({} core(s) x {})", worker.tier, worker.cores, worker.quota),
            &offload,
        );
        emit(cli, stdout, &out)?;
    }
    Ok(EXIT_OK)
}

fn heatmap_family(
    presets: &[String],
    config: Option<&Path>,
) -> Result<(PlacementFamily, Vec<ManifestDeployment>), CliError> {
    let mut deployments = Vec::new();
    for name in presets {
        deployments.push(ManifestDeployment { name: name.clone(), config: load_preset(name)? });
    }
    if let Some(path) = config {
        deployments
            .push(ManifestDeployment { name: path.display().to_string(), config: parse_config(&read(path)?)?.config });
    }
    if deployments.is_empty() {
        return Ok((PlacementFamily::reference(), deployments));
    }

    let mut family: Option<PlacementFamily> = None;
    for d in &deployments {
        let topo = topology_of(&d.config)?;
        let base = family.unwrap_or_else(|| PlacementFamily::new(topo.source_spec().expect("sources").clone()));
        let target = OffloadTarget::from_topology(&topo).expect("offload topology");
        family = Some(base.with_target(target).map_err(|e| CliError::Usage(format!("{}: {e}", d.name)))?);
    }
    Ok((family.expect("non-empty"), deployments))
}

fn cmd_heatmap(
    cli: &Cli,
    presets: &[String],
    config: Option<&Path>,
    wargs: &WorkloadArgs,
    grid: HeatmapSpec,
    policy: Option<&str>,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    let (family, deployments) = heatmap_family(presets, config)?;
    let workload = resolve_workload(wargs, deployments.first().map(|d| &d.config))?;
    let policy: PlacementPolicy = match policy {
        Some(p) => p.parse().map_err(|e: crate::analytic::AnalyticError| CliError::Usage(e.to_string()))?,
        None => PlacementPolicy::default(),
    };
    let usage = |e: crate::analytic::AnalyticError| CliError::Usage(e.to_string());
    let markers = reference_markers(&workload, grid.reference_tier).map_err(usage)?;
    let map = heatmap(&grid, &workload, &family, &policy, &markers).map_err(usage)?;

    let mut manifest = RunManifest::new("heatmap");
    manifest.deployments = deployments;
    manifest.workload = Some(workload);
    manifest.parameters = json!({ "grid": grid, "policy": policy, "family": family });

    if cli.json {
        emit_json(cli, stdout, &json!({ "manifest": manifest, "heatmap": map }))?;
    } else if let Some(out) = &cli.out {
        write_file(out, &map.to_csv())?;
        write_file(&sibling(out, "markers.csv"), &map.markers_csv())?;
        write_file(&sibling(out, "manifest.json"), &serde_json::to_string_pretty(&manifest).expect("json"))?;
    } else {
        let text = format!("{}\n{}", map.to_csv(), map.markers_csv());
        emit(cli, stdout, &text)?;
    }
    Ok(EXIT_OK)
}

/// `grid.csv` -> `grid.<suffix>`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn run_sim(topo: &Topology, workload: &WorkloadProfile, params: &SimParams) -> Result<SimReport, CliError> {
    simulate(topo, workload, params).map_err(|e| CliError::Usage(e.to_string()))
}

fn cmd_simulate(
    cli: &Cli,
    target: &TargetArgs,
    wargs: &WorkloadArgs,
    params: SimParams,
    trace: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    params.check().map_err(|e| CliError::Usage(e.to_string()))?;
    let (name, config) = load_target(target)?;
    let workload = resolve_workload(wargs, Some(&config))?;
    let topo = topology_of(&config)?;
    let report = run_sim(&topo, &workload, &params)?;

    let mut manifest = RunManifest::new("simulate");
    manifest.deployments.push(ManifestDeployment { name: name.clone(), config });
    manifest.workload = Some(workload);
    manifest.seed = Some(params.seed);
    manifest.parameters = json!({ "sim": params });

    if let Some(path) = trace {
        write_file(path, &report.elements_csv())?;
    }
    if cli.json || cli.out.is_some() {
        emit_json(cli, stdout, &json!({ "manifest": manifest, "report": report.to_json(false) }))?;
    } else {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "deployment {name}, seed {}, window {}..{} s",
            params.seed, report.window_start_s, report.window_end_s
        );
        match (&report.latency, &report.breakdown) {
            (Some(l), Some(b)) => {
                let _ = writeln!(
                    out,
                    "end-to-end latency: {:.2} ms (sd {:.2}) over {} elements",
                    l.mean_ms, l.sd_ms, l.count
                );
                let _ = writeln!(
                    out,
                    "  communication {:.2} ms, compute {:.2} ms, queueing {:.2} ms",
                    b.communication_ms, b.compute_ms, b.queueing_ms
                );
            }
            _ => {
                let _ = writeln!(out, "no element completed after the warmup");
            }
        }
        let _ = writeln!(
            out,
            "mean measured load {:.2}%, throughput {:.2} elements/s",
            report.mean_measured_load(),
            report.throughput_per_s
        );
        let grow = report.workers.iter().filter(|w| w.backlog_at_end > w.backlog_at_warmup).count();
        if grow > 0 {
            let _ = writeln!(out, "backlog grew on {grow} of {} worker(s)", report.workers.len());
        }
        emit(cli, stdout, &out)?;
    }
    Ok(EXIT_OK)
}

/// Mean and population standard deviation.
fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spread {
    pub mean: f64,
    pub sd: f64,
}

impl Spread {
    fn of(xs: &[f64]) -> Self {
        let (mean, sd) = mean_sd(xs);
        Self { mean, sd }
    }
}

/// One deployment's row of a comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub deployment: String,
    pub total_ms: Spread,
    pub communication_ms: Spread,
    pub compute_ms: Spread,
    pub queueing_ms: Spread,
    pub measured_load_percent: Spread,
    pub analytic_load_percent: SystemLoad,
    pub seeds: Vec<u64>,
}

/// Runs `repeats` simulations of each deployment with seeds
/// `base_seed + i` and summarizes them. Repetitions run on separate threads.
pub fn compare_deployments(
    deployments: &[(String, Topology)],
    workload: &WorkloadProfile,
    duration: f64,
    repeats: u32,
    base_seed: u64,
) -> Result<Vec<ComparisonRow>, CliError> {
    let mut rows = Vec::new();
    for (name, topo) in deployments {
        let seeds: Vec<u64> = (0..u64::from(repeats)).map(|i| base_seed + i).collect();
        let reports: Vec<Result<SimReport, CliError>> = std::thread::scope(|s| {
            let handles: Vec<_> = seeds
                .iter()
                .map(|seed| s.spawn(move || run_sim(topo, workload, &SimParams::new(duration, *seed))))
                .collect();
            handles.into_iter().map(|h| h.join().expect("simulation thread")).collect()
        });
        let reports = reports.into_iter().collect::<Result<Vec<_>, _>>()?;
        let breakdowns = reports
            .iter()
            .map(|r| {
                r.breakdown.ok_or_else(|| CliError::Usage(format!("{name}: no element completed after the warmup")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let pick =
            |f: fn(&crate::sim::LatencyBreakdown) -> f64| Spread::of(&breakdowns.iter().map(f).collect::<Vec<_>>());

        let worker = topo.worker_spec().expect("workers");
        let demand = crate::topology::demand_on_worker(workload, topo.worker_tier, topo.endpoints_per_worker)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        rows.push(ComparisonRow {
            deployment: name.clone(),
            total_ms: pick(|b| b.total_ms),
            communication_ms: pick(|b| b.communication_ms),
            compute_ms: pick(|b| b.compute_ms),
            queueing_ms: pick(|b| b.queueing_ms),
            measured_load_percent: Spread::of(&reports.iter().map(SimReport::mean_measured_load).collect::<Vec<_>>()),
            analytic_load_percent: crate::analytic::system_load(demand, worker.capacity()),
            seeds,
        });
    }
    Ok(rows)
}

fn cmd_compare(
    cli: &Cli,
    presets: &[String],
    wargs: &WorkloadArgs,
    repeats: u32,
    duration: f64,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    if presets.len() < 2 {
        return Err(CliError::Usage("compare needs at least two presets".into()));
    }
    if repeats == 0 {
        return Err(CliError::Usage("--repeats must be at least 1".into()));
    }
    SimParams::new(duration, cli.seed).check().map_err(|e| CliError::Usage(e.to_string()))?;
    let mut configs = Vec::new();
    for name in presets {
        configs.push(ManifestDeployment { name: name.clone(), config: load_preset(name)? });
    }
    let workload = resolve_workload(wargs, configs.first().map(|d| &d.config))?;
    let deployments =
        configs.iter().map(|d| Ok((d.name.clone(), topology_of(&d.config)?))).collect::<Result<Vec<_>, CliError>>()?;
    let rows = compare_deployments(&deployments, &workload, duration, repeats, cli.seed)?;

    if cli.json {
        let mut manifest = RunManifest::new("compare");
        manifest.deployments = configs;
        manifest.workload = Some(workload);
        manifest.seed = Some(cli.seed);
        manifest.parameters = json!({ "duration": duration, "warmup": duration * 0.1, "repeats": repeats });
        emit_json(cli, stdout, &json!({ "manifest": manifest, "rows": rows }))?;
    } else {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<11} {:>18} {:>18} {:>18} {:>16} {:>10} {:>10}",
            "deployment", "total ms", "communication ms", "compute ms", "queueing ms", "load %", "model %"
        );
        let cell = |s: &Spread| format!("{:.2} ± {:.2}", s.mean, s.sd);
        for r in &rows {
            let _ = writeln!(
                out,
                "{:<11} {:>18} {:>18} {:>18} {:>16} {:>10.2} {:>10}",
                r.deployment,
                cell(&r.total_ms),
                cell(&r.communication_ms),
                cell(&r.compute_ms),
                cell(&r.queueing_ms),
                r.measured_load_percent.mean,
                r.analytic_load_percent.to_string(),
            );
        }
        let _ = writeln!(
            out,
            "{repeats} repetition(s) per deployment, seeds {}..{}",
            cli.seed,
            cli.seed + u64::from(repeats) - 1
        );
        emit(cli, stdout, &out)?;
    }
    Ok(EXIT_OK)
}
