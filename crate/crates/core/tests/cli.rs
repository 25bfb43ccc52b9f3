use std::path::Path;
use std::process::Command;

use continuum_planner::cli::{run_from_args, RunManifest, EXIT_CONFIG, EXIT_IO, EXIT_OK, EXIT_USAGE};
use continuum_planner::{build_topology, simulate, SimParams};
use serde_json::Value;

const SAMPLE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/cloud-10x40.ini");

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_from_args(std::iter::once("continuum-planner").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn assert_keys(v: &Value, keys: &[&str]) {
    let obj = v.as_object().unwrap_or_else(|| panic!("not an object: {v}"));
    for k in keys {
        assert!(obj.contains_key(*k), "missing {k} in {v}");
    }
}

fn assert_manifest(v: &Value, command: &str) -> RunManifest {
    let m: RunManifest = serde_json::from_value(v["manifest"].clone()).expect("manifest schema");
    assert_eq!(m.command, command);
    assert_eq!(m.tool_version, env!("CARGO_PKG_VERSION"));
    m
}

fn without_timestamp(mut v: Value) -> Value {
    v["manifest"].as_object_mut().unwrap().remove("timestamp_unix");
    v
}

#[test]
fn validate_sample_file() {
    let (code, out, _) = run(&["validate", SAMPLE]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().filter(|l| l.starts_with("warning")).count(), 3);
    assert!(out.contains("0 error(s), 3 warning(s)"));

    let v = run_json(&["--json", "validate", SAMPLE]);
    assert_keys(&v, &["manifest", "valid", "diagnostics"]);
    assert_eq!(v["valid"], true);
    assert_eq!(assert_manifest(&v, "validate").deployments.len(), 1);
}

#[test]
fn validate_bad_quota_and_missing_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.ini");
    let text =
        std::fs::read_to_string(SAMPLE).unwrap().replace("quota_per_cpu = 1.0,0,0.5", "quota_per_cpu = 1.5,0,0.5");
    std::fs::write(&path, text).unwrap();
    let (code, out, _) = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_CONFIG);
    assert!(out.contains("error") && out.contains("quota_per_cpu"), "{out}");

    let (code, _, err) = run(&["validate", dir.path().join("absent.ini").to_str().unwrap()]);
    assert_eq!(code, EXIT_IO);
    assert!(err.contains("absent.ini"));
}

#[test]
fn predict_worked_examples() {
    let v = run_json(&["--json", "predict", "--preset", "edge-small"]);
    assert_keys(&v, &["manifest", "deployment", "local", "offload"]);
    assert_keys(&v["local"], &["viable", "failed_conditions", "load_percent", "required_bandwidth", "checks"]);
    assert_eq!(v["local"]["viable"], false);
    assert!((v["local"]["load_percent"].as_f64().unwrap() - 110.0).abs() < 1e-9);
    let off = &v["offload"]["verdict"];
    assert_eq!(off["viable"], true);
    assert!((off["load_percent"].as_f64().unwrap() - 93.3333).abs() < 1e-4);
    assert_eq!(off["checks"].as_array().unwrap().len(), 3);
    assert_eq!(v["offload"]["endpoints_per_worker"], 2);
    let m = assert_manifest(&v, "predict");
    assert_eq!(m.workload.unwrap().rate, 5.0);
}

#[test]
fn predict_flags_override_workload() {
    let v = run_json(&["--json", "predict", "--preset", "edge-small", "--rate", "10"]);
    assert_eq!(v["offload"]["verdict"]["viable"], false);
    let (code, _, _) = run(&["predict", "--preset", "nowhere"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = run(&["predict"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn heatmap_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("grid.csv");
    let (code, _, err) = run(&["--out", out.to_str().unwrap(), "heatmap"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 42);
    assert!(csv.starts_with("proc_time\\rate,0,0.5,1,"));
    let markers = std::fs::read_to_string(dir.path().join("grid.markers.csv")).unwrap();
    assert!(markers.contains("\nA,5,0.11,edge,10,10\n"), "{markers}");
    let manifest: RunManifest =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("grid.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.command, "heatmap");
}

#[test]
fn heatmap_json_and_errors() {
    let v = run_json(&["--json", "heatmap", "--resolution", "5"]);
    assert_keys(&v["heatmap"], &["reference_tier", "rates", "proc_times", "cells", "markers"]);
    assert_eq!(v["heatmap"]["cells"].as_array().unwrap().len(), 5);
    assert_eq!(v["heatmap"]["cells"][0][0], "endpoint");

    assert_eq!(run(&["heatmap", "--rmax", "0"]).0, EXIT_USAGE);
    assert_eq!(run(&["heatmap", "--preset", "mist"]).0, EXIT_USAGE);
    let v = run_json(&["--json", "heatmap", "--preset", "edge-large", "--resolution", "3"]);
    assert_eq!(assert_manifest(&v, "heatmap").deployments[0].name, "edge-large");
}

#[test]
fn simulate_is_reproducible_from_manifest() {
    let args = ["--json", "--seed", "9", "simulate", "--preset", "edge-small", "--duration", "5"];
    let a = run_json(&args);
    let b = run_json(&args);
    assert_eq!(without_timestamp(a.clone()), without_timestamp(b));
    assert_keys(
        &a["report"],
        &["params", "worker_tier", "latency", "breakdown", "workers", "throughput_per_s", "counts"],
    );
    assert!(a["report"].get("elements").is_none());

    let m = assert_manifest(&a, "simulate");
    let params: SimParams = serde_json::from_value(m.parameters["sim"].clone()).unwrap();
    assert_eq!(params.seed, 9);
    let topo = build_topology(&m.deployments[0].config).unwrap();
    let again = simulate(&topo, m.workload.as_ref().unwrap(), &params).unwrap();
    assert_eq!(again.to_json(false), a["report"]);
}

#[test]
fn simulate_trace_and_bad_window() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let (code, out, _) = run(&["simulate", "--preset", "mist", "--duration", "2", "--trace", trace.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("end-to-end latency"));
    let csv = std::fs::read_to_string(&trace).unwrap();
    assert!(csv.starts_with("id,endpoint,worker,generated_ns,"));
    assert!(csv.lines().count() > 10);

    assert_eq!(run(&["simulate", "--preset", "cloud", "--duration", "1", "--warmup", "1"]).0, EXIT_USAGE);
}

#[test]
fn compare_rows_in_given_order() {
    let v = run_json(&[
        "--json",
        "compare",
        "--preset",
        "cloud,edge-large,edge-small,mist",
        "--repeats",
        "2",
        "--duration",
        "5",
    ]);
    let rows = v["rows"].as_array().unwrap();
    let names: Vec<&str> = rows.iter().map(|r| r["deployment"].as_str().unwrap()).collect();
    assert_eq!(names, ["cloud", "edge-large", "edge-small", "mist"]);
    for r in rows {
        assert_keys(
            r,
            &["total_ms", "communication_ms", "compute_ms", "queueing_ms", "analytic_load_percent", "seeds"],
        );
        assert_keys(&r["total_ms"], &["mean", "sd"]);
    }
    assert_eq!(rows[0]["seeds"], serde_json::json!([42, 43]));
}

#[test]
fn compare_single_repeat_and_single_preset() {
    let v =
        run_json(&["--json", "compare", "--preset", "cloud", "--preset", "mist", "--repeats", "1", "--duration", "3"]);
    for r in v["rows"].as_array().unwrap() {
        assert_eq!(r["total_ms"]["sd"], 0.0);
        assert_eq!(r["communication_ms"]["sd"], 0.0);
    }
    assert_eq!(run(&["compare", "--preset", "cloud"]).0, EXIT_USAGE);
}

#[test]
fn binary_exit_codes() {
    let bin = Path::new(env!("CARGO_BIN_EXE_continuum-planner"));
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code().unwrap();
    assert_eq!(status(&["validate", SAMPLE]), EXIT_OK);
    assert_eq!(status(&["validate", "/nonexistent/x.ini"]), EXIT_IO);
    assert_eq!(status(&["frobnicate"]), EXIT_USAGE);
    assert_eq!(status(&["--version"]), EXIT_OK);
}
